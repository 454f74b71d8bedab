"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BraidError(Exception):
    """Base class for all errors raised by braidsig."""


class MalformedToken(BraidError, ValueError):
    """A word token is not of the form ``s<i>`` or ``s<i>^-1``."""


class IndexOutOfRange(BraidError, ValueError):
    """A generator index lies outside ``1..n-1``."""


class StrandMismatch(BraidError, ValueError):
    """Two braids with different strand counts were combined."""


class BudgetExceeded(BraidError):
    """An exhaustive search would exceed its configured operation budget."""


class ParseError(BraidError, ValueError):
    """Serialized data does not follow the expected grammar."""


class InvariantViolation(BraidError, ValueError):
    """Deserialized data parses but violates a canonical-form invariant."""


class ParameterTooSmall(BraidError, ValueError):
    """Scheme parameters are below the supported floor."""


class PartitionInvalid(BraidError, ValueError):
    """A subgroup partition does not split the right-hand strands correctly."""


class ProtocolError(BraidError):
    """Base class for protocol-level failures."""


class PhaseError(ProtocolError):
    """A protocol message was produced or consumed out of order."""


class ChallengeMismatch(ProtocolError):
    """The prover could not reconcile the revealed secret with the challenge."""


class AmbiguousT(ProtocolError):
    """More than one exponent candidate matched during denial recovery."""

    def __init__(self, message: str, candidates: list[int]):
        super().__init__(message)
        self.candidates = candidates


class NoMatch(ProtocolError):
    """No exponent candidate matched during denial recovery."""


class CommitmentInvalid(ProtocolError):
    """A blob commitment does not open with the released randomness."""
