"""Conjugacy-based undeniable signatures with a zero-knowledge denial.

Signatures are s = a₁·y·a₁⁻¹. Confirmation reuses the sessions of
:mod:`braidsig.bdp` (the prover's unwrap becomes a₁⁻¹·Q·a₂⁻¹). Denial runs
five steps around a hidden exponent t ∈ {1..k}::

    1 V → P  Q₁ = y^t·a⁻¹·α·a,  Q₂ = s^t·a⁻¹·x·a
    2 P → V  commitment to the recovered t′
    3 V → P  a
    4 P → V  blob randomness r, after re-deriving (Q₁, Q₂) from a
    5 V      "invalid" iff the blob opens to t

The prover recovers t from δ = Q₂·(a₁·Q₁·a₂)⁻¹, which equals
s^t·(a₁·y^t·a₁⁻¹)⁻¹. For a valid signature δ = e for every t, so the prover
cannot deny it.
"""

from __future__ import annotations

import numpy as np

from .braid import CanonicalForm, identity, inverse, multiply, power, product, random_braid, right_subgroup
from .codec import DIGEST_SIZE, Commitment, blob_commit, blob_open, hash_to_braid
from .errors import AmbiguousT, ChallengeMismatch, CommitmentInvalid, NoMatch
from .keys import PublicKey, SecretKey, Signature
from .transcript import Session, Transcript

DEFAULT_K = 16

INVALID, REJECT_CLAIM = "invalid", "reject-claim"

_ABORTED = -1


def sign_csp(sk: SecretKey, pk: PublicKey, message: bytes) -> Signature:
    y = hash_to_braid(message, pk.n, pk.l)
    s = product([sk.a1, y, inverse(sk.a1)])
    return Signature(message, s, blinded=False, scheme="csp")


def denial_challenge(pk: PublicKey, y: CanonicalForm, s: CanonicalForm, a: CanonicalForm, t: int) -> tuple[CanonicalForm, CanonicalForm]:
    a_inv = inverse(a)
    q1 = product([power(y, t), a_inv, pk.alpha, a])
    q2 = product([power(s, t), a_inv, pk.x, a])
    return q1, q2


def challenge_delta(sk: SecretKey, q1: CanonicalForm, q2: CanonicalForm) -> CanonicalForm:
    """δ = Q₂·(a₁·Q₁·a₂)⁻¹."""
    return multiply(q2, inverse(product([sk.a1, q1, sk.a2])))


def matching_exponents(sk: SecretKey, y: CanonicalForm, s: CanonicalForm, delta: CanonicalForm, k: int) -> list[int]:
    """Every t in 1..k with δ = s^t·(a₁·y^t·a₁⁻¹)⁻¹ = s^t·w^{-t}, w = a₁·y·a₁⁻¹."""
    w_inv = product([sk.a1, inverse(y), inverse(sk.a1)])
    s_t = identity(s.n)
    w_neg_t = identity(s.n)
    found = []
    for t in range(1, k + 1):
        s_t = multiply(s_t, s)
        w_neg_t = multiply(w_neg_t, w_inv)
        if multiply(s_t, w_neg_t) == delta:
            found.append(t)
    return found


def recover_exponent(sk: SecretKey, y: CanonicalForm, s: CanonicalForm, q1: CanonicalForm, q2: CanonicalForm, k: int) -> int:
    """The unique t′ consistent with the challenge, or AmbiguousT / NoMatch."""
    delta = challenge_delta(sk, q1, q2)
    found = matching_exponents(sk, y, s, delta, k)
    if not found:
        raise NoMatch("no exponent in 1..k explains the challenge")
    if len(found) > 1:
        raise AmbiguousT(f"{len(found)} exponents match the challenge", found)
    return found[0]


class ZkDenialVerifier(Session):
    role = "V"

    def __init__(
        self,
        pk: PublicKey,
        message: bytes,
        s: CanonicalForm,
        rng: np.random.Generator,
        k: int = DEFAULT_K,
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        if k < 1:
            raise ValueError("k must be at least 1")
        self.pk = pk
        self.message = message
        self.s = s
        self.y = hash_to_braid(message, pk.n, pk.l)
        self.rng = rng
        self.k = k
        self.a: CanonicalForm | None = None
        self.t: int | None = None
        self.commitment: Commitment | None = None
        self.verdict: str | None = None

    def begin(self, a: CanonicalForm | None = None, t: int | None = None) -> tuple[CanonicalForm, CanonicalForm]:
        """Step 1. ``a`` and ``t`` override the random draws (test hook)."""
        self._enter(0, "begin")
        if a is None:
            a = random_braid(right_subgroup(self.pk.n), self.pk.l, self.rng)
        if t is None:
            t = int(self.rng.integers(1, self.k + 1))
        if not 1 <= t <= self.k:
            raise ValueError(f"t must lie in 1..{self.k}")
        self.a, self.t = a, t
        q1, q2 = denial_challenge(self.pk, self.y, self.s, a, t)
        self.phase = 1
        self._emit(1, "challenge", q1, q2)
        return q1, q2

    def reveal(self, commitment: Commitment) -> CanonicalForm:
        """Step 3: store the prover's blob and disclose a."""
        self._enter(1, "reveal")
        self.commitment = commitment
        self.phase = 2
        self._emit(3, "reveal", self.a)
        return self.a

    def conclude(self, r: bytes) -> str:
        """Step 5: open the blob; "invalid" iff it holds the secret t."""
        self._enter(2, "conclude")
        opened = blob_open(self.commitment, r, self.k)
        if opened is None:
            self.phase = _ABORTED
            raise CommitmentInvalid("blob does not open to any t in 1..k")
        self.verdict = INVALID if opened == self.t else REJECT_CLAIM
        self.phase = 3
        self._emit(5, "verdict", self.verdict)
        return self.verdict


class ZkDenialProver(Session):
    role = "P"

    def __init__(
        self,
        pk: PublicKey,
        sk: SecretKey,
        message: bytes,
        s: CanonicalForm,
        rng: np.random.Generator,
        k: int = DEFAULT_K,
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        self.pk = pk
        self.sk = sk
        self.message = message
        self.s = s
        self.y = hash_to_braid(message, pk.n, pk.l)
        self.rng = rng
        self.k = k
        self.challenge: tuple[CanonicalForm, CanonicalForm] | None = None
        self.t: int | None = None
        self.r: bytes | None = None

    def _choose(self, q1: CanonicalForm, q2: CanonicalForm) -> int:
        return recover_exponent(self.sk, self.y, self.s, q1, q2, self.k)

    def recover(self, q1: CanonicalForm, q2: CanonicalForm) -> Commitment:
        """Step 2: find t′ by trial and commit to it under fresh randomness."""
        self._enter(0, "recover")
        try:
            self.t = self._choose(q1, q2)
        except (AmbiguousT, NoMatch):
            self.phase = _ABORTED
            raise
        self.challenge = (q1, q2)
        self.r = self.rng.bytes(DIGEST_SIZE)
        commitment = blob_commit(self.r, self.t)
        self.phase = 1
        self._emit(2, "commit", commitment)
        return commitment

    def check_and_open(self, a: CanonicalForm) -> bytes:
        """Step 4: release r only if a reproduces the challenge for t′."""
        self._enter(1, "open")
        if denial_challenge(self.pk, self.y, self.s, a, self.t) != self.challenge:
            self.phase = _ABORTED
            raise ChallengeMismatch("revealed a does not reproduce the challenge")
        self.phase = 2
        self._emit(4, "open", self.r)
        return self.r


class GuessingZkDenialProver(ZkDenialProver):
    """A prover without the secret key: commits to a uniform guess of t.

    It skips the step-4 consistency check, since it cannot tell which t the
    challenge was built from.
    """

    def __init__(self, pk, message, s, rng, k=DEFAULT_K, transcript=None):
        super().__init__(pk, None, message, s, rng, k, transcript)

    def _choose(self, q1, q2):
        return int(self.rng.integers(1, self.k + 1))

    def check_and_open(self, a):
        self._enter(1, "open")
        self.phase = 2
        self._emit(4, "open", self.r)
        return self.r


def run_zk_denial(
    pk: PublicKey,
    sk: SecretKey | None,
    sig: Signature,
    verifier_rng: np.random.Generator,
    prover_rng: np.random.Generator,
    k: int = DEFAULT_K,
    transcript: Transcript | None = None,
) -> str:
    """Run both roles in-process. ``sk=None`` plays the guessing prover."""
    verifier = ZkDenialVerifier(pk, sig.message, sig.s, verifier_rng, k, transcript)
    if sk is None:
        prover = GuessingZkDenialProver(pk, sig.message, sig.s, prover_rng, k, transcript)
    else:
        prover = ZkDenialProver(pk, sk, sig.message, sig.s, prover_rng, k, transcript)
    q1, q2 = verifier.begin()
    commitment = prover.recover(q1, q2)
    a = verifier.reveal(commitment)
    return verifier.conclude(prover.check_and_open(a))
