"""Decomposition-based undeniable signatures.

Signatures are s = a₂·y·a₁⁻¹ (or r·a₂·y·a₁⁻¹ when blinded) with y = H(m).
Confirmation and denial are two-party state machines; each role lives in its
own session object and exchanges plain braids with its peer.

Confirmation (zero-knowledge, five steps)::

    1 V → P  Q = challenge(form, secrets, s, x)
    2 P → V  R = b·(L⁻¹·Q·a₂⁻¹)·c
    3 V → P  secrets
    4 P → V  (b, c)      after re-deriving Q from the secrets
    5 V      accept iff R = b·challenge(form, secrets, y, α)·c

The non-zero-knowledge variant stops after step 2 with b = c = e and the
prover never sees the secrets; it is kept to demonstrate the relay attack.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .braid import (
    CanonicalForm,
    SubgroupSpec,
    full_group,
    inverse,
    multiply,
    product,
    random_braid,
    right_subgroup,
)
from .codec import hash_to_braid
from .errors import ChallengeMismatch, ParameterTooSmall
from .keys import PublicKey, SecretKey, Signature, blinding_braid, unwrap
from .transcript import Session, Transcript

CHALLENGE_FORMS = {"std": 1, "v1": 2, "v2": 2, "v3": 3}

ACCEPT, REJECT = "accept", "reject"
INVALID, IMPROPER = "invalid", "improper"

_ABORTED = -1


def sign(sk: SecretKey, pk: PublicKey, message: bytes) -> Signature:
    y = hash_to_braid(message, pk.n, pk.l)
    s = multiply(multiply(sk.a2, y), inverse(sk.a1))
    return Signature(message, s, blinded=False, scheme="bdp")


def sign_blinded(sk: SecretKey, pk: PublicKey, message: bytes) -> Signature:
    """r·a₂·y·a₁⁻¹ with r derived from (blind_seed, message)."""
    y = hash_to_braid(message, pk.n, pk.l)
    r = blinding_braid(sk, message)
    s = product([r, sk.a2, y, inverse(sk.a1)])
    return Signature(message, s, blinded=True, scheme="bdp")


def is_valid(sk: SecretKey, pk: PublicKey, sig: Signature) -> bool:
    """Secret-side validity predicate (what the protocols decide interactively)."""
    if sk.scheme == "csp":
        from .csp import sign_csp

        return sign_csp(sk, pk, sig.message).s == sig.s
    expected = sign_blinded(sk, pk, sig.message) if sig.blinded else sign(sk, pk, sig.message)
    return expected.s == sig.s


def challenge_form(form: str, secrets: Sequence[CanonicalForm], first: CanonicalForm, second: CanonicalForm) -> CanonicalForm:
    """Build a confirmation challenge around the pair (first, second).

    With (first, second) = (s, x) this is the challenge Q; with (y, α) it is
    what an honest unwrap of Q must equal, because every secret commutes
    with the signer's LB_n braids.
    """
    if len(secrets) != CHALLENGE_FORMS[form]:
        raise ValueError(f"form {form!r} takes {CHALLENGE_FORMS[form]} secret braids")
    if form == "std":
        (a,) = secrets
        return product([inverse(a), first, second, a])
    if form == "v1":
        a, b = secrets
        return product([a, first, second, b])
    if form == "v2":
        a, b = secrets
        return product([inverse(a), first, a, inverse(b), second, b])
    a, b, c = secrets
    return product([a, first, b, second, c])


class ConfirmationVerifier(Session):
    role = "V"

    def __init__(
        self,
        pk: PublicKey,
        message: bytes,
        s: CanonicalForm,
        rng: np.random.Generator,
        form: str = "std",
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        if form not in CHALLENGE_FORMS:
            raise ValueError(f"unknown challenge form {form!r}")
        self.pk = pk
        self.message = message
        self.s = s
        self.y = hash_to_braid(message, pk.n, pk.l)
        self.rng = rng
        self.form = form
        self.secrets: tuple[CanonicalForm, ...] = ()
        self.challenge: CanonicalForm | None = None
        self.response: CanonicalForm | None = None
        self.accepted: bool | None = None

    def begin(self, secrets: Sequence[CanonicalForm] | None = None) -> CanonicalForm:
        """Step 1. ``secrets`` overrides the random RB_n(l) draws (test hook)."""
        self._enter(0, "begin")
        if secrets is None:
            rb = right_subgroup(self.pk.n)
            secrets = [random_braid(rb, self.pk.l, self.rng) for _ in range(CHALLENGE_FORMS[self.form])]
        self.secrets = tuple(secrets)
        self.challenge = challenge_form(self.form, self.secrets, self.s, self.pk.x)
        self.phase = 1
        self._emit(1, "challenge", self.challenge)
        return self.challenge

    def reveal(self, response: CanonicalForm) -> tuple[CanonicalForm, ...]:
        """Step 3: store R and disclose the challenge secrets."""
        self._enter(1, "reveal")
        self.response = response
        self.phase = 2
        self._emit(3, "reveal", *self.secrets)
        return self.secrets

    def verify(self, b: CanonicalForm, c: CanonicalForm) -> bool:
        """Step 5."""
        self._enter(2, "verify")
        expected = product([b, challenge_form(self.form, self.secrets, self.y, self.pk.alpha), c])
        self.accepted = expected == self.response
        self.phase = 3
        self._emit(5, "verdict", ACCEPT if self.accepted else REJECT)
        return self.accepted

    def verify_direct(self, response: CanonicalForm) -> bool:
        """Non-zero-knowledge step 3: accept iff R equals the unblinded target."""
        self._enter(1, "verify")
        self.response = response
        self.accepted = response == challenge_form(self.form, self.secrets, self.y, self.pk.alpha)
        self.phase = 3
        self._emit(3, "verdict", ACCEPT if self.accepted else REJECT)
        return self.accepted


class ConfirmationProver(Session):
    role = "P"

    def __init__(
        self,
        pk: PublicKey,
        sk: SecretKey,
        message: bytes,
        s: CanonicalForm,
        rng: np.random.Generator | None = None,
        form: str = "std",
        blinded: bool = False,
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        self.pk = pk
        self.sk = sk
        self.message = message
        self.s = s
        self.rng = rng
        self.form = form
        self.blinded = blinded
        self.challenge: CanonicalForm | None = None
        self.blinders: tuple[CanonicalForm, CanonicalForm] | None = None

    def respond(self, challenge: CanonicalForm, blinders: tuple[CanonicalForm, CanonicalForm] | None = None) -> CanonicalForm:
        """Step 2: R = b·(L⁻¹·Q·a₂⁻¹)·c with fresh b, c ∈ B_n(l)."""
        self._enter(0, "respond")
        if blinders is None:
            full = full_group(self.pk.n)
            blinders = (random_braid(full, self.pk.l, self.rng), random_braid(full, self.pk.l, self.rng))
        self.blinders = blinders
        self.challenge = challenge
        b, c = blinders
        response = product([b, unwrap(self.sk, self.message, self.blinded, challenge), c])
        self.phase = 1
        self._emit(2, "response", response)
        return response

    def check_and_open(self, secrets: Sequence[CanonicalForm]) -> tuple[CanonicalForm, CanonicalForm]:
        """Step 4: release (b, c) only if the secrets reproduce the challenge."""
        self._enter(1, "open")
        if len(secrets) != CHALLENGE_FORMS[self.form] or (
            challenge_form(self.form, secrets, self.s, self.pk.x) != self.challenge
        ):
            self.phase = _ABORTED
            raise ChallengeMismatch("revealed secrets do not reproduce the challenge")
        self.phase = 2
        self._emit(4, "open", *self.blinders)
        return self.blinders

    def respond_direct(self, challenge: CanonicalForm) -> CanonicalForm:
        """Non-zero-knowledge step 2: answer L⁻¹·Q·a₂⁻¹ without any check."""
        self._enter(0, "respond")
        self.challenge = challenge
        response = unwrap(self.sk, self.message, self.blinded, challenge)
        self.phase = 2
        self._emit(2, "response", response)
        return response


def run_confirmation(
    pk: PublicKey,
    sk: SecretKey,
    sig: Signature,
    verifier_rng: np.random.Generator,
    prover_rng: np.random.Generator,
    form: str = "std",
    zk: bool = True,
    transcript: Transcript | None = None,
) -> bool:
    """Run both roles in-process; True when the verifier accepts."""
    verifier = ConfirmationVerifier(pk, sig.message, sig.s, verifier_rng, form, transcript)
    prover = ConfirmationProver(pk, sk, sig.message, sig.s, prover_rng, form, sig.blinded, transcript)
    q = verifier.begin()
    if not zk:
        return verifier.verify_direct(prover.respond_direct(q))
    r = prover.respond(q)
    secrets = verifier.reveal(r)
    b, c = prover.check_and_open(secrets)
    return verifier.verify(b, c)


# ---------------------------------------------------------------------------
# denial
# ---------------------------------------------------------------------------

def denial_blocks(pk: PublicKey) -> tuple[SubgroupSpec, SubgroupSpec]:
    """SRB_{n₁} and SRB_{n₂}: the two commuting halves of RB_n from the key's split."""
    n1, n2 = pk.split
    if n1 < 2 or n2 < 2:
        raise ParameterTooSmall(f"denial needs two nontrivial blocks, split is {n1},{n2}")
    h = pk.n // 2
    return SubgroupSpec(pk.n, h + 1, h + n1 - 1), SubgroupSpec(pk.n, h + n1 + 1, h + n1 + n2 - 1)


class DenialVerifier(Session):
    role = "V"

    def __init__(
        self,
        pk: PublicKey,
        message: bytes,
        s: CanonicalForm,
        rng: np.random.Generator,
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        self.pk = pk
        self.message = message
        self.s = s
        self.rng = rng
        self.blocks = denial_blocks(pk)
        self.secrets: tuple[CanonicalForm, CanonicalForm] | None = None
        self.verdict: str | None = None

    def begin(self, secrets: tuple[CanonicalForm, CanonicalForm] | None = None) -> tuple[CanonicalForm, CanonicalForm]:
        """Step 1: Q₁ = a⁻¹·s·x·a, Q₂ = b⁻¹·s·x·b with a, b from the two blocks."""
        self._enter(0, "begin")
        if secrets is None:
            secrets = tuple(random_braid(blk, self.pk.l, self.rng) for blk in self.blocks)
        self.secrets = secrets
        a, b = secrets
        sx = multiply(self.s, self.pk.x)
        q1 = product([inverse(a), sx, a])
        q2 = product([inverse(b), sx, b])
        self.phase = 1
        self._emit(1, "challenge", q1, q2)
        return q1, q2

    def verify(self, r1: CanonicalForm, r2: CanonicalForm) -> str:
        """Step 3: "invalid" iff b⁻¹·R₁·b = a⁻¹·R₂·a, otherwise "improper"."""
        self._enter(1, "verify")
        a, b = self.secrets
        lhs = product([inverse(b), r1, b])
        rhs = product([inverse(a), r2, a])
        self.verdict = INVALID if lhs == rhs else IMPROPER
        self.phase = 2
        self._emit(3, "verdict", self.verdict)
        return self.verdict


class DenialProver(Session):
    role = "P"

    def __init__(
        self,
        pk: PublicKey,
        sk: SecretKey,
        message: bytes,
        s: CanonicalForm,
        blinded: bool = False,
        transcript: Transcript | None = None,
    ):
        super().__init__(transcript)
        self.pk = pk
        self.sk = sk
        self.message = message
        self.s = s
        self.blinded = blinded

    def respond(self, q1: CanonicalForm, q2: CanonicalForm) -> tuple[CanonicalForm, CanonicalForm]:
        """Step 2: R_i = L⁻¹·Q_i·a₂⁻¹."""
        self._enter(0, "respond")
        r1 = unwrap(self.sk, self.message, self.blinded, q1)
        r2 = unwrap(self.sk, self.message, self.blinded, q2)
        self.phase = 1
        self._emit(2, "response", r1, r2)
        return r1, r2


def run_denial(
    pk: PublicKey,
    sk: SecretKey,
    sig: Signature,
    verifier_rng: np.random.Generator,
    transcript: Transcript | None = None,
) -> str:
    verifier = DenialVerifier(pk, sig.message, sig.s, verifier_rng, transcript)
    prover = DenialProver(pk, sk, sig.message, sig.s, sig.blinded, transcript)
    q1, q2 = verifier.begin()
    return verifier.verify(*prover.respond(q1, q2))
