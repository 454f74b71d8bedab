"""Key material, signatures, and their text file formats.

Both schemes share the same key shape: public (α, x) with x = a₁·α·a₂ and
secret (a₁, a₂) drawn from LB_n(l). They differ only in how a signature is
formed, which the ``scheme`` tag records.

File format: ``key=value`` lines, braids in canonical serialization::

    scheme=bdp
    n=8
    l=4
    split=2,2
    hash=sha256
    alpha=B 8 0 4 | ...
    x=B 8 0 9 | ...

Secret key files repeat the public fields and add ``a1=``, ``a2=`` and
``blind_seed=<hex>``. Signature files carry ``scheme``, ``n``,
``blinded``, ``message=<hex>`` and ``s=``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .braid import (
    CanonicalForm,
    full_group,
    inverse,
    left_subgroup,
    multiply,
    random_braid,
)
from .codec import DIGEST_SIZE, HASH_NAME, format_braid, parse_braid, rng_from_bytes
from .errors import ParameterTooSmall, ParseError

SCHEMES = ("bdp", "csp")
MIN_N = 5


def denial_split(n: int) -> tuple[int, int]:
    """Balanced split (n₁, n₂) of the n − ⌊n/2⌋ right strands."""
    total = n - n // 2
    n1 = -(-total // 2)
    return n1, total - n1


@dataclass(frozen=True)
class PublicKey:
    scheme: str
    n: int
    l: int
    alpha: CanonicalForm
    x: CanonicalForm
    split: tuple[int, int] = field(default=(0, 0))
    hash_name: str = HASH_NAME

    def __post_init__(self):
        if self.split == (0, 0):
            object.__setattr__(self, "split", denial_split(self.n))


@dataclass(frozen=True)
class SecretKey:
    scheme: str
    n: int
    l: int
    a1: CanonicalForm
    a2: CanonicalForm
    blind_seed: bytes = bytes(DIGEST_SIZE)


@dataclass(frozen=True)
class Signature:
    message: bytes
    s: CanonicalForm
    blinded: bool = False
    scheme: str = "bdp"


def keygen(n: int, l: int, rng: np.random.Generator, scheme: str = "bdp") -> tuple[PublicKey, SecretKey]:
    """α ∈ B_n(l), a₁, a₂ ∈ LB_n(l), x = a₁·α·a₂."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if n < MIN_N:
        raise ParameterTooSmall(f"n={n} is below the floor of {MIN_N} strands")
    if l < 1:
        raise ParameterTooSmall("l must be at least 1")
    alpha = random_braid(full_group(n), l, rng)
    lb = left_subgroup(n)
    a1 = random_braid(lb, l, rng)
    a2 = random_braid(lb, l, rng)
    x = multiply(multiply(a1, alpha), a2)
    blind_seed = rng.bytes(DIGEST_SIZE)
    pk = PublicKey(scheme, n, l, alpha, x)
    sk = SecretKey(scheme, n, l, a1, a2, blind_seed)
    return pk, sk


def blinding_braid(sk: SecretKey, message: bytes) -> CanonicalForm:
    """The per-message blinder r ∈ LB_n(l), recomputable from the secret key."""
    rng = rng_from_bytes(sk.blind_seed + message)
    return random_braid(left_subgroup(sk.n), sk.l, rng)


def prover_left_key(sk: SecretKey, message: bytes, blinded: bool) -> CanonicalForm:
    """The secret braid standing to the left of y in a valid signature.

    Valid signatures have the shape L·y·a₁⁻¹ with L = a₂ (bdp), r·a₂ (blinded
    bdp) or a₁ (csp); the prover strips L⁻¹ on the left and a₂⁻¹ on the right
    of a challenge.
    """
    if sk.scheme == "csp":
        if blinded:
            raise ValueError("blinding is not defined for the conjugacy scheme")
        return sk.a1
    if blinded:
        return multiply(blinding_braid(sk, message), sk.a2)
    return sk.a2


def unwrap(sk: SecretKey, message: bytes, blinded: bool, q: CanonicalForm) -> CanonicalForm:
    """L⁻¹·q·a₂⁻¹ for the scheme's left key L."""
    left = prover_left_key(sk, message, blinded)
    return multiply(multiply(inverse(left), q), inverse(sk.a2))


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def _fields(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"line {lineno}: expected key=value")
        if key in out:
            raise ParseError(f"line {lineno}: duplicate field {key!r}")
        out[key] = value
    return out


def _need(fields: dict[str, str], key: str) -> str:
    try:
        return fields[key]
    except KeyError:
        raise ParseError(f"missing field {key!r}") from None


def _int(fields: dict[str, str], key: str) -> int:
    try:
        return int(_need(fields, key))
    except ValueError:
        raise ParseError(f"field {key!r} is not an integer") from None


def _hex(value: str, key: str) -> bytes:
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise ParseError(f"field {key!r} is not hex") from None


def _header(pk: PublicKey) -> list[str]:
    return [
        f"scheme={pk.scheme}",
        f"n={pk.n}",
        f"l={pk.l}",
        f"split={pk.split[0]},{pk.split[1]}",
        f"hash={pk.hash_name}",
        f"alpha={format_braid(pk.alpha)}",
        f"x={format_braid(pk.x)}",
    ]


def dump_public(pk: PublicKey) -> str:
    return "\n".join(_header(pk)) + "\n"


def dump_secret(pk: PublicKey, sk: SecretKey) -> str:
    lines = _header(pk) + [
        f"a1={format_braid(sk.a1)}",
        f"a2={format_braid(sk.a2)}",
        f"blind_seed={sk.blind_seed.hex()}",
    ]
    return "\n".join(lines) + "\n"


_PUBLIC = {"scheme", "n", "l", "split", "hash", "alpha", "x"}
_SECRET = _PUBLIC | {"a1", "a2", "blind_seed"}


def _public_from(fields: dict[str, str]) -> PublicKey:
    scheme = _need(fields, "scheme")
    if scheme not in SCHEMES:
        raise ParseError(f"unknown scheme {scheme!r}")
    n, l = _int(fields, "n"), _int(fields, "l")
    try:
        n1, n2 = (int(v) for v in _need(fields, "split").split(","))
    except ValueError:
        raise ParseError("split must be 'n1,n2'") from None
    if n1 + n2 != n - n // 2:
        raise ParseError(f"split {n1},{n2} does not cover the {n - n // 2} right strands")
    hash_name = _need(fields, "hash")
    if hash_name != HASH_NAME:
        raise ParseError(f"unsupported hash {hash_name!r}")
    alpha = parse_braid(_need(fields, "alpha"), n)
    x = parse_braid(_need(fields, "x"), n)
    return PublicKey(scheme, n, l, alpha, x, (n1, n2), hash_name)


def load_public(text: str) -> PublicKey:
    """Read a public key; a secret key file is accepted and its secrets ignored."""
    fields = _fields(text)
    unknown = set(fields) - _SECRET
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    return _public_from(fields)


def load_secret(text: str) -> tuple[PublicKey, SecretKey]:
    fields = _fields(text)
    unknown = set(fields) - _SECRET
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    pk = _public_from(fields)
    seed = _hex(_need(fields, "blind_seed"), "blind_seed")
    if len(seed) != DIGEST_SIZE:
        raise ParseError(f"blind_seed must be {DIGEST_SIZE} bytes")
    sk = SecretKey(
        pk.scheme,
        pk.n,
        pk.l,
        parse_braid(_need(fields, "a1"), pk.n),
        parse_braid(_need(fields, "a2"), pk.n),
        seed,
    )
    return pk, sk


def dump_signature(sig: Signature) -> str:
    lines = [
        f"scheme={sig.scheme}",
        f"n={sig.s.n}",
        f"blinded={int(sig.blinded)}",
        f"message={sig.message.hex()}",
        f"s={format_braid(sig.s)}",
    ]
    return "\n".join(lines) + "\n"


def load_signature(text: str) -> Signature:
    fields = _fields(text)
    unknown = set(fields) - {"scheme", "n", "blinded", "message", "s"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    scheme = _need(fields, "scheme")
    if scheme not in SCHEMES:
        raise ParseError(f"unknown scheme {scheme!r}")
    blinded = _need(fields, "blinded")
    if blinded not in ("0", "1"):
        raise ParseError("blinded must be 0 or 1")
    n = _int(fields, "n")
    return Signature(
        message=_hex(_need(fields, "message"), "message"),
        s=parse_braid(_need(fields, "s"), n),
        blinded=blinded == "1",
        scheme=scheme,
    )
