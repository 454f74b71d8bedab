"""Hashing into and out of B_n, blob commitments, and the text serialization.

Canonical serialization grammar (one ASCII line, newline-terminated)::

    B <n> <u> <k> | <perm_1> | ... | <perm_k>

where each perm lists the 1-based images of 1..n separated by commas. The
identity of B_3 serializes to ``B 3 0 0 |``.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

import numpy as np

from .braid import CanonicalForm, full_group, random_braid, validate
from .errors import ParseError

HASH_NAME = "sha256"
DIGEST_SIZE = 32


def digest(data: bytes) -> bytes:
    return hashlib.new(HASH_NAME, data).digest()


def rng_from_bytes(seed: bytes) -> np.random.Generator:
    """A deterministic generator seeded by the digest of ``seed``."""
    return np.random.default_rng(int.from_bytes(digest(seed), "big"))


def hash_to_braid(message: bytes, n: int, l: int) -> CanonicalForm:
    """H: {0,1}* → B_n(l), drawn exactly like random_braid from a digest seed."""
    return random_braid(full_group(n), l, rng_from_bytes(message))


def braid_digest(a: CanonicalForm) -> bytes:
    """h: B_n → {0,1}^256 over the canonical serialization."""
    return digest(serialize(a))


@dataclass(frozen=True)
class Commitment:
    value: bytes

    def __post_init__(self):
        if len(self.value) != DIGEST_SIZE:
            raise ValueError(f"commitment must be {DIGEST_SIZE} bytes")

    def hex(self) -> str:
        return self.value.hex()


def _encode_t(t: int) -> bytes:
    return t.to_bytes(8, "big")


def blob_commit(r: bytes, t: int) -> Commitment:
    """digest(r ‖ t as 8-byte big-endian); hiding only while r stays secret."""
    if len(r) != DIGEST_SIZE:
        raise ValueError(f"blob randomness must be {DIGEST_SIZE} bytes")
    if t < 1:
        raise ValueError("committed value must be at least 1")
    return Commitment(digest(r + _encode_t(t)))


def blob_verify(c: Commitment, r: bytes, t: int) -> bool:
    if len(r) != DIGEST_SIZE or t < 1:
        return False
    return hmac.compare_digest(c.value, digest(r + _encode_t(t)))


def blob_open(c: Commitment, r: bytes, k: int) -> int | None:
    """Recover the committed value by trying 1..k; None if nothing opens."""
    for t in range(1, k + 1):
        if blob_verify(c, r, t):
            return t
    return None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def format_braid(a: CanonicalForm) -> str:
    """The canonical line without its trailing newline."""
    head = f"B {a.n} {a.u} {len(a.factors)} |"
    if not a.factors:
        return head
    body = " | ".join(",".join(str(v + 1) for v in f) for f in a.factors)
    return f"{head} {body}"


def serialize(a: CanonicalForm) -> bytes:
    return (format_braid(a) + "\n").encode("ascii")


def parse_braid(text: str, n: int | None = None) -> CanonicalForm:
    """Parse one canonical line (trailing newline optional) and validate it."""
    line = text[:-1] if text.endswith("\n") else text
    if "\n" in line or line != line.strip():
        raise ParseError("canonical braid must be a single line without padding")
    head, sep, body = line.partition(" |")
    if not sep:
        raise ParseError(f"missing '|' in {line!r}")
    parts = head.split(" ")
    if len(parts) != 4 or parts[0] != "B":
        raise ParseError(f"bad header {head!r}")
    try:
        bn, u, k = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError as exc:
        raise ParseError(f"bad header {head!r}") from exc
    if n is not None and bn != n:
        raise ParseError(f"expected B_{n}, found B_{bn}")
    if k < 0:
        raise ParseError("negative factor count")
    if k == 0:
        if body:
            raise ParseError("identity-length braid carries factor data")
        tables = []
    else:
        if not body.startswith(" "):
            raise ParseError(f"bad factor list in {line!r}")
        chunks = body[1:].split(" | ")
        if len(chunks) != k:
            raise ParseError(f"header announces {k} factors, found {len(chunks)}")
        tables = []
        for chunk in chunks:
            try:
                images = tuple(int(v) - 1 for v in chunk.split(","))
            except ValueError as exc:
                raise ParseError(f"bad permutation {chunk!r}") from exc
            if any(str(v + 1) != s for v, s in zip(images, chunk.split(","))):
                raise ParseError(f"non-canonical integer in {chunk!r}")
            tables.append(images)
    a = CanonicalForm(bn, u, tuple(tables))
    validate(a)
    return a


def deserialize(data: bytes, n: int | None = None) -> CanonicalForm:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError("canonical braids are ASCII") from exc
    if not text.endswith("\n"):
        raise ParseError("canonical braid must be newline-terminated")
    return parse_braid(text, n)

