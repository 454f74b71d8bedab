"""
Exact arithmetic in the braid group B_n through left canonical forms.

A braid is stored as Δ^u A_1 ... A_k where every A_i is a permutation braid
other than e and Δ, and each adjacent pair is left-weighted:
starting_set(A_{i+1}) ⊆ finishing_set(A_i). This form is unique, so two
braids are equal iff their CanonicalForm values compare equal.

Conventions used throughout the module:

- Internally a factor is a tuple ``p`` of 0-based images: the strand that
  starts at top position ``i`` ends at bottom position ``p[i]``. Public
  helpers (PermutationFactor, perm_of, the serialization grammar) speak
  1-based images.
- Products are read top to bottom, so the permutation of ``ab`` is
  "perm(a) then perm(b)": ``compose(p, q)[i] = q[p[i]]``.
- Generator indices in words and descent sets are 1-based (σ_1 .. σ_{n-1}).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    IndexOutOfRange,
    InvariantViolation,
    MalformedToken,
    ParameterTooSmall,
    StrandMismatch,
)

Perm = tuple[int, ...]

DEFAULT_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# Permutation-level primitives (0-based)
# ---------------------------------------------------------------------------

def _identity(n: int) -> Perm:
    return tuple(range(n))


def _reversal(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def _transposition(n: int, i: int) -> Perm:
    """Permutation of σ_{i+1}, i.e. swapping 0-based positions i and i+1."""
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def _invert(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for pos, v in enumerate(p):
        inv[v] = pos
    return inv


def _compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    return tuple(q[v] for v in p)


def _tau(p: Perm) -> Perm:
    """Conjugation by Δ on a permutation braid."""
    n = len(p)
    m = n - 1
    return tuple(m - p[m - j] for j in range(n))


def _left_complement(p: Perm) -> Perm:
    """The factor Δ·p⁻¹ (positive, simple)."""
    inv = _invert(p)
    n = len(p)
    return tuple(inv[n - 1 - j] for j in range(n))


def _right_complement(p: Perm) -> Perm:
    """The factor p⁻¹·Δ (positive, simple)."""
    inv = _invert(p)
    m = len(p) - 1
    return tuple(m - v for v in inv)


def _descents(p: Sequence[int]) -> set[int]:
    return {i for i in range(len(p) - 1) if p[i] > p[i + 1]}


def _weight_pair(a: Perm, b: Perm) -> tuple[Perm, Perm]:
    """Make the pair (a, b) left-weighted by sliding crossings from b into a.

    Returns the inputs themselves (same objects) when nothing moves.
    """
    n = len(a)
    ainv = [0] * n
    for pos, v in enumerate(a):
        ainv[v] = pos
    bl = list(b)
    moved = False
    i = 0
    last = n - 1
    while i < last:
        # i in starting_set(b) and i not in finishing_set(a)
        if bl[i] > bl[i + 1] and ainv[i] < ainv[i + 1]:
            bl[i], bl[i + 1] = bl[i + 1], bl[i]
            ainv[i], ainv[i + 1] = ainv[i + 1], ainv[i]
            moved = True
            if i:
                i -= 1
        else:
            i += 1
    if not moved:
        return a, b
    anew = [0] * n
    for v, pos in enumerate(ainv):
        anew[pos] = v
    return tuple(anew), tuple(bl)


def _append_factor(out: list[Perm], f: Perm) -> None:
    """Right-multiply a left-weighted factor list by one simple factor."""
    out.append(f)
    j = len(out) - 1
    while j > 0:
        a = out[j - 1]
        a2, b2 = _weight_pair(a, out[j])
        if a2 is a:
            break
        out[j - 1] = a2
        out[j] = b2
        j -= 1


def _canonical(n: int, u: int, raw: Iterable[Perm], weighted: Sequence[Perm] = ()) -> "CanonicalForm":
    """Normalize Δ^u · weighted · raw, where ``weighted`` is already left-weighted."""
    ident = _identity(n)
    delta = _reversal(n)
    out = list(weighted)
    for f in raw:
        if f != ident:
            _append_factor(out, f)
    lo, hi = 0, len(out)
    while lo < hi and out[lo] == delta:
        lo += 1
    while hi > lo and out[hi - 1] == ident:
        hi -= 1
    return CanonicalForm(n, u + lo, tuple(out[lo:hi]))


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"s(\d+)(\^-1)?")


@dataclass(frozen=True)
class BraidWord:
    """A free word over signed Artin generators; letters are (index, ±1)."""

    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise IndexOutOfRange(f"braid index must be at least 2, got {self.n}")
        for i, sign in self.letters:
            if not 1 <= i <= self.n - 1:
                raise IndexOutOfRange(f"generator s{i} is not in B_{self.n}")
            if sign not in (1, -1):
                raise MalformedToken(f"sign must be +1 or -1, got {sign}")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.n != other.n:
            raise StrandMismatch(f"B_{self.n} word times B_{other.n} word")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple((i, -s) for i, s in reversed(self.letters)))

    def __str__(self) -> str:
        return word_to_text(self)


def parse_word(text: str, n: int) -> BraidWord:
    """Parse whitespace-separated ``s<i>`` / ``s<i>^-1`` tokens."""
    letters = []
    for token in text.split():
        m = _TOKEN.fullmatch(token)
        if m is None:
            raise MalformedToken(f"bad token {token!r}")
        i = int(m.group(1))
        if not 1 <= i <= n - 1:
            raise IndexOutOfRange(f"generator s{i} is not in B_{n}")
        letters.append((i, -1 if m.group(2) else 1))
    return BraidWord(n, tuple(letters))


def word_to_text(word: BraidWord) -> str:
    return " ".join(f"s{i}" if s > 0 else f"s{i}^-1" for i, s in word.letters)


# ---------------------------------------------------------------------------
# Permutation factors (public, 1-based)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PermutationFactor:
    """A permutation braid given by its 1-based image table."""

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.n or sorted(self.table) != list(range(1, self.n + 1)):
            raise InvariantViolation(f"{self.table} is not a permutation of 1..{self.n}")

    @classmethod
    def from_internal(cls, p: Perm) -> PermutationFactor:
        return cls(len(p), tuple(v + 1 for v in p))

    @property
    def internal(self) -> Perm:
        return tuple(v - 1 for v in self.table)

    def is_identity(self) -> bool:
        return self.table == tuple(range(1, self.n + 1))

    def is_delta(self) -> bool:
        return self.table == tuple(range(self.n, 0, -1))


def fundamental_permutation(n: int) -> PermutationFactor:
    """The permutation of Δ, i ↦ n + 1 - i."""
    return PermutationFactor.from_internal(_reversal(n))


def starting_set(factor: PermutationFactor) -> set[int]:
    """Indices i such that σ_i is a left divisor of the factor.

    σ_i divides on the left exactly when the strands starting at i and i+1
    cross, i.e. i is a descent of the image table.
    """
    return {i + 1 for i in _descents(factor.internal)}


def finishing_set(factor: PermutationFactor) -> set[int]:
    """Indices i such that σ_i is a right divisor of the factor."""
    return {i + 1 for i in _descents(_invert(factor.internal))}


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Compose 1-based permutations left to right: p first, then q."""
    return tuple(q[v - 1] for v in p)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    """Left canonical form Δ^u A_1 ... A_k of an element of B_n.

    ``factors`` holds 0-based image tuples. Instances produced by this module
    always satisfy the canonical-form invariants; use :func:`validate` on
    anything assembled by hand.
    """

    n: int
    u: int
    factors: tuple[Perm, ...] = ()

    @property
    def inf(self) -> int:
        return self.u

    @property
    def sup(self) -> int:
        return self.u + len(self.factors)

    @property
    def length(self) -> int:
        return len(self.factors)

    def is_identity(self) -> bool:
        return self.u == 0 and not self.factors

    def permutation_factors(self) -> list[PermutationFactor]:
        return [PermutationFactor.from_internal(f) for f in self.factors]

    def __mul__(self, other: CanonicalForm) -> CanonicalForm:
        return multiply(self, other)

    def __pow__(self, t: int) -> CanonicalForm:
        return power(self, t)

    def inverse(self) -> CanonicalForm:
        return inverse(self)

    def to_word(self) -> BraidWord:
        """A word representing the braid (Δ-power first, then each factor)."""
        dword = _delta_letters(self.n)
        letters: list[tuple[int, int]] = []
        if self.u >= 0:
            letters.extend(dword * self.u)
        else:
            inv = [(i, -1) for i, _ in reversed(dword)]
            letters.extend(inv * -self.u)
        for f in self.factors:
            letters.extend((i, 1) for i in _reduced_word(f))
        return BraidWord(self.n, tuple(letters))

    def __repr__(self) -> str:
        body = " | ".join(",".join(str(v + 1) for v in f) for f in self.factors)
        return f"CanonicalForm(n={self.n}, u={self.u}, [{body}])"


def _reduced_word(p: Perm) -> list[int]:
    """A positive word (1-based indices) for the permutation braid of p."""
    q = list(p)
    word = []
    i = 0
    while i < len(q) - 1:
        if q[i] > q[i + 1]:
            q[i], q[i + 1] = q[i + 1], q[i]
            word.append(i + 1)
            i = max(i - 1, 0)
        else:
            i += 1
    return word


def _delta_letters(n: int) -> list[tuple[int, int]]:
    # (σ1…σ_{n-1})(σ1…σ_{n-2})…(σ1σ2)σ1
    return [(i, 1) for top in range(n - 1, 0, -1) for i in range(1, top + 1)]


def identity(n: int) -> CanonicalForm:
    return CanonicalForm(n, 0, ())


def delta(n: int) -> CanonicalForm:
    """The fundamental braid Δ of B_n."""
    return CanonicalForm(n, 1, ())


def delta_word(n: int) -> BraidWord:
    """The defining word (σ1…σ_{n-1})(σ1…σ_{n-2})…σ1 of Δ."""
    return BraidWord(n, tuple(_delta_letters(n)))


def generator(n: int, i: int, sign: int = 1) -> CanonicalForm:
    """The canonical form of σ_i^{sign}."""
    return normalize(BraidWord(n, ((i, sign),)))


def from_factor(factor: PermutationFactor) -> CanonicalForm:
    """The permutation braid of a single factor, in canonical form."""
    return _canonical(factor.n, 0, [factor.internal])


def normalize(word: BraidWord) -> CanonicalForm:
    """Left canonical form of a word.

    Every σ_i⁻¹ is rewritten as Δ⁻¹·(Δσ_i⁻¹); the Δ⁻¹ letters are pushed to
    the far left with τ, and the remaining positive factors are left-weighted.
    """
    n = word.n
    delta_p = _reversal(n)
    raw: list[Perm] = []
    neg = 0
    for i, sign in reversed(word.letters):
        t = _transposition(n, i - 1)
        f = t if sign > 0 else _compose(delta_p, t)
        if neg & 1:
            f = _tau(f)
        raw.append(f)
        if sign < 0:
            neg += 1
    raw.reverse()
    return _canonical(n, -neg, raw)


def _check_same(a: CanonicalForm, b: CanonicalForm) -> None:
    if a.n != b.n:
        raise StrandMismatch(f"cannot combine B_{a.n} and B_{b.n} braids")


def multiply(a: CanonicalForm, b: CanonicalForm) -> CanonicalForm:
    _check_same(a, b)
    if not b.factors:
        if b.u & 1:
            return CanonicalForm(a.n, a.u + b.u, tuple(_tau(f) for f in a.factors))
        return CanonicalForm(a.n, a.u + b.u, a.factors)
    left = [_tau(f) for f in a.factors] if b.u & 1 else a.factors
    return _canonical(a.n, a.u + b.u, b.factors, weighted=left)


def product(braids: Iterable[CanonicalForm], n: int | None = None) -> CanonicalForm:
    """Left-to-right product of several braids."""
    result = None
    for b in braids:
        result = b if result is None else multiply(result, b)
    if result is None:
        if n is None:
            raise ValueError("empty product needs an explicit n")
        return identity(n)
    return result


def inverse(a: CanonicalForm) -> CanonicalForm:
    k = len(a.factors)
    raw = []
    for j in range(k, 0, -1):
        f = _left_complement(a.factors[j - 1])
        if (j - 1 + a.u) & 1:
            f = _tau(f)
        raw.append(f)
    return _canonical(a.n, -k - a.u, raw)


def power(a: CanonicalForm, t: int) -> CanonicalForm:
    if t < 0:
        a, t = inverse(a), -t
    result = identity(a.n)
    base = a
    # square-and-multiply keeps the number of long products logarithmic
    while t:
        if t & 1:
            result = multiply(result, base)
        t >>= 1
        if t:
            base = multiply(base, base)
    return result


def conjugate(x: CanonicalForm, a: CanonicalForm) -> CanonicalForm:
    """a⁻¹·x·a."""
    return multiply(multiply(inverse(a), x), a)


def tau(a: CanonicalForm) -> CanonicalForm:
    """Δ⁻¹·a·Δ."""
    return CanonicalForm(a.n, a.u, tuple(_tau(f) for f in a.factors))


def perm_of(a: CanonicalForm) -> tuple[int, ...]:
    """Image of the braid in S_n (1-based images, left-to-right convention)."""
    p = _reversal(a.n) if a.u & 1 else _identity(a.n)
    for f in a.factors:
        p = _compose(p, f)
    return tuple(v + 1 for v in p)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    """Sorted cycle lengths of a 1-based permutation."""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        size = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            size += 1
        lengths.append(size)
    return tuple(sorted(lengths))


def validate(a: CanonicalForm) -> None:
    """Raise InvariantViolation unless ``a`` is a genuine left canonical form."""
    n = a.n
    if n < 2:
        raise InvariantViolation(f"braid index {n} < 2")
    ident, delta_p = _identity(n), _reversal(n)
    target = list(range(n))
    for f in a.factors:
        if len(f) != n or sorted(f) != target:
            raise InvariantViolation(f"factor {f} is not a permutation of {n} points")
        if f == ident or f == delta_p:
            raise InvariantViolation("canonical factors must differ from e and Δ")
    for x, y in zip(a.factors, a.factors[1:]):
        if not _descents(y) <= _descents(_invert(x)):
            raise InvariantViolation("adjacent factors are not left-weighted")


# ---------------------------------------------------------------------------
# Subgroups ⟨σ_lo, …, σ_hi⟩
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupSpec:
    """The subgroup generated by σ_lo..σ_hi, acting on strands lo..hi+1."""

    n: int
    lo: int
    hi: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.lo <= self.hi <= self.n - 1:
            raise IndexOutOfRange(f"invalid generator range [{self.lo}, {self.hi}] for B_{self.n}")

    @property
    def strands(self) -> int:
        return self.hi - self.lo + 2

    @property
    def offset(self) -> int:
        """0-based index of the first strand of the block."""
        return self.lo - 1

    def is_full(self) -> bool:
        return self.lo == 1 and self.hi == self.n - 1

    def commutes_with(self, other: SubgroupSpec) -> bool:
        """True when the generator ranges are separated by at least one index."""
        return self.hi + 1 < other.lo or other.hi + 1 < self.lo

    def supports(self, p: Perm) -> bool:
        """Whether a permutation braid lies in the subgroup."""
        lo, top = self.offset, self.hi + 1
        return all(p[j] == j for j in range(lo)) and all(p[j] == j for j in range(top, self.n))

    def embed(self, block: Sequence[int]) -> Perm:
        """Embed a 0-based permutation of the block's strands into S_n."""
        p = list(range(self.n))
        off = self.offset
        for j, v in enumerate(block):
            p[off + j] = off + v
        return tuple(p)


def full_group(n: int) -> SubgroupSpec:
    return SubgroupSpec(n, 1, n - 1)


def left_subgroup(n: int) -> SubgroupSpec:
    """LB_n = ⟨σ_1, …, σ_{⌊n/2⌋-1}⟩."""
    return SubgroupSpec(n, 1, n // 2 - 1)


def right_subgroup(n: int) -> SubgroupSpec:
    """RB_n = ⟨σ_{⌊n/2⌋+1}, …, σ_{n-1}⟩."""
    return SubgroupSpec(n, n // 2 + 1, n - 1)


def _positive_in(a: CanonicalForm, spec: SubgroupSpec) -> bool:
    if a.u < 0:
        return False
    if a.u > 0 and not spec.is_full():
        return False
    return all(spec.supports(f) for f in a.factors)


def is_member(a: CanonicalForm, spec: SubgroupSpec) -> bool:
    """Decide whether ``a`` lies in ⟨σ_lo..σ_hi⟩.

    Writes a = D⁻¹·N as the reduced left fraction read off the canonical form
    (D, N positive) and checks both are positive braids of the subgroup; the
    reduced fraction of a subgroup element has both parts in the subgroup.
    """
    _check_same(a, CanonicalForm(spec.n, 0))
    if spec.is_full():
        return True
    if a.u >= 0:
        return _positive_in(a, spec)
    r = -a.u
    k = len(a.factors)
    if r > k:
        # D would contain a full Δ, which no proper subgroup element has
        return False
    if not all(spec.supports(f) for f in a.factors[r:]):
        return False
    raw = []
    for j in range(r, 0, -1):
        f = _right_complement(a.factors[j - 1])
        if (r - j) & 1:
            f = _tau(f)
        raw.append(f)
    return _positive_in(_canonical(a.n, 0, raw), spec)


def block_simples(spec: SubgroupSpec) -> list[Perm]:
    """All permutation braids of the subgroup's strand block (including e)."""
    return [spec.embed(p) for p in itertools.permutations(range(spec.strands))]


def random_factor(spec: SubgroupSpec, rng: np.random.Generator) -> Perm:
    """A uniformly random non-identity permutation braid of the block."""
    m = spec.strands
    while True:
        block = rng.permutation(m)
        if any(int(v) != j for j, v in enumerate(block)):
            return spec.embed([int(v) for v in block])


def random_braid(spec: SubgroupSpec, l: int, rng: np.random.Generator) -> CanonicalForm:
    """Concatenate ``l`` random factors of the subgroup and normalize.

    The result is a positive subgroup element with 0 ≤ inf ≤ sup ≤ l.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    return _canonical(spec.n, 0, [random_factor(spec, rng) for _ in range(l)])


def enumerate_braids(spec: SubgroupSpec, l: int, budget: int = DEFAULT_BUDGET) -> list[CanonicalForm]:
    """Every subgroup element b with 0 ≤ inf(b) ≤ sup(b) ≤ l, without repeats.

    Breadth-first closure: level j holds products of j block factors.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    bound = math.factorial(spec.strands) ** l
    if bound > budget:
        raise BudgetExceeded(f"({spec.strands}!)^{l} = {bound} exceeds budget {budget}")
    simples = [_canonical(spec.n, 0, [p]) for p in block_simples(spec)]
    seen: dict[CanonicalForm, None] = {identity(spec.n): None}
    frontier = list(seen)
    for _ in range(l):
        fresh = []
        for x in frontier:
            for s in simples:
                y = multiply(x, s)
                if y not in seen:
                    seen[y] = None
                    fresh.append(y)
        frontier = fresh
    return list(seen)


def partition_subgroups(n: int, k: int) -> list[SubgroupSpec]:
    """Split the right-hand strands into k + 1 balanced, mutually commuting blocks.

    Block i is ⟨σ_{l_i+1}, …, σ_{l_i+n_i-1}⟩ with l_i = ⌊n/2⌋ + n_0 + … + n_{i-1};
    earlier blocks receive the spare strands when the split is uneven.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    total = n - n // 2
    if total < 2 * (k + 1):
        raise ParameterTooSmall(f"n={n} leaves {total} right strands, fewer than 2 per block for {k + 1} blocks")
    base, extra = divmod(total, k + 1)
    blocks = []
    start = n // 2
    for i in range(k + 1):
        size = base + (1 if i < extra else 0)
        blocks.append(SubgroupSpec(n, start + 1, start + size - 1))
        start += size
    return blocks
