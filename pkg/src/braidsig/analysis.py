"""Desk-scale experiments: brute-force search oracles, the E_a(β, γ)
estimator, and the relay ("blackmail") attack on non-ZK confirmation.

Search budgets count group operations rather than seconds, so a run that
fits its budget on one machine fits it everywhere.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .braid import (
    CanonicalForm,
    SubgroupSpec,
    enumerate_braids,
    full_group,
    inverse,
    left_subgroup,
    multiply,
    partition_subgroups,
    product,
    random_braid,
    right_subgroup,
)
from .codec import format_braid, hash_to_braid
from .errors import BudgetExceeded, ChallengeMismatch, PartitionInvalid
from .keys import PublicKey, SecretKey
from .bdp import ConfirmationProver

__all__ = [
    "OracleReport",
    "brute_force_csp",
    "brute_force_bdp",
    "brute_force_mscsp",
    "brute_force_msbdp",
    "plant_csp",
    "plant_bdp",
    "AssumptionReport",
    "estimate_assumption31",
    "partition_subgroups",
    "BlackmailScenario",
    "new_blackmail_scenario",
    "blackmail_run",
]

DEFAULT_OPS = 5_000_000

Pair = tuple[CanonicalForm, CanonicalForm]


# ---------------------------------------------------------------------------
# search oracles
# ---------------------------------------------------------------------------

@dataclass
class OracleReport:
    kind: str
    pairs: tuple[Pair, ...]
    solutions: list
    space_size: int
    effort: int = 0

    @property
    def description(self) -> str:
        return f"{self.kind} over {len(self.pairs)} pair(s) in B_{self.pairs[0][0].n}, space {self.space_size}"

    def recheck(self) -> bool:
        """Substitute every reported solution back into the defining equations."""
        for sol in self.solutions:
            for x, y in self.pairs:
                if self.kind in ("csp", "mscsp"):
                    lhs = product([inverse(sol), x, sol])
                else:
                    lhs = product([sol[0], x, sol[1]])
                if lhs != y:
                    return False
        return True

    def to_text(self) -> str:
        lines = [f"kind={self.kind}", f"pairs={len(self.pairs)}", f"space={self.space_size}",
                 f"effort={self.effort}", f"solutions={len(self.solutions)}"]
        for sol in self.solutions:
            if isinstance(sol, tuple):
                lines.append("solution=" + format_braid(sol[0]) + " ; " + format_braid(sol[1]))
            else:
                lines.append("solution=" + format_braid(sol))
        return "\n".join(lines) + "\n"


def _charge(effort: int, cost: int, budget: int) -> int:
    effort += cost
    if effort > budget:
        raise BudgetExceeded(f"search needs more than {budget} group operations")
    return effort


def brute_force_mscsp(pairs: Sequence[Pair], space: Sequence[CanonicalForm], budget: int = DEFAULT_OPS) -> OracleReport:
    """All b in ``space`` with b⁻¹·x_i·b = y_i for every pair.

    Uses x·b = b·y to avoid an inversion per candidate, and stops testing a
    candidate at its first failing pair.
    """
    pairs = tuple(pairs)
    _charge(0, 2 * len(space), budget)
    effort = 0
    solutions = []
    for b in space:
        ok = True
        for x, y in pairs:
            effort = _charge(effort, 2, budget)
            if multiply(x, b) != multiply(b, y):
                ok = False
                break
        if ok:
            solutions.append(b)
    return OracleReport("mscsp" if len(pairs) > 1 else "csp", pairs, solutions, len(space), effort)


def brute_force_csp(x: CanonicalForm, y: CanonicalForm, space: Sequence[CanonicalForm], budget: int = DEFAULT_OPS) -> OracleReport:
    return brute_force_mscsp([(x, y)], space, budget)


def brute_force_msbdp(pairs: Sequence[Pair], space: Sequence[CanonicalForm], budget: int = DEFAULT_OPS) -> OracleReport:
    """All (b₁, b₂) in space² with y_i = b₁·x_i·b₂ for every pair.

    Meet in the middle on the first pair: b₁⁻¹·y₁ = x₁·b₂, so indexing the
    right-hand side by b₂ finds every candidate in O(|space|) products; the
    remaining pairs filter the candidates.
    """
    pairs = tuple(pairs)
    _charge(0, 3 * len(space), budget)
    effort = 0
    x1, y1 = pairs[0]
    right: dict[CanonicalForm, list[CanonicalForm]] = defaultdict(list)
    for b2 in space:
        effort = _charge(effort, 1, budget)
        right[multiply(x1, b2)].append(b2)
    solutions = []
    for b1 in space:
        effort = _charge(effort, 2, budget)
        for b2 in right.get(multiply(inverse(b1), y1), ()):
            ok = True
            for x, y in pairs[1:]:
                effort = _charge(effort, 2, budget)
                if product([b1, x, b2]) != y:
                    ok = False
                    break
            if ok:
                solutions.append((b1, b2))
    return OracleReport("msbdp" if len(pairs) > 1 else "bdp", pairs, solutions, len(space), effort)


def brute_force_bdp(x: CanonicalForm, y: CanonicalForm, lb_space: Sequence[CanonicalForm], budget: int = DEFAULT_OPS) -> OracleReport:
    return brute_force_msbdp([(x, y)], lb_space, budget)


def plant_csp(n: int, l: int, rng: np.random.Generator, r: int = 1, spec: SubgroupSpec | None = None):
    """r pairs (x_i, a⁻¹·x_i·a) with x_i ∈ B_n(l) and a planted a ∈ spec(l) (RB_n by default)."""
    spec = spec or right_subgroup(n)
    a = random_braid(spec, l, rng)
    xs = [random_braid(full_group(n), l, rng) for _ in range(r)]
    return [(x, product([inverse(a), x, a])) for x in xs], a


def plant_bdp(n: int, l: int, rng: np.random.Generator, r: int = 1):
    """r pairs (x_i, a₁·x_i·a₂) with x_i ∈ B_n(l) and planted a₁, a₂ ∈ LB_n(l)."""
    lb = left_subgroup(n)
    a1, a2 = random_braid(lb, l, rng), random_braid(lb, l, rng)
    xs = [random_braid(full_group(n), l, rng) for _ in range(r)]
    return [(x, product([a1, x, a2])) for x in xs], (a1, a2)


# ---------------------------------------------------------------------------
# E_a(β, γ) estimator
# ---------------------------------------------------------------------------

MODES = ("exhaustive", "sampled")


@dataclass
class AssumptionReport:
    n: int
    l: int
    seed: int
    mode: str
    sampler: str
    alpha: CanonicalForm
    beta: CanonicalForm
    gamma: CanonicalForm
    a1: CanonicalForm
    a2: CanonicalForm
    a: CanonicalForm
    hits: int
    examined: int
    space_size: int | None
    members: list[CanonicalForm] = field(default_factory=list)

    @property
    def estimate(self) -> float:
        """|E_a| itself (exhaustive) or hits scaled to the space size when known."""
        if self.mode == "exhaustive":
            return float(self.hits)
        if self.space_size is None:
            return self.hits / self.examined
        return self.hits / self.examined * self.space_size

    def to_text(self) -> str:
        lines = [
            f"# seed={self.seed}",
            f"n={self.n}",
            f"l={self.l}",
            f"mode={self.mode}",
            f"sampler={self.sampler}",
            f"alpha={format_braid(self.alpha)}",
            f"beta={format_braid(self.beta)}",
            f"gamma={format_braid(self.gamma)}",
            f"a1={format_braid(self.a1)}",
            f"a2={format_braid(self.a2)}",
            f"a={format_braid(self.a)}",
            f"space={'unknown' if self.space_size is None else self.space_size}",
            f"examined={self.examined}",
            f"hits={self.hits}",
            f"estimate={self.estimate:.6g}",
        ]
        lines += [f"member={format_braid(e)}" for e in self.members]
        return "\n".join(lines) + "\n"


def in_e_a(e: CanonicalForm, a: CanonicalForm, beta_x: CanonicalForm, gamma_alpha: CanonicalForm) -> bool:
    """Both defining conditions of E_a(β, γ).

    ``beta_x`` is β·(a₁·α·a₂) and ``gamma_alpha`` is γ·α.
    """
    e_inv, a_inv = inverse(e), inverse(a)
    if product([e_inv, beta_x, e]) != product([a_inv, beta_x, a]):
        return False
    return product([e_inv, gamma_alpha, e]) != product([a_inv, gamma_alpha, a])


def estimate_assumption31(
    n: int,
    l: int,
    mode: str = "exhaustive",
    trials: int = 1000,
    seed: int = 0,
    budget: int = 2_000_000,
    keep_members: bool = False,
) -> AssumptionReport:
    """Count (exhaustive) or sample (sampled) the set E_a(β, γ) ⊆ RB_n(l).

    One instance (α, β, γ ∈ B_n(l); a₁, a₂ ∈ LB_n(l); a ∈ RB_n(l)) is drawn
    from ``seed``. Sampled mode uses ``trials`` draws of e: uniform over the
    enumerated RB_n(l) when it fits ``budget``, otherwise random_braid, which
    is not uniform. The report names the sampler used.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    rng = np.random.default_rng(seed)
    full, lb, rb = full_group(n), left_subgroup(n), right_subgroup(n)
    alpha, beta, gamma = (random_braid(full, l, rng) for _ in range(3))
    a1, a2 = random_braid(lb, l, rng), random_braid(lb, l, rng)
    a = random_braid(rb, l, rng)
    beta_x = product([beta, a1, alpha, a2])
    gamma_alpha = multiply(gamma, alpha)

    space = None
    if mode == "exhaustive":
        space = enumerate_braids(rb, l, budget)
        candidates = space
        sampler = "enumeration"
    else:
        try:
            space = enumerate_braids(rb, l, budget)
        except BudgetExceeded:
            space = None
        if space is not None:
            idx = rng.integers(0, len(space), size=trials)
            candidates = [space[int(i)] for i in idx]
            sampler = "uniform-enumerated"
        else:
            candidates = [random_braid(rb, l, rng) for _ in range(trials)]
            sampler = "random_braid"

    members = [e for e in candidates if in_e_a(e, a, beta_x, gamma_alpha)]
    return AssumptionReport(
        n, l, seed, mode, sampler, alpha, beta, gamma, a1, a2, a,
        hits=len(members),
        examined=len(candidates),
        space_size=None if space is None else len(space),
        members=members if keep_members else [],
    )


# ---------------------------------------------------------------------------
# relay attack on non-ZK confirmation
# ---------------------------------------------------------------------------

@dataclass
class BlackmailScenario:
    """Eve relays one confirmation with Alice to k entities at once.

    Block 0 belongs to Eve, blocks 1..k to the entities. Eve holds Alice's
    signature on ``message`` and engages Alice on the decoy pair.
    """

    k: int
    blocks: list[SubgroupSpec]
    l: int
    message: bytes
    signature: CanonicalForm
    decoy_message: bytes
    decoy_signature: CanonicalForm
    secrets: list[CanonicalForm] = field(default_factory=list)
    challenges: list[CanonicalForm] = field(default_factory=list)
    a: CanonicalForm | None = None
    response: CanonicalForm | None = None
    aborted: bool = False


def new_blackmail_scenario(pk: PublicKey, message: bytes, signature: CanonicalForm,
                           decoy_message: bytes, decoy_signature: CanonicalForm, k: int = 3) -> BlackmailScenario:
    return BlackmailScenario(k, partition_subgroups(pk.n, k), pk.l, message, signature, decoy_message, decoy_signature)


def _check_partition(scenario: BlackmailScenario, n: int) -> None:
    blocks = scenario.blocks
    if len(blocks) != scenario.k + 1:
        raise PartitionInvalid(f"{len(blocks)} blocks for {scenario.k} entities")
    if sum(b.strands for b in blocks) != n - n // 2 or blocks[0].lo != n // 2 + 1:
        raise PartitionInvalid("blocks do not tile the right-hand strands")
    for i, bi in enumerate(blocks):
        for bj in blocks[i + 1:]:
            if not bi.commutes_with(bj):
                raise PartitionInvalid("blocks overlap")


def blackmail_run(
    scenario: BlackmailScenario,
    pk: PublicKey,
    sk: SecretKey,
    rng: np.random.Generator,
    prover: str = "nonzk",
    source: tuple[PublicKey, CanonicalForm] | None = None,
) -> list[bool]:
    """Play the ten-step relay and return each entity's verdict.

    ``source`` lets Eve build Q₀ from another signer's (public key,
    signature) instead of Alice's. Against the ZK prover the relay dies at
    the step-4 check; ``scenario.aborted`` is then set and every verdict is
    False because no entity receives a usable response.
    """
    if prover not in ("nonzk", "zk"):
        raise ValueError("prover must be 'nonzk' or 'zk'")
    _check_partition(scenario, pk.n)
    y = hash_to_braid(scenario.message, pk.n, pk.l)
    src_x, src_s = (pk.x, scenario.signature) if source is None else (source[0].x, source[1])

    # steps 1-3: secrets per block, chained conjugation of Q₀
    scenario.secrets = [random_braid(b, scenario.l, rng) for b in scenario.blocks]
    q = product([inverse(scenario.secrets[0]), src_s, src_x, scenario.secrets[0]])
    scenario.challenges = [q]
    for a_i in scenario.secrets[1:]:
        q = product([inverse(a_i), q, a_i])
        scenario.challenges.append(q)
    q_k = scenario.challenges[-1]

    # steps 4-6: Alice answers Q_k believing it concerns the decoy pair
    alice = ConfirmationProver(pk, sk, scenario.decoy_message, scenario.decoy_signature, rng)
    if prover == "nonzk":
        scenario.response = alice.respond_direct(q_k)
    else:
        scenario.response = alice.respond(q_k)

    # steps 7-9: entities reveal, Eve assembles a = a₀·a₁·…·a_k
    scenario.a = product(scenario.secrets)
    if prover == "zk":
        try:
            alice.check_and_open([scenario.a])
        except ChallengeMismatch:
            scenario.aborted = True
            return [False] * scenario.k

    # step 10
    a_inv = inverse(scenario.a)
    q_ok = q_k == product([a_inv, scenario.signature, pk.x, scenario.a])
    r_ok = scenario.response == product([a_inv, y, pk.alpha, scenario.a])
    return [q_ok and r_ok] * scenario.k
