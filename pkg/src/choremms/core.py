"""Exact-arithmetic instance model, orderings, lexicographic comparison and swaps.

All costs are ``fractions.Fraction`` values; no floating point is used
anywhere, because every algorithm in this package branches on exact
fits/does-not-fit comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadParams, NotIDO, SubsetViolation

Rational = Fraction

LESS, EQUAL, GREATER = -1, 0, 1


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` with p, q positive decimal integers."""
    parts = text.strip().split("/")
    if len(parts) == 1:
        num, den = parts[0], "1"
    elif len(parts) == 2:
        num, den = parts
    else:
        raise ValueError(f"not a rational: {text!r}")
    if not (num.isdigit() and den.isdigit()) or int(den) == 0:
        raise ValueError(f"not a nonnegative rational: {text!r}")
    return Fraction(int(num), int(den))


def format_rational(x: Fraction) -> str:
    """Format so that parse(format(x)) == x; integers print without a denominator."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Instance:
    """n agents, m chores, strictly positive costs."""

    costs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.costs:
            raise BadParams("instance needs at least one agent")
        m = len(self.costs[0])
        for i, row in enumerate(self.costs):
            if len(row) != m:
                raise BadParams(f"agent {i} has {len(row)} costs, expected {m}")
            for j, c in enumerate(row):
                if not isinstance(c, Fraction) or c <= 0:
                    raise BadParams(f"cost of chore {j} for agent {i} must be a positive rational")

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "Instance":
        return Instance(tuple(tuple(Fraction(c) for c in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def m(self) -> int:
        return len(self.costs[0])

    def cost(self, agent: int) -> tuple[Fraction, ...]:
        return self.costs[agent]

    def chores(self) -> tuple[int, ...]:
        return tuple(range(self.m))


@dataclass(frozen=True)
class UniversalOrdering:
    """Permutation of chore ids; earlier means (weakly) larger for every agent."""

    perm: tuple[int, ...]
    _pos: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pos = [0] * len(self.perm)
        for p, c in enumerate(self.perm):
            pos[c] = p
        object.__setattr__(self, "_pos", tuple(pos))

    def position(self, chore: int) -> int:
        return self._pos[chore]


def sort_desc(chores: Iterable[int], cost: Sequence[Fraction]) -> list[int]:
    """Chore ids by descending cost; equal costs break toward the lower id,
    which is the fixed universal-ordering tie-break used everywhere."""
    return sorted(chores, key=lambda c: (-cost[c], c))


def bundle_cost(cost: Sequence[Fraction], bundle: Iterable[int]) -> Fraction:
    return sum((cost[c] for c in bundle), Fraction(0))


def position_cost(bundle: Sequence[int], p: int, cost: Sequence[Fraction]) -> Fraction:
    """Cost of the p-th largest chore (0-based); zero past the end."""
    ordered = sort_desc(bundle, cost)
    if p >= len(ordered):
        return Fraction(0)
    return cost[ordered[p]]


@dataclass(frozen=True)
class Allocation:
    """Ordered bundles of chore ids, optionally tagged with owning agents."""

    bundles: tuple[tuple[int, ...], ...]
    agents: tuple[int, ...] | None = None

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.bundles:
            for c in b:
                if c in seen:
                    raise BadParams(f"chore {c} appears in two bundles")
                seen.add(c)
        if self.agents is not None and len(self.agents) != len(self.bundles):
            raise BadParams("agents map length must match bundle count")

    @staticmethod
    def of(bundles: Iterable[Iterable[int]], agents=None) -> "Allocation":
        return Allocation(tuple(tuple(b) for b in bundles),
                          None if agents is None else tuple(agents))

    def allocated(self) -> set[int]:
        return {c for b in self.bundles for c in b}

    def is_complete(self, m: int) -> bool:
        return self.allocated() == set(range(m))

    def agent_of(self, index: int) -> int:
        return self.agents[index] if self.agents is not None else index


@dataclass(frozen=True)
class InstanceClass:
    is_ido: bool
    factored_per_agent: tuple[bool, ...]
    bivalued_per_agent: tuple[bool, ...]

    @property
    def is_factored(self) -> bool:
        return all(self.factored_per_agent)

    @property
    def is_personalized_bivalued(self) -> bool:
        return all(self.bivalued_per_agent)


def is_factored_costs(values: Iterable[Fraction]) -> bool:
    """True iff every smaller distinct value divides the next larger one."""
    distinct = sorted(set(values))
    return all((b / a).denominator == 1 for a, b in zip(distinct, distinct[1:]))


def is_bivalued_costs(values: Iterable[Fraction]) -> bool:
    return len(set(values)) <= 2


def classify(instance: Instance) -> InstanceClass:
    """Per-agent and global class flags; a single-valued agent is both
    factored and bivalued."""
    try:
        universal_ordering(instance)
        ido = True
    except NotIDO:
        ido = False
    return InstanceClass(
        is_ido=ido,
        factored_per_agent=tuple(is_factored_costs(row) for row in instance.costs),
        bivalued_per_agent=tuple(is_bivalued_costs(row) for row in instance.costs),
    )


def universal_ordering(instance: Instance) -> UniversalOrdering:
    """Ordering witnessing IDO: agent 1's descending sort, verified against
    every other agent. Raises NotIDO when no common order exists."""
    perm = sort_desc(instance.chores(), instance.cost(0))
    for i in range(instance.n):
        row = instance.cost(i)
        for a, b in zip(perm, perm[1:]):
            if row[a] < row[b]:
                raise NotIDO(f"agent {i} ranks chore {b} above chore {a}")
    return UniversalOrdering(tuple(perm))


@dataclass(frozen=True)
class LiftingMap:
    """Converts a complete allocation of the IDO twin back to the original
    instance without increasing any agent's cost."""

    original: Instance

    def lift(self, allocation: Allocation) -> Allocation:
        m = self.original.m
        if not allocation.is_complete(m):
            raise BadParams("lifting requires a complete allocation")
        owner_of = {}
        for b, bundle in enumerate(allocation.bundles):
            agent = allocation.agent_of(b)
            for c in bundle:
                owner_of[c] = (agent, b)
        remaining = set(range(m))
        lifted: list[list[int]] = [[] for _ in allocation.bundles]
        # IDO chore j is the (j+1)-th largest position; walk smallest to
        # largest, each owner taking their cheapest remaining original chore.
        # At the t-th pick at most t-1 of an agent's t cheapest chores are
        # gone, so the pick costs at most the position it replaces.
        for j in reversed(range(m)):
            agent, b = owner_of[j]
            row = self.original.cost(agent)
            pick = min(remaining, key=lambda c: (row[c], c))
            remaining.remove(pick)
            lifted[b].append(pick)
        return Allocation.of(lifted, allocation.agents)


def to_ido(instance: Instance) -> tuple[Instance, LiftingMap]:
    """IDO twin: each agent's costs sorted descending, so the identity
    permutation is a universal ordering; cost multisets are preserved."""
    rows = tuple(tuple(sorted(row, reverse=True)) for row in instance.costs)
    return Instance(rows), LiftingMap(instance)


def lex_compare(b1: Sequence[int], b2: Sequence[int], cost: Sequence[Fraction]) -> int:
    """Position-wise comparison of cost profiles with zero extension.

    Returns LESS, EQUAL or GREATER; any two bundles are comparable.
    """
    p1 = sorted((cost[c] for c in b1), reverse=True)
    p2 = sorted((cost[c] for c in b2), reverse=True)
    for a, b in zip(p1, p2):
        if a != b:
            return GREATER if a > b else LESS
    if len(p1) == len(p2):
        return EQUAL
    rest = p1[len(p2):] or p2[len(p1):]
    if any(x != 0 for x in rest):
        return GREATER if len(p1) > len(p2) else LESS
    return EQUAL


def swap(alloc: Allocation, i: int, t_i: Iterable[int], j: int, t_j: Iterable[int]) -> Allocation:
    """Exchange T_i ⊆ A_i with T_j ⊆ A_j; either side may be empty."""
    if i == j:
        raise SubsetViolation("swap needs two distinct bundles")
    t_i, t_j = set(t_i), set(t_j)
    a_i, a_j = set(alloc.bundles[i]), set(alloc.bundles[j])
    if not t_i <= a_i:
        raise SubsetViolation(f"T_i {sorted(t_i - a_i)} not in bundle {i}")
    if not t_j <= a_j:
        raise SubsetViolation(f"T_j {sorted(t_j - a_j)} not in bundle {j}")
    new = [list(b) for b in alloc.bundles]
    new[i] = sorted((a_i - t_i) | t_j)
    new[j] = sorted((a_j - t_j) | t_i)
    return Allocation.of(new, alloc.agents)
