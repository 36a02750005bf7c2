"""FFD with a threshold, MultiFit threshold search, and HFFD for
heterogeneous agents. Failure to place chores is a value (PackOutcome),
not an exception."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Allocation, Instance, bundle_cost, sort_desc, universal_ordering
from .errors import BadParams, EmptyBinDeadlock, TooLarge

_SUBSET_SUM_CAP = 24


@dataclass(frozen=True)
class PackOutcome:
    allocation: Allocation
    unallocated: tuple[int, ...]
    succeeded: bool

    @property
    def bundles(self) -> tuple[tuple[int, ...], ...]:
        return self.allocation.bundles


def ffd(chores: Iterable[int], cost: Sequence[Fraction], tau: Fraction,
        max_bins: int | None = None) -> PackOutcome:
    """First-Fit-Decreasing: largest chore first (lower id breaks ties),
    into the lowest-index bin whose cost stays within tau; a new bin opens
    when allowed, otherwise the chore is left unallocated."""
    if tau <= 0:
        raise BadParams("FFD threshold must be positive")
    bins: list[list[int]] = []
    sums: list[Fraction] = []
    unallocated: list[int] = []
    for c in sort_desc(chores, cost):
        for b, total in enumerate(sums):
            if total + cost[c] <= tau:
                bins[b].append(c)
                sums[b] += cost[c]
                break
        else:
            if cost[c] <= tau and (max_bins is None or len(bins) < max_bins):
                bins.append([c])
                sums.append(cost[c])
            else:
                unallocated.append(c)
    return PackOutcome(Allocation.of(bins), tuple(unallocated), not unallocated)


def subset_sums(chores: Iterable[int], cost: Sequence[Fraction]) -> list[Fraction]:
    """Sorted distinct achievable bundle costs (the grid on which FFD
    success/failure can change)."""
    chores = list(chores)
    if len(chores) > _SUBSET_SUM_CAP:
        raise TooLarge(f"subset-sum grid needs m <= {_SUBSET_SUM_CAP}, got {len(chores)}")
    sums = {Fraction(0)}
    for c in chores:
        sums |= {s + cost[c] for s in sums}
    sums.discard(Fraction(0))
    return sorted(sums)


def multifit(chores: Iterable[int], cost: Sequence[Fraction], n: int) -> tuple[Fraction, PackOutcome]:
    """Bisection for the smallest grid threshold at which FFD fills n bins.

    Exact minimum for factored and bivalued cost functions, where FFD
    success is monotone in the threshold; for general cost functions the
    returned threshold is guaranteed to succeed but may not be minimal.
    """
    if n < 1:
        raise BadParams("need at least one bin")
    chores = list(chores)
    if not chores:
        return Fraction(0), PackOutcome(Allocation.of([]), (), True)
    grid = subset_sums(chores, cost)
    lo_value = max(cost[c] for c in chores)
    total = bundle_cost(cost, chores)
    lo = grid.index(lo_value)
    hi = grid.index(total)
    best = hi
    best_outcome = ffd(chores, cost, grid[hi], max_bins=n)
    while lo <= hi:
        mid = (lo + hi) // 2
        outcome = ffd(chores, cost, grid[mid], max_bins=n)
        if outcome.succeeded:
            best, best_outcome = mid, outcome
            hi = mid - 1
        else:
            lo = mid + 1
    return grid[best], best_outcome


def hffd(instance: Instance, thresholds: Sequence[Fraction]) -> PackOutcome:
    """Heterogeneous FFD on an IDO instance.

    Fills one bin at a time: a chore joins the open bin when it fits for at
    least one remaining agent under that agent's threshold; a closed bin
    goes to the lowest-index remaining agent for whom its last chore fitted.
    """
    if len(thresholds) != instance.n:
        raise BadParams("need one threshold per agent")
    if any(t <= 0 for t in thresholds):
        raise BadParams("thresholds must be positive")
    ordering = universal_ordering(instance)
    remaining = list(ordering.perm)
    pool = list(range(instance.n))
    bins: list[tuple[int, ...]] = []
    owners: list[int] = []
    while remaining and pool:
        bin_chores: list[int] = []
        sums = {i: Fraction(0) for i in pool}
        last_fit: list[int] = []
        for c in list(remaining):
            fits = [i for i in pool if sums[i] + instance.cost(i)[c] <= thresholds[i]]
            if fits:
                bin_chores.append(c)
                remaining.remove(c)
                for i in pool:
                    sums[i] += instance.cost(i)[c]
                last_fit = fits
        if not bin_chores:
            raise EmptyBinDeadlock(remaining[0])
        owner = min(last_fit)
        bins.append(tuple(bin_chores))
        owners.append(owner)
        pool.remove(owner)
    return PackOutcome(Allocation.of(bins, owners), tuple(remaining), not remaining)
