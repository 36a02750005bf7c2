"""Maximin-share values (brute-force oracle, exact polynomial method for
factored costs) and the three end-to-end solvers."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (Allocation, Instance, bundle_cost, classify,
                   is_bivalued_costs, is_factored_costs, sort_desc, to_ido)
from .errors import (BadParams, NotBivalued, NotFactored, TheoremViolation,
                     TooLarge, UnsupportedClass)
from .packing import ffd, hffd

ORACLE_CAP = 14
APPROX_RATIO = Fraction(15, 13)


@dataclass(frozen=True)
class MMSResult:
    value: Fraction
    witness: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SolveResult:
    """Complete allocation (original chore ids, bundle i → agent i) with the
    per-agent guarantees it was solved against."""

    allocation: Allocation
    costs: tuple[Fraction, ...]
    thresholds: tuple[Fraction, ...]
    mms_values: tuple[Fraction | None, ...]
    algorithm: str


def mms_brute(cost: Sequence[Fraction], chores: Iterable[int], d: int,
              cap: int = ORACLE_CAP) -> MMSResult:
    """Exact minimum over all d-partitions of the maximum bundle cost.

    Branch-and-bound over chores in descending order; a chore may open
    bundle k only when bundle k-1 is nonempty, and a branch is cut as soon
    as its running maximum cannot beat the incumbent.
    """
    if d < 1:
        raise BadParams("need at least one bundle")
    chores = list(chores)
    if len(chores) > cap:
        raise TooLarge(f"brute-force oracle capped at m={cap}, got {len(chores)}")
    if not chores:
        return MMSResult(Fraction(0), ((),) * d)
    # integer arithmetic inside the search; Fractions are exact but slow
    denom = math.lcm(* (cost[c].denominator for c in chores))
    ordered = sort_desc(chores, cost)
    weights = [cost[c].numerator * (denom // cost[c].denominator) for c in ordered]
    total = sum(weights)
    lower = -(-total // d)  # ceil
    best = total + 1
    best_assign: list[int] | None = None
    sums = [0] * d
    assign = [0] * len(ordered)

    def rec(idx: int, used: int, cur_max: int):
        nonlocal best, best_assign
        if cur_max >= best:
            return
        if idx == len(ordered):
            best = cur_max
            best_assign = assign[:]
            return
        w = weights[idx]
        tried: set[int] = set()
        limit = min(used + 1, d)
        for b in range(limit):
            if sums[b] in tried:
                continue
            tried.add(sums[b])
            sums[b] += w
            assign[idx] = b
            rec(idx + 1, max(used, b + 1), max(cur_max, sums[b]))
            sums[b] -= w
            if best == lower:
                return

    rec(0, 0, 0)
    assert best_assign is not None
    bundles: list[list[int]] = [[] for _ in range(d)]
    for idx, b in enumerate(best_assign):
        bundles[b].append(ordered[idx])
    return MMSResult(Fraction(best, denom), tuple(tuple(sorted(b)) for b in bundles))


def _bisect_multiple_grid(chores, cost, d, unit: Fraction, lo: Fraction, hi: Fraction) -> tuple[Fraction, "ffd"]:
    """Smallest multiple of `unit` in [lo, hi] at which FFD fills d bins;
    valid only where FFD success is monotone in the threshold."""
    lo_k = int(lo / unit)
    hi_k = int(hi / unit)
    best = hi_k
    best_outcome = ffd(chores, cost, hi_k * unit, max_bins=d)
    while lo_k <= hi_k:
        mid = (lo_k + hi_k) // 2
        outcome = ffd(chores, cost, mid * unit, max_bins=d)
        if outcome.succeeded:
            best, best_outcome = mid, outcome
            hi_k = mid - 1
        else:
            lo_k = mid + 1
    return best * unit, best_outcome


def mms_factored(cost: Sequence[Fraction], chores: Iterable[int], d: int) -> MMSResult:
    """Exact MMS for a factored cost function in polynomial time: bisection
    on multiples of the smallest cost, testing FFD success into d bins."""
    if d < 1:
        raise BadParams("need at least one bundle")
    chores = list(chores)
    if not is_factored_costs(cost[c] for c in chores):
        raise NotFactored("cost values do not form a divisibility chain")
    if not chores:
        return MMSResult(Fraction(0), ((),) * d)
    unit = min(cost[c] for c in chores)
    lo = max(cost[c] for c in chores)
    hi = bundle_cost(cost, chores)
    value, outcome = _bisect_multiple_grid(chores, cost, d, unit, lo, hi)
    witness = tuple(tuple(sorted(b)) for b in outcome.bundles)
    witness += ((),) * (d - len(witness))
    return MMSResult(value, witness)


def min_success_threshold(cost: Sequence[Fraction], chores: Iterable[int], n: int) -> Fraction:
    """Minimal threshold on the achievable-sum grid at which FFD fills n
    bins. Supported for factored and bivalued costs, where monotonicity of
    FFD success makes bisection exact; for general costs use multifit,
    which only guarantees a succeeding threshold."""
    chores = list(chores)
    if not chores:
        return Fraction(0)
    values = [cost[c] for c in chores]
    lo = max(values)
    hi = sum(values)
    if is_factored_costs(values):
        unit = min(values)
        value, _ = _bisect_multiple_grid(chores, cost, n, unit, lo, hi)
        return value
    if is_bivalued_costs(values):
        distinct = sorted(set(values), reverse=True)
        large = distinct[0]
        small = distinct[-1]
        n_large = sum(1 for v in values if v == large)
        n_small = len(values) - n_large
        grid = sorted({a * large + b * small
                       for a in range(n_large + 1) for b in range(n_small + 1)
                       if lo <= a * large + b * small <= hi})
        lo_i, hi_i = 0, len(grid) - 1
        best = hi_i
        while lo_i <= hi_i:
            mid = (lo_i + hi_i) // 2
            if ffd(chores, cost, grid[mid], max_bins=n).succeeded:
                best = mid
                hi_i = mid - 1
            else:
                lo_i = mid + 1
        return grid[best]
    raise UnsupportedClass("minimal threshold needs factored or bivalued costs; "
                           "use multifit for a succeeding (not necessarily minimal) threshold")


def dump_counterexample(instance: Instance, note: str, directory: str | None = None) -> str:
    """Serialize an instance that falsified a solver guarantee."""
    from .io import format_instance
    directory = directory or os.getcwd()
    path = os.path.join(directory, f"counterexample-{int(time.time() * 1000)}.txt")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {note}\n")
        fh.write(format_instance(instance))
    return path


def _run_hffd_and_lift(instance: Instance, ido: Instance, lifting, thresholds,
                       mms_values, algorithm: str) -> SolveResult:
    outcome = hffd(ido, thresholds)
    if not outcome.succeeded:
        path = dump_counterexample(
            instance, f"{algorithm}: HFFD left chores {outcome.unallocated} unallocated "
                      f"at thresholds {thresholds}")
        raise TheoremViolation(f"{algorithm}: HFFD failed to allocate all chores", path)
    # expand to one bundle per agent in agent order before lifting
    per_agent: list[tuple[int, ...]] = [()] * instance.n
    for b, bundle in enumerate(outcome.allocation.bundles):
        per_agent[outcome.allocation.agent_of(b)] = bundle
    lifted = lifting.lift(Allocation.of(per_agent, agents=range(instance.n)))
    costs = tuple(bundle_cost(instance.cost(i), lifted.bundles[i]) for i in range(instance.n))
    for i, (c, t) in enumerate(zip(costs, thresholds)):
        if c > t:
            path = dump_counterexample(
                instance, f"{algorithm}: lifted cost {c} of agent {i} exceeds threshold {t}")
            raise TheoremViolation(f"{algorithm}: agent {i} cost exceeds its guarantee", path)
    return SolveResult(lifted, costs, tuple(thresholds), tuple(mms_values), algorithm)


def solve_factored(instance: Instance) -> SolveResult:
    """Exact MMS allocation for a factored instance (every agent's cost is
    at most their maximin share), in polynomial time."""
    cls = classify(instance)
    if not cls.is_factored:
        raise NotFactored("every agent must have factored costs")
    ido, lifting = to_ido(instance)
    chores = ido.chores()
    mus = tuple(mms_factored(ido.cost(i), chores, instance.n).value for i in range(instance.n))
    if instance.m == 0:
        return SolveResult(Allocation.of([()] * instance.n, agents=range(instance.n)),
                           (Fraction(0),) * instance.n, mus, mus, "factored")
    return _run_hffd_and_lift(instance, ido, lifting, mus, mus, "factored")


def solve_bivalued(instance: Instance, oracle_cap: int = ORACLE_CAP) -> SolveResult:
    """15/13-MMS allocation for a personalized bivalued instance.

    Per-agent thresholds are (15/13)·mu_i when the brute-force oracle can
    compute mu_i, else the minimal FFD-success threshold, which the 15/13
    bound guarantees is no larger.
    """
    cls = classify(instance)
    if not cls.is_personalized_bivalued:
        raise NotBivalued("every agent must have at most two distinct cost values")
    ido, lifting = to_ido(instance)
    chores = ido.chores()
    thresholds: list[Fraction] = []
    mus: list[Fraction | None] = []
    for i in range(instance.n):
        if instance.m <= oracle_cap:
            mu = mms_brute(ido.cost(i), chores, instance.n, cap=oracle_cap).value
            mus.append(mu)
            thresholds.append(APPROX_RATIO * mu)
        else:
            mus.append(None)
            thresholds.append(min_success_threshold(ido.cost(i), chores, instance.n))
    if instance.m == 0:
        return SolveResult(Allocation.of([()] * instance.n, agents=range(instance.n)),
                           (Fraction(0),) * instance.n, tuple(thresholds), tuple(mus), "bivalued")
    return _run_hffd_and_lift(instance, ido, lifting, thresholds, mus, "bivalued")


def solve_ordinal(instance: Instance, oracle_cap: int = ORACLE_CAP) -> SolveResult:
    """1-out-of-floor(9n/11) MMS allocation for a general instance: each
    agent's threshold is their MMS for d = floor(9n/11) bundles."""
    if instance.n < 2:
        raise BadParams("the ordinal solver needs at least two agents")
    d = 9 * instance.n // 11
    ido, lifting = to_ido(instance)
    chores = ido.chores()
    thresholds: list[Fraction] = []
    for i in range(instance.n):
        row = ido.cost(i)
        if is_factored_costs(row):
            thresholds.append(mms_factored(row, chores, d).value)
        else:
            thresholds.append(mms_brute(row, chores, d, cap=oracle_cap).value)
    if instance.m == 0:
        return SolveResult(Allocation.of([()] * instance.n, agents=range(instance.n)),
                           (Fraction(0),) * instance.n, tuple(thresholds),
                           tuple(thresholds), "ordinal")
    return _run_hffd_and_lift(instance, ido, lifting, thresholds, thresholds, "ordinal")


def solve_auto(instance: Instance, oracle_cap: int = ORACLE_CAP) -> SolveResult:
    """Dispatch on the instance class; factored wins over bivalued because
    its guarantee (exact MMS) is stronger."""
    cls = classify(instance)
    if cls.is_factored:
        return solve_factored(instance)
    if cls.is_personalized_bivalued:
        return solve_bivalued(instance, oracle_cap=oracle_cap)
    return solve_ordinal(instance, oracle_cap=oracle_cap)
