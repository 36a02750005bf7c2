"""Benchmark bundles, First-Fit-Valid verification, exact-subset extraction
for factored costs, and the swap-transcript reductions with per-step
invariant checking.

Every transcript step records the full per-bundle cost snapshot, so a
failed invariant can be replayed as a counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (Allocation, EQUAL, bundle_cost, is_bivalued_costs,
                   is_factored_costs, lex_compare, sort_desc, swap)
from .errors import (EmptyBundle, InvariantViolation, NotBivalued,
                     PreconditionViolation)
from .packing import ffd

APPROX_RATIO = Fraction(15, 13)


@dataclass(frozen=True)
class SwapStep:
    index: int
    k: int
    i: int
    t_i: tuple[int, ...]
    j: int
    t_j: tuple[int, ...]
    costs_after: tuple[Fraction, ...]

    def dump(self) -> str:
        ti = ",".join(str(c) for c in self.t_i)
        tj = ",".join(str(c) for c in self.t_j)
        costs = " ".join(str(c) for c in self.costs_after)
        return (f"step {self.index} k={self.k} swap i={self.i} T_i={{{ti}}} "
                f"j={self.j} T_j={{{tj}}} | costs: {costs}")


@dataclass
class SwapTranscript:
    steps: list[SwapStep] = field(default_factory=list)
    result: str = "equal"
    final: Allocation | None = None

    def dump(self) -> str:
        lines = [s.dump() for s in self.steps]
        lines.append(f"result: {self.result}")
        return "\n".join(lines) + "\n"


def benchmark_bundle(all_chores: Iterable[int], allocated_prefix: Sequence[Sequence[int]],
                     cost: Sequence[Fraction], tau: Fraction) -> tuple[int, ...]:
    """Lexicographically maximal subset of the chores left after the prefix,
    under the threshold: greedy largest-first, keeping the running sum
    within tau."""
    if tau <= 0:
        raise PreconditionViolation("benchmark threshold must be positive")
    taken = {c for b in allocated_prefix for c in b}
    remaining = [c for c in all_chores if c not in taken]
    bundle: list[int] = []
    total = Fraction(0)
    for c in sort_desc(remaining, cost):
        if total + cost[c] <= tau:
            bundle.append(c)
            total += cost[c]
    return tuple(bundle)


def is_ffv(all_chores: Iterable[int], alloc: Allocation, cost: Sequence[Fraction],
           tau: Fraction) -> tuple[bool, int | None]:
    """Every bundle must be lex-at-least its benchmark bundle; unallocated
    chores participate in the benchmarks. Returns (ok, first violating
    bundle index)."""
    all_chores = list(all_chores)
    for k in range(len(alloc.bundles)):
        bench = benchmark_bundle(all_chores, alloc.bundles[:k], cost, tau)
        if lex_compare(alloc.bundles[k], bench, cost) < EQUAL:
            return False, k
    return True, None


def find_exact_subset(chores: Iterable[int], cost: Sequence[Fraction],
                      target: Fraction) -> tuple[int, ...]:
    """Subset summing to exactly the target, for factored costs where the
    target is itself a chore-cost value at least as large as every member.
    Greedy largest-first terminates exactly on target for such inputs."""
    chores = list(chores)
    values = [cost[c] for c in chores]
    if not is_factored_costs(values + [target]):
        raise PreconditionViolation("costs and target must form a divisibility chain")
    if any(v > target for v in values):
        raise PreconditionViolation("every chore must cost at most the target")
    if sum(values) < target:
        raise PreconditionViolation("total cost must reach the target")
    subset: list[int] = []
    total = Fraction(0)
    for c in sort_desc(chores, cost):
        if total + cost[c] <= target:
            subset.append(c)
            total += cost[c]
        if total == target:
            break
    if total != target:
        raise PreconditionViolation(f"greedy missed the target {target}; got {total}")
    return tuple(subset)


def _pad(bundles: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    out = [tuple(b) for b in bundles]
    out.extend(() for _ in range(n - len(out)))
    return out


def _cost_profile(bundle: Iterable[int], cost: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sorted((cost[c] for c in bundle), reverse=True))


def _check_ffd_output(P: Allocation, all_chores, cost, tau):
    if not set(P.allocated()) == set(all_chores):
        raise PreconditionViolation("the FFD allocation must contain every chore")
    fresh = ffd(all_chores, cost, tau)
    reference = _pad(fresh.bundles, len(P.bundles))
    if len(reference) < len(P.bundles) or any(
            lex_compare(b, r, cost) != EQUAL
            for b, r in zip(_pad(P.bundles, len(reference)), reference)):
        raise PreconditionViolation("allocation is not an FFD output at this threshold")


class _Worker:
    """Mutable allocation wrapper that applies swaps, records transcript
    steps, and verifies the global chore multiset after every step."""

    def __init__(self, bundles: Sequence[Sequence[int]], cost: Sequence[Fraction]):
        self.alloc = Allocation.of(bundles)
        self.cost = cost
        self.universe = set(self.alloc.allocated())
        self.transcript = SwapTranscript()

    def bundle(self, k: int) -> tuple[int, ...]:
        return self.alloc.bundles[k]

    def costs(self) -> tuple[Fraction, ...]:
        return tuple(bundle_cost(self.cost, b) for b in self.alloc.bundles)

    def apply(self, k: int, i: int, t_i, j: int, t_j, forbid_increase_after: int | None = None):
        before = self.costs()
        self.alloc = swap(self.alloc, i, t_i, j, t_j)
        after = self.costs()
        step = SwapStep(len(self.transcript.steps), k, i, tuple(sorted(t_i)),
                        j, tuple(sorted(t_j)), after)
        self.transcript.steps.append(step)
        if self.alloc.allocated() != self.universe:
            self.fail(k, "swap changed the global chore multiset")
        if forbid_increase_after is not None:
            for idx in range(forbid_increase_after + 1, len(after)):
                if after[idx] > before[idx]:
                    self.fail(k, f"cost of bundle {idx} increased from "
                                 f"{before[idx]} to {after[idx]}")

    def fail(self, k: int, message: str):
        self.transcript.result = f"violation k={k}"
        self.transcript.final = self.alloc
        raise InvariantViolation(message, self.transcript)

    def finish(self) -> SwapTranscript:
        self.transcript.result = "equal"
        self.transcript.final = self.alloc
        return self.transcript


def _find_donor(worker: _Worker, after: int, value: Fraction) -> tuple[int, int] | None:
    """Last-appearing chore of the given cost in a bundle past `after`:
    highest bundle index, then latest position (highest id among equals)."""
    for i in range(len(worker.alloc.bundles) - 1, after, -1):
        matches = [c for c in worker.bundle(i) if worker.cost[c] == value]
        if matches:
            return i, max(matches)
    return None


def reduce_factored(P: Allocation, Q: Allocation, cost: Sequence[Fraction],
                    tau: Fraction, all_chores: Iterable[int],
                    verify_ffd: bool = True) -> SwapTranscript:
    """Swap-by-swap transformation of a complete FFD output into a
    First-Fit-Valid allocation of the same factored chores, checking at
    every step that no later bundle's cost increases. Termination with
    bundle-wise lex-equality certifies the FFV allocation was complete.

    verify_ffd=False skips the check that P is an FFD output, for running
    the machinery on hand-built bundle configurations."""
    all_chores = list(all_chores)
    if not is_factored_costs(cost[c] for c in all_chores):
        raise PreconditionViolation("cost function must be factored")
    if verify_ffd:
        _check_ffd_output(P, all_chores, cost, tau)
    ok, bad = is_ffv(all_chores, Q, cost, tau)
    if not ok:
        raise PreconditionViolation(f"allocation is not First-Fit-Valid (bundle {bad})")
    n = max(len(P.bundles), len(Q.bundles))
    worker = _Worker(_pad(P.bundles, n), cost)
    targets = [_cost_profile(b, cost) for b in _pad(Q.bundles, n)]
    for k in range(n):
        for j, want in enumerate(targets[k]):
            current = sort_desc(worker.bundle(k), cost)
            have = cost[current[j]] if j < len(current) else Fraction(0)
            if want <= have:
                if want < have:
                    worker.fail(k, f"bundle {k} position {j} exceeds its target "
                                   f"({have} > {want}); FFV should forbid this")
                continue
            tail = current[j:]
            donor = _find_donor(worker, k, want)
            if donor is None:
                worker.fail(k, f"no chore of cost {want} left in bundles after {k}")
            i, cl = donor
            if bundle_cost(cost, tail) >= want:
                moved = find_exact_subset(tail, cost, want)
            else:
                moved = tuple(tail)
            worker.apply(k, k, moved, i, (cl,), forbid_increase_after=k)
        if _cost_profile(worker.bundle(k), cost) != targets[k]:
            worker.fail(k, f"bundle {k} did not reach its target profile")
    return worker.finish()


def _large_small(all_values: Iterable[Fraction]) -> tuple[Fraction, Fraction]:
    distinct = sorted(set(all_values))
    if len(distinct) > 2:
        raise NotBivalued("cost function must have at most two distinct values")
    return distinct[-1], distinct[0]


def reduce_bivalued(P: Allocation, Q: Allocation, cost: Sequence[Fraction],
                    tau: Fraction, all_chores: Iterable[int],
                    verify_ffd: bool = True) -> SwapTranscript:
    """Bivalued analogue of reduce_factored: first balance the large-chore
    count of the current bundle with one swap, then pull each missing chore
    from the last bundle holding one of equal cost."""
    all_chores = list(all_chores)
    large, _small = _large_small(cost[c] for c in all_chores)
    if verify_ffd:
        _check_ffd_output(P, all_chores, cost, tau)
    ok, bad = is_ffv(all_chores, Q, cost, tau)
    if not ok:
        raise PreconditionViolation(f"allocation is not First-Fit-Valid (bundle {bad})")
    n = max(len(P.bundles), len(Q.bundles))
    worker = _Worker(_pad(P.bundles, n), cost)
    targets = [_cost_profile(b, cost) for b in _pad(Q.bundles, n)]
    for k in range(n):
        if _cost_profile(worker.bundle(k), cost) == targets[k]:
            continue
        q_large = sum(1 for v in targets[k] if v == large)
        p_large = sum(1 for v in worker.bundle(k) if cost[v] == large)
        if q_large > p_large:
            donor = _find_donor(worker, k, large)
            if donor is None:
                worker.fail(k, "no large chore left in any later bundle")
            i, cl = donor
            smalls = tuple(c for c in worker.bundle(k) if cost[c] != large)
            worker.apply(k, k, smalls, i, (cl,), forbid_increase_after=k)
        # here the current bundle must be a cost-wise subset of its target
        have = list(_cost_profile(worker.bundle(k), cost))
        need = list(targets[k])
        for v in have:
            if v in need:
                need.remove(v)
            else:
                worker.fail(k, f"bundle {k} holds a chore of cost {v} "
                               "beyond its target profile")
        for v in need:
            donor = _find_donor(worker, k, v)
            if donor is None:
                worker.fail(k, f"no chore of cost {v} left in bundles after {k}")
            i, cl = donor
            worker.apply(k, k, (), i, (cl,), forbid_increase_after=k)
        if _cost_profile(worker.bundle(k), cost) != targets[k]:
            worker.fail(k, f"bundle {k} did not reach its target profile")
    return worker.finish()


def _counts(bundle: Iterable[int], cost, large: Fraction) -> tuple[int, int]:
    ids = list(bundle)
    n_large = sum(1 for c in ids if cost[c] == large)
    return n_large, len(ids) - n_large


def _last_large_bundle(worker: _Worker, large: Fraction) -> int | None:
    for i in range(len(worker.alloc.bundles) - 1, -1, -1):
        if any(worker.cost[c] == large for c in worker.bundle(i)):
            return i
    return None


def transform_mms_to_ffd(Q: Allocation, cost: Sequence[Fraction],
                         mu: Fraction) -> SwapTranscript:
    """Rearrange an MMS partition (every bundle cost at most mu) into the
    FFD packing at threshold (15/13)·mu by swaps, asserting the loop
    invariants and the two-small-chores facts at every iteration. Success
    certifies that FFD at that threshold packs everything into n bins.

    When mu is at least 6.5 times the small cost the threshold exceeds
    mu + s, FFD packs everything directly, and the transcript is empty.
    """
    all_chores = sorted(Q.allocated())
    if not all_chores:
        return SwapTranscript(steps=[], result="equal", final=Q)
    large, small = _large_small(cost[c] for c in all_chores)
    n = len(Q.bundles)
    for k, b in enumerate(Q.bundles):
        if bundle_cost(cost, b) > mu:
            raise PreconditionViolation(f"bundle {k} exceeds the stated MMS value {mu}")
    tau = APPROX_RATIO * mu
    outcome = ffd(all_chores, cost, tau)
    if mu >= Fraction(13, 2) * small:
        transcript = SwapTranscript(steps=[], final=Allocation.of(_pad(outcome.bundles, n)))
        if len(outcome.bundles) > n:
            transcript.result = "violation k=0"
            raise InvariantViolation(
                "FFD at tau >= mu + s used more bins than the partition", transcript)
        return transcript
    p_bundles = _pad(outcome.bundles, n)
    n_work = max(n, len(p_bundles))
    p_bundles = _pad(p_bundles, n_work)
    p_profiles = [_cost_profile(b, cost) for b in p_bundles]
    q_sorted = sorted(Q.bundles, key=lambda b: (-_counts(b, cost, large)[0],
                                                -_counts(b, cost, large)[1]))
    worker = _Worker(_pad(q_sorted, n_work), cost)

    def check_invariants(k: int):
        for i in range(k):
            if _cost_profile(worker.bundle(i), cost) != p_profiles[i]:
                worker.fail(k, f"invariant 1 broken at bundle {i}")
        for i in range(k, n_work):
            c_i = bundle_cost(cost, worker.bundle(i))
            if c_i > tau:
                worker.fail(k, f"invariant 2 broken: bundle {i} costs {c_i} > tau {tau}")
        for i in range(k + 1, n_work):
            c_i = bundle_cost(cost, worker.bundle(i))
            n_l, n_s = _counts(worker.bundle(i), cost, large)
            if c_i <= mu or n_l == 0 or (n_l == 1 and (n_s + 2) * small <= tau):
                continue
            worker.fail(k, f"invariant 3 broken at bundle {i}")

    for k in range(n_work):
        check_invariants(k)
        if len(worker.bundle(k)) > len(p_profiles[k]):
            a_q, b_q = _counts(worker.bundle(k), cost, large)
            a_p = sum(1 for v in p_profiles[k] if v == large)
            b_p = len(p_profiles[k]) - a_p
            if bundle_cost(cost, worker.bundle(k)) > mu:
                worker.fail(k, "a bundle reaching the two-for-one swap exceeds mu")
            if a_p < a_q + 1:
                worker.fail(k, "two-small-chores (a) broken: FFD bundle lacks extra large chore")
            if b_q < b_p + 2:
                worker.fail(k, "two-small-chores (b) broken: fewer than two extra small chores")
            if a_q < 1:
                worker.fail(k, "two-small-chores (d) broken: no large chore in the bundle")
            z = _last_large_bundle(worker, large)
            if z is None or z <= k:
                worker.fail(k, "two-small-chores (c) broken: no later bundle has a large chore")
            smalls = sorted(c for c in worker.bundle(k) if cost[c] != large)
            pair = tuple(smalls[:2])
            cl = max(c for c in worker.bundle(z) if cost[c] == large)
            worker.apply(k, k, pair, z, (cl,))
            if len(worker.bundle(k)) > len(p_profiles[k]):
                a_q2, b_q2 = _counts(worker.bundle(k), cost, large)
                if (a_q2, b_q2) == (2, 1) and (a_p, b_p) == (2, 0):
                    one_small = min(c for c in worker.bundle(k) if cost[c] != large)
                    worker.apply(k, k, (one_small,), z, ())
                elif (a_q2, b_q2) == (2, 2) and (a_p, b_p) == (3, 0):
                    z2 = _last_large_bundle(worker, large)
                    if z2 is None or z2 <= k:
                        worker.fail(k, "special case: no later bundle has a large chore")
                    smalls2 = sorted(c for c in worker.bundle(k) if cost[c] != large)
                    cl2 = max(c for c in worker.bundle(z2) if cost[c] == large)
                    worker.apply(k, k, tuple(smalls2[:2]), z2, (cl2,))
                else:
                    worker.fail(k, "bundle still has too many chores outside the "
                                   "two special cases")
        for j, want in enumerate(p_profiles[k]):
            current = sort_desc(worker.bundle(k), cost)
            have = cost[current[j]] if j < len(current) else Fraction(0)
            if have > want:
                worker.fail(k, f"bundle {k} position {j} exceeds the FFD profile")
            if have == want:
                continue
            donor = _find_donor(worker, k, want)
            if donor is None:
                worker.fail(k, f"no chore of cost {want} left in bundles after {k}")
            z, cl = donor
            out = (current[j],) if j < len(current) else ()
            worker.apply(k, k, out, z, (cl,))
        if _cost_profile(worker.bundle(k), cost) != p_profiles[k]:
            worker.fail(k, f"bundle {k} did not reach the FFD profile")
    return worker.finish()


def fit_in_space(alloc: Allocation, k: int, cost: Sequence[Fraction],
                 tau: Fraction = Fraction(1)) -> Fraction:
    """Threshold minus the bundle's cost without its smallest chore."""
    bundle = alloc.bundles[k]
    if not bundle:
        raise EmptyBundle(f"bundle {k} is empty")
    smallest = sort_desc(bundle, cost)[-1]
    return tau - (bundle_cost(cost, bundle) - cost[smallest])


def remove_redundant(alloc: Allocation, cost: Sequence[Fraction],
                     tau: Fraction) -> Allocation:
    """Drop, from each bundle, every chore after the shortest prefix whose
    cost reaches the threshold (diagnostic; implements the literal
    definition, see the package notes on the boundary case)."""
    trimmed = []
    for bundle in alloc.bundles:
        ordered = sort_desc(bundle, cost)
        total = Fraction(0)
        keep = len(ordered)
        for p, c in enumerate(ordered):
            total += cost[c]
            if total >= tau:
                keep = p + 1
                break
        trimmed.append(tuple(sorted(ordered[:keep])))
    return Allocation(tuple(trimmed), alloc.agents)
