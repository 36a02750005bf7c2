"""Independent oracles and random-input builders shared by the tests.

Every oracle here deliberately avoids the code path it checks: subsets are
enumerated exhaustively, partitions are generated without pruning, and
lexicographic maxima are found by pairwise comparison over all candidates.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from choremms.core import Allocation, EQUAL, bundle_cost, lex_compare
from choremms.ffv import is_ffv


def brute_lex_max(all_chores, prefix, cost, tau):
    """Lexicographically maximal subset under tau by scanning every subset."""
    taken = {c for b in prefix for c in b}
    remaining = [c for c in all_chores if c not in taken]
    best: tuple[int, ...] = ()
    for r in range(len(remaining) + 1):
        for combo in itertools.combinations(remaining, r):
            if bundle_cost(cost, combo) <= tau and lex_compare(combo, best, cost) > EQUAL:
                best = combo
    return best


def brute_min_makespan(cost, chores, d):
    """Exact minimum over all d-partitions of the max bundle cost, with no
    pruning beyond skipping symmetric bundle orderings."""
    chores = list(chores)
    best = None
    for labels in itertools.product(range(d), repeat=len(chores)):
        sums = [Fraction(0)] * d
        for c, b in zip(chores, labels):
            sums[b] += cost[c]
        worst = max(sums)
        if best is None or worst < best:
            best = worst
    return best


def all_complete_allocations(m, k):
    """Every assignment of m chores to k ordered bundles."""
    for labels in itertools.product(range(k), repeat=m):
        bundles = [[] for _ in range(k)]
        for c, b in enumerate(labels):
            bundles[b].append(c)
        yield Allocation.of(bundles)


def random_rationals(rng: random.Random, m, max_num=12, max_den=3):
    return tuple(Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
                 for _ in range(m))


def perturb_to_ffv(rng: random.Random, base: Allocation, all_chores, cost, tau,
                   attempts=30) -> Allocation:
    """Randomly shuffle chores between bundles, keeping only moves that
    preserve First-Fit-Validity; yields an adversarial FFV allocation that
    is usually not an FFD output."""
    current = base
    for _ in range(attempts):
        bundles = [list(b) for b in current.bundles]
        n = len(bundles)
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        if rng.random() < 0.5 and bundles[j]:
            c = rng.choice(bundles[j])
            bundles[j].remove(c)
            bundles[i].append(c)
        elif bundles[i] and bundles[j]:
            a = rng.choice(bundles[i])
            b = rng.choice(bundles[j])
            bundles[i].remove(a)
            bundles[j].remove(b)
            bundles[i].append(b)
            bundles[j].append(a)
        else:
            continue
        candidate = Allocation.of(bundles)
        if is_ffv(all_chores, candidate, cost, tau)[0]:
            current = candidate
    return current
