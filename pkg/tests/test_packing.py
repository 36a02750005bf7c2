import random
from fractions import Fraction as F

import pytest

from choremms.core import (EQUAL, Instance, bundle_cost, lex_compare, to_ido)
from choremms.errors import BadParams, EmptyBinDeadlock
from choremms.ffv import benchmark_bundle, is_ffv
from choremms.packing import ffd, hffd, multifit, subset_sums
from helpers import brute_min_makespan, random_rationals

LOWER_BOUND_COSTS = tuple(F(x) for x in [4, 4, 4] + [3] * 9)


def profiles(outcome, cost):
    return [tuple(sorted((cost[c] for c in b), reverse=True)) for b in outcome.bundles]


# --------------------------------------------------------------------- ffd

def test_ffd_lower_bound_instance_fails_at_13():
    out = ffd(range(12), LOWER_BOUND_COSTS, F(13), max_bins=3)
    assert not out.succeeded
    assert profiles(out, LOWER_BOUND_COSTS) == [
        (F(4), F(4), F(4)), (F(3),) * 4, (F(3),) * 4]
    assert len(out.unallocated) == 1
    assert LOWER_BOUND_COSTS[out.unallocated[0]] == 3


def test_ffd_lower_bound_instance_succeeds_at_15():
    out = ffd(range(12), LOWER_BOUND_COSTS, F(15), max_bins=3)
    assert out.succeeded
    assert profiles(out, LOWER_BOUND_COSTS) == [
        (F(4), F(4), F(4), F(3)), (F(3),) * 5, (F(3),) * 3]


def test_ffd_single_chore_tight_threshold():
    out = ffd([0], (F(7),), F(7))
    assert out.succeeded and out.bundles == ((0,),)


def test_ffd_rejects_nonpositive_threshold():
    with pytest.raises(BadParams):
        ffd([0], (F(1),), F(0))


def test_ffd_deterministic():
    rng = random.Random(7)
    cost = random_rationals(rng, 9)
    a = ffd(range(9), cost, F(9), max_bins=3)
    b = ffd(range(9), cost, F(9), max_bins=3)
    assert a == b


def test_ffd_bins_equal_benchmark_bundles():
    # each FFD bin is lex-equal to the benchmark bundle of the prefix
    # before it
    rng = random.Random(0xFFD)
    for _ in range(80):
        m = rng.randint(1, 9)
        cost = random_rationals(rng, m)
        tau = max(cost) * F(rng.randint(1, 3), rng.randint(1, 2))
        out = ffd(range(m), cost, tau)
        for k in range(len(out.bundles)):
            bench = benchmark_bundle(range(m), out.bundles[:k], cost, tau)
            assert lex_compare(out.bundles[k], bench, cost) == EQUAL


# ---------------------------------------------------------------- multifit

def test_multifit_lower_bound_instance():
    tau, out = multifit(range(12), LOWER_BOUND_COSTS, 3)
    assert tau == 15 and out.succeeded
    # exhaustive: every achievable-sum threshold below 15 fails
    for s in subset_sums(range(12), LOWER_BOUND_COSTS):
        if max(LOWER_BOUND_COSTS) <= s < 15:
            assert not ffd(range(12), LOWER_BOUND_COSTS, s, max_bins=3).succeeded


def test_multifit_singletons():
    cost = (F(5),) * 4
    tau, out = multifit(range(4), cost, 4)
    assert tau == 5 and out.succeeded


def test_multifit_factored_matches_brute_force_makespan():
    cost = tuple(F(x) for x in [4, 2, 2, 1, 1])
    tau, out = multifit(range(5), cost, 2)
    assert tau == 5 and out.succeeded
    assert brute_min_makespan(cost, range(5), 2) == 5


def test_multifit_returned_threshold_always_succeeds():
    rng = random.Random(0x3117)
    for _ in range(40):
        m = rng.randint(1, 8)
        n = rng.randint(1, 4)
        cost = random_rationals(rng, m)
        tau, out = multifit(range(m), cost, n)
        assert out.succeeded
        assert ffd(range(m), cost, tau, max_bins=n).succeeded


# -------------------------------------------------------------------- hffd

def test_hffd_single_agent_takes_everything():
    inst = Instance.from_rows([[3, 2, 1]])
    out = hffd(inst, [F(6)])
    assert out.succeeded and out.bundles == ((0, 1, 2),)
    assert out.allocation.agents == (0,)


def test_hffd_identical_agents_collapse_to_ffd():
    rng = random.Random(0x4FFD)
    for _ in range(50):
        n = rng.randint(1, 4)
        m = rng.randint(1, 9)
        row = random_rationals(rng, m)
        row = tuple(sorted(row, reverse=True))
        inst = Instance(tuple(row for _ in range(n)))
        tau = max(row) * F(rng.randint(1, 3))
        out_h = hffd(inst, [tau] * n)
        out_f = ffd(range(m), row, tau, max_bins=n)
        assert [tuple(b) for b in out_h.bundles] == [tuple(b) for b in out_f.bundles]
        assert sorted(out_h.unallocated) == sorted(out_f.unallocated)


def test_hffd_lower_bound_instance():
    inst = Instance(tuple(LOWER_BOUND_COSTS for _ in range(3)))
    good = hffd(inst, [F(15)] * 3)
    assert good.succeeded
    assert [tuple(b) for b in good.bundles] == \
        [tuple(b) for b in ffd(range(12), LOWER_BOUND_COSTS, F(15), max_bins=3).bundles]
    bad = hffd(inst, [F(13)] * 3)
    assert not bad.succeeded and len(bad.unallocated) == 1


def test_hffd_empty_bin_deadlock():
    inst = Instance.from_rows([[10, 1], [10, 1]])
    with pytest.raises(EmptyBinDeadlock) as exc:
        hffd(inst, [F(5), F(5)])
    assert exc.value.chore == 0


def test_hffd_output_is_ffv_for_last_agent():
    # the HFFD outcome is First-Fit-Valid for the last assigned agent at
    # any threshold up to theirs
    rng = random.Random(0xFF5)
    for _ in range(60):
        n = rng.randint(2, 4)
        m = rng.randint(n, 10)
        inst, _ = to_ido(Instance(tuple(random_rationals(rng, m) for _ in range(n))))
        taus = [max(inst.cost(i)) * F(rng.randint(1, 3)) + rng.randint(0, 2)
                for i in range(n)]
        out = hffd(inst, taus)
        if not out.allocation.agents:
            continue
        last = out.allocation.agents[-1]
        cost = inst.cost(last)
        smallest = min(cost)
        for tau in {taus[last], taus[last] / 2, smallest}:
            if tau <= 0 or tau > taus[last]:
                continue
            ok, bad = is_ffv(range(m), out.allocation, cost, tau)
            assert ok, f"FFV violated at bundle {bad} for tau={tau}"


def test_ffd_monotone_on_factored_and_bivalued():
    from choremms.analysis import gen_instance
    rng = random.Random(0x300)
    for kind in ("factored", "bivalued"):
        for trial in range(60):
            inst = gen_instance(kind, 1, rng.randint(3, 9), seed=trial)
            cost = inst.cost(0)
            grid = subset_sums(inst.chores(), cost)
            grid = [g for g in grid if g >= max(cost)]
            bins = rng.randint(1, 3)
            succeeded = [g for g in grid
                         if ffd(inst.chores(), cost, g, max_bins=bins).succeeded]
            if succeeded:
                first = min(succeeded)
                assert all(g in succeeded for g in grid if g > first)
