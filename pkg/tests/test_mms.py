import random
from fractions import Fraction as F

import pytest

from choremms.analysis import gen_instance
from choremms.core import Instance, bundle_cost
from choremms.errors import BadParams, NotFactored, TooLarge, UnsupportedClass
from choremms.mms import (APPROX_RATIO, mms_brute, mms_factored,
                          min_success_threshold, solve_auto, solve_bivalued,
                          solve_factored, solve_ordinal)
from choremms.packing import ffd, subset_sums
from helpers import brute_min_makespan, random_rationals

LOWER_BOUND_ROW = tuple(F(x) for x in [4, 4, 4] + [3] * 9)


# --------------------------------------------------------------- mms_brute

def test_mms_brute_matches_unpruned_oracle():
    rng = random.Random(0x315)
    for _ in range(60):
        m = rng.randint(1, 7)
        d = rng.randint(1, 3)
        cost = random_rationals(rng, m)
        res = mms_brute(cost, range(m), d)
        assert res.value == brute_min_makespan(cost, range(m), d)


def test_mms_brute_witness_is_valid():
    rng = random.Random(0x316)
    for _ in range(40):
        m = rng.randint(1, 8)
        d = rng.randint(1, 4)
        cost = random_rationals(rng, m)
        res = mms_brute(cost, range(m), d)
        assert len(res.witness) == d
        flat = sorted(c for b in res.witness for c in b)
        assert flat == list(range(m))
        assert max(bundle_cost(cost, b) for b in res.witness) == res.value


def test_mms_brute_single_bundle_is_total():
    cost = (F(3), F(1, 2), F(7))
    assert mms_brute(cost, range(3), 1).value == F(21, 2)


def test_mms_brute_lower_bound_instance():
    assert mms_brute(LOWER_BOUND_ROW, range(12), 3).value == 13
    assert mms_brute(LOWER_BOUND_ROW, range(12), 2).value == 20


def test_mms_brute_rejects_bad_d_and_caps_size():
    with pytest.raises(BadParams):
        mms_brute((F(1),), [0], 0)
    with pytest.raises(TooLarge):
        mms_brute((F(1),) * 20, range(20), 2)


# ------------------------------------------------------------ mms_factored

def test_mms_factored_example():
    cost = tuple(F(x) for x in [4, 2, 2, 1, 1])
    assert mms_factored(cost, range(5), 2).value == 5


def test_mms_factored_matches_brute():
    for seed in range(80):
        inst = gen_instance("factored", 1, random.Random(seed).randint(2, 9),
                            seed=seed)
        cost = inst.cost(0)
        d = random.Random(seed + 1).randint(1, 4)
        res = mms_factored(cost, inst.chores(), d)
        assert res.value == mms_brute(cost, inst.chores(), d).value
        assert max(bundle_cost(cost, b) for b in res.witness) == res.value


def test_mms_factored_rejects_non_factored():
    with pytest.raises(NotFactored):
        mms_factored((F(7), F(7), F(2)), range(3), 2)


# --------------------------------------------- min_success_threshold

def threshold_oracle(cost, grid, d):
    ok = [g for g in sorted(grid) if g > 0
          and ffd(range(len(cost)), cost, g, max_bins=d).succeeded]
    return ok[0]


def test_min_success_threshold_lower_bound_instance():
    inst = Instance(tuple(LOWER_BOUND_ROW for _ in range(3)))
    assert min_success_threshold(LOWER_BOUND_ROW, inst.chores(), 3) == 15


def test_min_success_threshold_factored_matches_grid_scan():
    for seed in range(50):
        inst = gen_instance("factored", 1, random.Random(seed).randint(2, 8),
                            seed=seed + 500)
        cost = inst.cost(0)
        d = random.Random(seed).randint(1, 3)
        got = min_success_threshold(cost, inst.chores(), d)
        grid = subset_sums(inst.chores(), cost)
        assert got == threshold_oracle(cost, grid, d)


def test_min_success_threshold_bivalued_matches_grid_scan():
    for seed in range(50):
        inst = gen_instance("bivalued", 1, random.Random(seed).randint(2, 9),
                            seed=seed + 900)
        cost = inst.cost(0)
        d = random.Random(seed).randint(1, 3)
        got = min_success_threshold(cost, inst.chores(), d)
        vals = sorted(set(cost))
        s = vals[0]
        l = vals[-1]
        m = len(cost)
        grid = {a * l + b * s for a in range(m + 1) for b in range(m + 1)}
        assert got == threshold_oracle(cost, grid, d)


def test_min_success_threshold_rejects_general_costs():
    with pytest.raises(UnsupportedClass):
        min_success_threshold((F(7), F(5), F(3)), range(3), 2)


# ----------------------------------------------------------------- solvers

def check_solution(inst, res, ratio):
    assert res.allocation.is_complete(inst.m)
    for i in range(inst.n):
        assert res.costs[i] == bundle_cost(inst.cost(i), res.allocation.bundles[i])
        assert res.costs[i] <= ratio * res.mms_values[i]


def test_solve_factored_is_exact_mms():
    for seed in range(60):
        rng = random.Random(seed)
        inst = gen_instance("factored", rng.randint(1, 4), rng.randint(2, 9),
                            seed=seed + 7)
        res = solve_factored(inst)
        check_solution(inst, res, F(1))


def test_solve_bivalued_guarantee():
    for seed in range(60):
        rng = random.Random(seed)
        inst = gen_instance("personalized_bivalued", rng.randint(1, 3),
                            rng.randint(2, 9), seed=seed + 11)
        res = solve_bivalued(inst)
        check_solution(inst, res, APPROX_RATIO)


def test_solve_bivalued_lower_bound_instance():
    inst = Instance(tuple(LOWER_BOUND_ROW for _ in range(3)))
    res = solve_bivalued(inst)
    assert res.thresholds == (F(15),) * 3
    assert max(res.costs) == 15
    check_solution(inst, res, APPROX_RATIO)


def test_solve_ordinal_guarantee():
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.randint(2, 5)
        inst = gen_instance("general", n, rng.randint(2, 8), seed=seed + 13)
        res = solve_ordinal(inst)
        d = 9 * n // 11
        assert res.allocation.is_complete(inst.m)
        for i in range(n):
            mms_d = mms_brute(inst.cost(i), inst.chores(), d).value
            assert res.costs[i] <= mms_d


def test_solve_ordinal_rejects_single_agent():
    with pytest.raises(BadParams):
        solve_ordinal(Instance.from_rows([[1, 2]]))


def test_solve_auto_dispatch():
    factored = Instance.from_rows([[4, 2, 2, 1, 1]] * 2)
    assert solve_auto(factored).algorithm == "factored"
    bivalued = Instance.from_rows([[7, 7, 2, 2]] * 2)
    assert solve_auto(bivalued).algorithm == "bivalued"
    general = Instance.from_rows([[7, 5, 3], [3, 5, 7]])
    assert solve_auto(general).algorithm == "ordinal"
