"""Case-table derivation for the bivalued bound, seeded instance
generators, and stochastic searches for the open monotonicity and
MMS-existence questions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import Instance, format_rational
from .errors import BadParams, InvariantViolation, TooLarge
from .mms import mms_brute
from .packing import ffd, subset_sums

MU_CUTOFF = Fraction(13, 2)
SPECIAL_SIGNATURES = {(1, 3, 2, 0), (1, 4, 3, 0)}


@dataclass(frozen=True)
class CaseRow:
    """One feasible (large, small) count signature for the bundle being
    fixed (a_q, b_q) versus its FFD counterpart (a_p, b_p), with the exact
    lower bounds the counts imply."""

    a_q: int
    b_q: int
    a_p: int
    b_p: int
    ratio_lower: Fraction       # l/s must exceed this
    mu_lower: Fraction          # mu/s must exceed this
    tau_lower_s: Fraction       # tau/s must exceed this
    tau_lower_ls: Fraction      # tau must exceed l + this * s
    excluded: bool              # mu bound already settles the case
    special: bool               # needs the extra inner swap

    @property
    def signature(self) -> tuple[int, int, int, int]:
        return (self.a_q, self.b_q, self.a_p, self.b_p)


def case_table() -> list[CaseRow]:
    """All count signatures compatible with the two-small-chores facts:
    the fixed bundle has at most 6 chores, at least one large chore, two
    more small chores and one fewer large chore than its FFD counterpart,
    and more chores overall."""
    ratio = Fraction(15, 13)
    rows = []
    for a_q in range(1, 7):
        for b_q in range(0, 7 - a_q):
            for a_p in range(a_q + 1, a_q + b_q + 1):
                for b_p in range(0, b_q - 1):
                    if a_q + b_q <= a_p + b_p:
                        continue
                    if 13 * a_p - 15 * a_q <= 0:
                        continue
                    ratio_lower = Fraction(15 * b_q - 13 * b_p - 13, 13 * a_p - 15 * a_q)
                    mu_lower = a_q * ratio_lower + b_q
                    tau_lower_s = ratio * mu_lower
                    rows.append(CaseRow(
                        a_q=a_q, b_q=b_q, a_p=a_p, b_p=b_p,
                        ratio_lower=ratio_lower,
                        mu_lower=mu_lower,
                        tau_lower_s=tau_lower_s,
                        tau_lower_ls=tau_lower_s - ratio_lower,
                        excluded=mu_lower >= MU_CUTOFF,
                        special=(a_q, b_q, a_p, b_p) in SPECIAL_SIGNATURES,
                    ))
    rows.sort(key=lambda r: (r.a_q + r.b_q, r.a_q, r.a_p, r.b_p))
    return rows


def format_case_table(rows: Iterable[CaseRow]) -> str:
    lines = ["aq\tbq\tap\tbp\tE\tF\tG\tH\texcluded\tspecial"]
    for r in rows:
        lines.append("\t".join([
            str(r.a_q), str(r.b_q), str(r.a_p), str(r.b_p),
            format_rational(r.ratio_lower), format_rational(r.mu_lower),
            format_rational(r.tau_lower_s), format_rational(r.tau_lower_ls),
            "1" if r.excluded else "0", "1" if r.special else "0",
        ]))
    return "\n".join(lines) + "\n"


def gen_instance(kind: str, n: int, m: int, seed: int, **params) -> Instance:
    """Seed-deterministic random instance of the requested class."""
    if n < 1 or m < 0:
        raise BadParams("need n >= 1 and m >= 0")
    rng = random.Random(("choremms", kind, n, m, seed).__repr__())
    if kind == "factored":
        base = Fraction(rng.randint(1, 3))
        chain = [base]
        for _ in range(params.get("levels", rng.randint(1, 3))):
            chain.append(chain[-1] * rng.randint(2, 3))
        rows = [[rng.choice(chain) for _ in range(m)] for _ in range(n)]
    elif kind == "bivalued":
        small = Fraction(rng.randint(1, 5))
        large = small + rng.randint(1, 8)
        rows = [[rng.choice((large, small)) for _ in range(m)] for _ in range(n)]
    elif kind == "personalized_bivalued":
        rows = []
        for _ in range(n):
            small = Fraction(rng.randint(1, 6), rng.randint(1, 2))
            large = small + Fraction(rng.randint(1, 9), rng.randint(1, 2))
            rows.append([rng.choice((large, small)) for _ in range(m)])
    elif kind == "general":
        rows = [[Fraction(rng.randint(1, 24), rng.randint(1, 4)) for _ in range(m)]
                for _ in range(n)]
    else:
        raise BadParams(f"unknown instance class {kind!r}")
    if m == 0:
        return Instance(tuple((() for _ in range(n))))
    return Instance.from_rows(rows)


@dataclass(frozen=True)
class MonotonicityCounterexample:
    instance: Instance
    agent: int
    bins: int
    tau: Fraction
    beta: Fraction


def search_monotonicity(kind: str, trials: int, seed: int,
                        n_range=(1, 4), m_range=(3, 10)) -> MonotonicityCounterexample | None:
    """Sample (instance, tau < beta) pairs and look for FFD succeeding at
    tau into a fixed bin count but failing at beta. For factored and
    bivalued costs a hit contradicts the monotonicity guarantee and raises;
    for general costs it is returned as a research finding."""
    rng = random.Random(("monotonicity", kind, seed).__repr__())
    for trial in range(trials):
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        instance = gen_instance(kind, 1, m, seed=seed * 1_000_003 + trial)
        cost = instance.cost(0)
        chores = instance.chores()
        bins = rng.randint(1, max(1, n))
        grid = [s for s in subset_sums(chores, cost) if s >= max(cost)]
        if len(grid) < 2:
            continue
        tau, beta = sorted(rng.sample(range(len(grid)), 2))
        tau, beta = grid[tau], grid[beta]
        if ffd(chores, cost, tau, max_bins=bins).succeeded and \
                not ffd(chores, cost, beta, max_bins=bins).succeeded:
            hit = MonotonicityCounterexample(instance, 0, bins, tau, beta)
            if kind in ("factored", "bivalued", "personalized_bivalued"):
                raise InvariantViolation(
                    f"FFD monotonicity broken on a {kind} instance: succeeds at "
                    f"{tau} but fails at {beta} with {bins} bins")
            return hit
    return None


def _mms_allocation_exists(instance: Instance, mus) -> bool:
    """Exhaustive check: can every agent receive cost at most their MMS?"""
    m = instance.m
    n = instance.n
    loads = [Fraction(0)] * n
    order = sorted(range(m), key=lambda c: -max(instance.cost(i)[c] for i in range(n)))

    def rec(idx: int) -> bool:
        if idx == m:
            return True
        c = order[idx]
        tried = set()
        for i in range(n):
            new = loads[i] + instance.cost(i)[c]
            if new > mus[i] or (i, loads[i]) in tried:
                continue
            tried.add((i, loads[i]))
            loads[i] = new
            if rec(idx + 1):
                loads[i] -= instance.cost(i)[c]
                return True
            loads[i] = new - instance.cost(i)[c]
        return False

    return rec(0)


def search_bivalued_mms_existence(trials: int, seed: int, m_cap: int = 12,
                                  n_range=(2, 4)) -> Instance | None:
    """Sample personalized bivalued instances and brute-force whether an
    exact MMS allocation exists; returns the first negative instance found
    (none is asserted to exist)."""
    if m_cap > 14:
        raise TooLarge("existence search is exponential; keep m_cap <= 14")
    rng = random.Random(("mms-existence", seed).__repr__())
    for trial in range(trials):
        n = rng.randint(*n_range)
        m = rng.randint(n, m_cap)
        instance = gen_instance("personalized_bivalued", n, m, seed=seed * 7_777_777 + trial)
        chores = instance.chores()
        mus = [mms_brute(instance.cost(i), chores, n, cap=m_cap).value for i in range(n)]
        if not _mms_allocation_exists(instance, mus):
            return instance
    return None
