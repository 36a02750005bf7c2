"""Command-line front end: solve, verify, gen, table, search.

Exit codes: 0 success / all checks pass, 1 algorithmic failure or failed
verification, 2 input error, 3 counterexample found by a search.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import analysis, mms
from .core import (Allocation, Instance, bundle_cost, format_rational,
                   parse_rational, to_ido, universal_ordering)
from .errors import ChoreMMSError, ParseError, TheoremViolation
from .io import format_allocation, format_instance, parse_allocation, parse_instance
from .packing import ffd, hffd, multifit

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


def _rational_arg(text: str) -> Fraction:
    # decimals are rejected on purpose: thresholds must be exact
    try:
        value = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _read_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _report(algorithm, thresholds, instance, allocation, mus, elapsed, unallocated=()):
    per_agent = {}
    for b, bundle in enumerate(allocation.bundles):
        agent = allocation.agent_of(b)
        per_agent[agent] = tuple(sorted(set(per_agent.get(agent, ())) | set(bundle)))
    complete = allocation.is_complete(instance.m)
    print(f"algorithm: {algorithm}")
    if thresholds:
        print("thresholds: " + " ".join(format_rational(t) for t in thresholds))
    for i in range(instance.n):
        cost = bundle_cost(instance.cost(i), per_agent.get(i, ()))
        line = f"agent {i}: cost {format_rational(cost)}"
        if mus is not None and mus[i] is not None:
            ratio = cost / mus[i] if mus[i] else Fraction(0)
            line += f" mms {format_rational(mus[i])} ratio {format_rational(ratio)}"
        print(line)
    if unallocated:
        print("unallocated: " + " ".join(str(c) for c in unallocated))
    print(f"success: {'yes' if complete else 'no'}")
    print(f"wall-time-seconds: {elapsed:.3f}")
    return complete


def _bundle_allocation_per_agent(outcome, n: int) -> Allocation:
    """Spread packing bundles over n agents: bundle index is the agent for
    FFD/MultiFit, the recorded owner for HFFD."""
    per_agent = [()] * n
    for b, bundle in enumerate(outcome.allocation.bundles):
        agent = outcome.allocation.agent_of(b)
        per_agent[agent] = tuple(sorted(set(per_agent[agent]) | set(bundle)))
    return Allocation.of(per_agent, agents=range(n))


def cmd_solve(args) -> int:
    try:
        instance = _read_instance(args.instance)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    named = {"factored": mms.solve_factored,
             "bivalued": mms.solve_bivalued,
             "ordinal": mms.solve_ordinal}
    if args.algo in ("hffd", "ffd") and not args.tau:
        print("error: --tau is required for ffd and hffd", file=sys.stderr)
        return EXIT_INPUT
    if args.algo not in ("hffd", "ffd") and args.tau:
        print(f"error: --tau is not accepted with --algo {args.algo}", file=sys.stderr)
        return EXIT_INPUT
    start = time.perf_counter()
    mus = None
    unallocated: tuple[int, ...] = ()
    try:
        if args.algo == "ffd":
            if len(args.tau) != 1:
                print("error: ffd takes exactly one threshold", file=sys.stderr)
                return EXIT_INPUT
            outcome = ffd(instance.chores(), instance.cost(0), args.tau[0],
                          max_bins=instance.n)
            thresholds = tuple(args.tau) * instance.n
            allocation = _bundle_allocation_per_agent(outcome, instance.n)
            unallocated = outcome.unallocated
        elif args.algo == "multifit":
            tau, outcome = multifit(instance.chores(), instance.cost(0), instance.n)
            thresholds = (tau,) * instance.n
            allocation = _bundle_allocation_per_agent(outcome, instance.n)
            unallocated = outcome.unallocated
        elif args.algo == "hffd":
            taus = args.tau if len(args.tau) > 1 else args.tau * instance.n
            if len(taus) != instance.n:
                print(f"error: hffd needs 1 or {instance.n} thresholds", file=sys.stderr)
                return EXIT_INPUT
            ido, lifting = to_ido(instance)
            outcome = hffd(ido, taus)
            thresholds = tuple(taus)
            if outcome.succeeded:
                allocation = lifting.lift(_bundle_allocation_per_agent(outcome, instance.n))
            else:
                allocation = _bundle_allocation_per_agent(outcome, instance.n)
            unallocated = outcome.unallocated
        else:
            result = named[args.algo](instance)
            thresholds = result.thresholds
            allocation = result.allocation
            mus = result.mms_values
    except TheoremViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ChoreMMSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.perf_counter() - start
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(format_allocation(allocation, instance))
    complete = _report(args.algo, thresholds, instance, allocation, mus,
                       elapsed, unallocated)
    return EXIT_OK if complete else EXIT_FAILED


def cmd_verify(args) -> int:
    try:
        instance = _read_instance(args.instance)
        with open(args.allocation, encoding="utf-8") as fh:
            allocation = parse_allocation(fh.read(), instance)
        mode = args.mode[0]
        if mode == "ratio":
            if len(args.mode) != 2:
                raise ParseError("--mode ratio needs a value, e.g. --mode ratio 15/13")
            alpha = parse_rational(args.mode[1])
        elif mode in ("mms", "ordinal"):
            if len(args.mode) != 1:
                raise ParseError(f"--mode {mode} takes no value")
            alpha = Fraction(1)
        else:
            raise ParseError(f"unknown mode {mode!r}")
    except (OSError, ValueError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not allocation.is_complete(instance.m):
        print("verdict: allocation is not complete")
        return EXIT_FAILED
    d = instance.n if mode != "ordinal" else 9 * instance.n // 11
    if d < 1:
        print("error: ordinal mode needs at least two agents", file=sys.stderr)
        return EXIT_INPUT
    all_pass = True
    for i in range(instance.n):
        mu = mms.mms_brute(instance.cost(i), instance.chores(), d).value
        bound = alpha * mu
        cost = bundle_cost(instance.cost(i), allocation.bundles[i])
        ok = cost <= bound
        all_pass &= ok
        print(f"agent {i}: cost {format_rational(cost)} "
              f"bound {format_rational(bound)} {'pass' if ok else 'FAIL'}")
    return EXIT_OK if all_pass else EXIT_FAILED


def cmd_gen(args) -> int:
    try:
        instance = analysis.gen_instance(args.klass, args.n, args.m, args.seed)
    except ChoreMMSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = format_instance(instance)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_table(args) -> int:
    text = analysis.format_case_table(analysis.case_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_search(args) -> int:
    if args.target == "monotonicity":
        hit = analysis.search_monotonicity(args.klass, args.trials, args.seed)
        if hit is None:
            print("no counterexample found")
            return EXIT_OK
        path = args.out or "monotonicity-counterexample.txt"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# FFD succeeds at tau={format_rational(hit.tau)} into "
                     f"{hit.bins} bins but fails at beta={format_rational(hit.beta)}\n")
            fh.write(format_instance(hit.instance))
        print(f"counterexample written to {path}")
        return EXIT_COUNTEREXAMPLE
    if args.target == "mms-existence":
        hit = analysis.search_bivalued_mms_existence(args.trials, args.seed)
        if hit is None:
            print("no counterexample found")
            return EXIT_OK
        path = args.out or "mms-existence-counterexample.txt"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# personalized bivalued instance with no exact MMS allocation\n")
            fh.write(format_instance(hit))
        print(f"counterexample written to {path}")
        return EXIT_COUNTEREXAMPLE
    print(f"error: unknown target {args.target!r}", file=sys.stderr)
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choremms",
        description="Fair division of indivisible chores with maximin-share guarantees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a packing algorithm or a named solver")
    p.add_argument("instance")
    p.add_argument("--algo", required=True,
                   choices=["hffd", "ffd", "multifit", "factored", "bivalued", "ordinal"])
    p.add_argument("--tau", nargs="+", type=_rational_arg,
                   help="threshold(s); required for ffd/hffd, forbidden otherwise")
    p.add_argument("--out", help="write the allocation file here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check an allocation against MMS bounds")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--mode", nargs="+", required=True,
                   help="mms | ratio <p/q> | ordinal")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--class", dest="klass", required=True,
                   choices=["factored", "bivalued", "personalized_bivalued", "general"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("table", help="print the bivalued case table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search", help="stochastic counterexample searches")
    p.add_argument("--target", required=True, choices=["monotonicity", "mms-existence"])
    p.add_argument("--class", dest="klass", default="general",
                   choices=["factored", "bivalued", "personalized_bivalued", "general"])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
