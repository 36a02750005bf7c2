"""Instance and allocation file formats (UTF-8 text, bit-exact round-trip).

Instance file::

    mms-instance 1
    agents <n>
    chores <m>
    <m rationals>      # one line per agent, `p` or `p/q`

Allocation file: n lines ``agent <i>: <chore ids>`` followed by n lines
``cost <i>: <rational>``. Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Allocation, Instance, bundle_cost, format_rational, parse_rational
from .errors import ParseError


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def format_instance(instance: Instance) -> str:
    lines = ["mms-instance 1", f"agents {instance.n}", f"chores {instance.m}"]
    for row in instance.costs:
        lines.append(" ".join(format_rational(c) for c in row))
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    lines = list(_significant_lines(text))
    if not lines or lines[0][1] != "mms-instance 1":
        lineno = lines[0][0] if lines else 1
        raise ParseError("expected header 'mms-instance 1'", lineno)
    if len(lines) < 3:
        raise ParseError("missing agents/chores declarations")
    n = _parse_count(lines[1], "agents")
    m = _parse_count(lines[2], "chores")
    if len(lines) != 3 + n:
        raise ParseError(f"expected {n} cost rows, found {len(lines) - 3}")
    rows = []
    for lineno, line in lines[3:]:
        fields = line.split()
        if len(fields) != m:
            raise ParseError(f"expected {m} costs, found {len(fields)}", lineno)
        try:
            row = tuple(parse_rational(f) for f in fields)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
        if any(c <= 0 for c in row):
            raise ParseError("all chore costs must be strictly positive", lineno)
        rows.append(row)
    if n < 1:
        raise ParseError("need at least one agent", lines[1][0])
    return Instance(tuple(rows))


def _parse_count(entry, keyword):
    lineno, line = entry
    fields = line.split()
    if len(fields) != 2 or fields[0] != keyword or not fields[1].isdigit():
        raise ParseError(f"expected '{keyword} <count>'", lineno)
    return int(fields[1])


def format_allocation(allocation: Allocation, instance: Instance) -> str:
    """n lines of bundles (bundle index i belongs to agent i unless an
    agent map is present), then n lines of per-agent costs."""
    n = instance.n
    per_agent: dict[int, tuple[int, ...]] = {}
    for b, bundle in enumerate(allocation.bundles):
        agent = allocation.agent_of(b)
        per_agent[agent] = tuple(sorted(set(per_agent.get(agent, ())) | set(bundle)))
    lines = []
    for i in range(n):
        ids = per_agent.get(i, ())
        lines.append(f"agent {i}: " + " ".join(str(c) for c in ids))
    for i in range(n):
        cost = bundle_cost(instance.cost(i), per_agent.get(i, ()))
        lines.append(f"cost {i}: {format_rational(cost)}")
    return "\n".join(lines) + "\n"


def parse_allocation(text: str, instance: Instance) -> Allocation:
    bundles: dict[int, tuple[int, ...]] = {}
    costs: dict[int, Fraction] = {}
    for lineno, line in _significant_lines(text):
        head, _, rest = line.partition(":")
        fields = head.split()
        if len(fields) != 2 or not fields[1].isdigit():
            raise ParseError("expected 'agent <i>:' or 'cost <i>:'", lineno)
        kind, i = fields[0], int(fields[1])
        if i >= instance.n:
            raise ParseError(f"agent index {i} out of range", lineno)
        if kind == "agent":
            ids = rest.split()
            if not all(f.isdigit() for f in ids):
                raise ParseError("chore ids must be nonnegative integers", lineno)
            chores = tuple(int(f) for f in ids)
            if any(c >= instance.m for c in chores):
                raise ParseError("chore id out of range", lineno)
            bundles[i] = chores
        elif kind == "cost":
            try:
                costs[i] = parse_rational(rest)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
        else:
            raise ParseError(f"unknown line kind {kind!r}", lineno)
    if set(bundles) != set(range(instance.n)):
        raise ParseError("allocation must list every agent exactly once")
    alloc = Allocation.of([bundles[i] for i in range(instance.n)],
                          agents=range(instance.n))
    for i, declared in costs.items():
        actual = bundle_cost(instance.cost(i), bundles[i])
        if declared != actual:
            raise ParseError(
                f"declared cost {format_rational(declared)} for agent {i} "
                f"differs from actual {format_rational(actual)}")
    return alloc
