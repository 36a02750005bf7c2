from fractions import Fraction as F

import pytest

from choremms.core import Allocation, Instance
from choremms.errors import ParseError
from choremms.io import (format_allocation, format_instance, parse_allocation,
                         parse_instance)

INST = Instance.from_rows([[F(1, 2), 3], [2, F(5, 3)]])


def test_instance_roundtrip():
    assert parse_instance(format_instance(INST)) == INST


def test_instance_comments_and_blank_lines():
    text = "# generated\nmms-instance 1\n\nagents 1\nchores 2\n# row\n1/2 3\n"
    assert parse_instance(text) == Instance.from_rows([[F(1, 2), 3]])


@pytest.mark.parametrize("text,line", [
    ("mms-instance 2\nagents 1\nchores 1\n1\n", 1),
    ("mms-instance 1\nagents 1\nchores 2\n1\n", 4),
    ("mms-instance 1\nagents 1\nchores 1\n0\n", 4),
    ("mms-instance 1\nagents 1\nchores 1\n1.5\n", 4),
])
def test_instance_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_instance(text)
    assert f"line {line}" in str(exc.value)


def test_allocation_roundtrip():
    alloc = Allocation.of([(1,), (0,)], agents=(0, 1))
    text = format_allocation(alloc, INST)
    parsed = parse_allocation(text, INST)
    assert parsed.bundles == ((1,), (0,))


def test_allocation_format_lists_costs():
    alloc = Allocation.of([(0, 1), ()], agents=(0, 1))
    text = format_allocation(alloc, INST)
    assert "agent 0: 0 1" in text
    assert "cost 0: 7/2" in text
    assert "cost 1: 0" in text


def test_allocation_rejects_wrong_cost():
    text = "agent 0: 0\nagent 1: 1\ncost 0: 1\ncost 1: 5/3\n"
    with pytest.raises(ParseError):
        parse_allocation(text, INST)


def test_allocation_rejects_bad_ids():
    with pytest.raises(ParseError):
        parse_allocation("agent 0: 5\nagent 1:\n", INST)
    with pytest.raises(ParseError):
        parse_allocation("agent 0: 0\n", INST)
