import math

import pytest

from conftest import triangle
from dynmst.graph import SENTINEL, ParseError
from dynmst.updates import load_script, parse_updates, resolve, with_inserted_edges


def test_parse_all_ops():
    ups = parse_updates("# comment\ninc e0 2\n\ndec e1 0.5  # trailing\ndel e2\nins 0 2 7.5 x\n")
    assert [(u.op, u.eid, u.value, u.line) for u in ups] == [
        ("inc", "e0", 2.0, 2), ("dec", "e1", 0.5, 4), ("del", "e2", None, 5), ("ins", "x", 7.5, 6)]
    assert ups[3].ends == (0, 2)


@pytest.mark.parametrize("text,line", [
    ("inc e0", 1), ("inc e0 -1", 1), ("dec e0 0", 1), ("inc e0 nan", 1), ("\nfoo e0 1", 2),
    ("ins 0 1 inf x", 1), ("ins a 1 2 x", 1), ("del", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_updates(text)
    assert info.value.lineno == line


def test_resolve_absolute_steps():
    g = triangle()
    steps = resolve(g, parse_updates("inc e0 2\ndec e2 0.5\ndel e1"))
    assert steps == [("e0", 3.0), ("e2", 2.5), ("e1", SENTINEL)]


def test_insert_starts_at_sentinel():
    g, steps = load_script(triangle(), "del e1\nins 1 2 4.0 e1\nins 0 1 9.0 x")
    assert steps == [("e1", SENTINEL), ("e1", 4.0), ("x", 9.0)]
    assert g.edges["x"].weight == SENTINEL and (g.edges["x"].u, g.edges["x"].v) == (0, 1)
    assert g.m == 4


@pytest.mark.parametrize("text,msg", [
    ("inc nope 1", "unknown edge"),
    ("ins 0 1 5 e0", "already present"),
    ("del e0\ninc e0 1", "is deleted"),
    ("del e0\nins 1 2 5 e0", "joins 0-1"),
    ("ins 0 0 5 x", "bad endpoints"),
    ("ins 0 9 5 x", "bad endpoints"),
    ("ins 0 1 5 x\nins 1 2 6 x", "different endpoints"),
])
def test_resolve_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        load_script(triangle(), text)


def test_no_inserts_keeps_graph():
    g = triangle()
    assert with_inserted_edges(g, parse_updates("inc e0 1")) is g
    assert math.isinf(SENTINEL)
