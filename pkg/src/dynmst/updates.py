"""Line-oriented update scripts.

    inc <edge-id> <delta>      raise a weight by delta > 0
    dec <edge-id> <delta>      lower a weight by delta > 0
    del <edge-id>              delete: the weight becomes the sentinel
    ins <u> <v> <w> <edge-id>  insert: the edge is present from the start at
                               the sentinel weight and drops to w here

Blank lines and ``#`` comments are ignored.  Resolution turns a script into
absolute ``(edge id, new weight)`` steps against a graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import SENTINEL, ParseError, WeightedEdge, WeightedGraph


@dataclass(frozen=True)
class Update:
    op: str
    eid: str
    value: float | None = None
    ends: tuple[int, int] | None = None
    line: int = 0


def parse_updates(text: str) -> list[Update]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].split()
        if not ln:
            continue
        op, args = ln[0], ln[1:]
        try:
            if op in ("inc", "dec") and len(args) == 2:
                delta = float(args[1])
                if not (math.isfinite(delta) and delta > 0):
                    raise ParseError(lineno, f"delta must be a positive number, got {args[1]!r}")
                out.append(Update(op, args[0], delta, line=lineno))
            elif op == "del" and len(args) == 1:
                out.append(Update(op, args[0], line=lineno))
            elif op == "ins" and len(args) == 4:
                w = float(args[2])
                if not math.isfinite(w):
                    raise ParseError(lineno, "inserted weight must be finite")
                out.append(Update(op, args[3], w, (int(args[0]), int(args[1])), lineno))
            else:
                raise ParseError(lineno, f"cannot parse update {raw.strip()!r}")
        except ValueError:
            raise ParseError(lineno, f"malformed number in {raw.strip()!r}") from None
    return out


def with_inserted_edges(g: WeightedGraph, updates: list[Update]) -> WeightedGraph:
    """Add every edge first seen in an ``ins`` line, at the sentinel weight."""
    extra = {}
    for u in updates:
        if u.op != "ins" or u.eid in g.edges:
            continue
        a, b = u.ends
        if not (0 <= a < g.n and 0 <= b < g.n) or a == b:
            raise ParseError(u.line, f"bad endpoints {a} {b} for {u.eid!r}")
        if u.eid in extra and extra[u.eid].ends != u.ends:
            raise ParseError(u.line, f"{u.eid!r} inserted with different endpoints")
        extra.setdefault(u.eid, u)
    if not extra:
        return g
    edges = list(g) + [WeightedEdge(eid, *u.ends, SENTINEL) for eid, u in extra.items()]
    return WeightedGraph(g.n, edges)


def resolve(g: WeightedGraph, updates: list[Update]) -> list[tuple[str, float]]:
    """Absolute weight steps, checked against the evolving weights of ``g``."""
    weight = {e.id: e.weight for e in g}
    steps = []
    for u in updates:
        if u.eid not in weight:
            raise ParseError(u.line, f"unknown edge {u.eid!r}")
        w = weight[u.eid]
        if u.op == "ins":
            e = g.edges[u.eid]
            if {e.u, e.v} != set(u.ends):
                raise ParseError(u.line, f"{u.eid!r} joins {e.u}-{e.v}, not {u.ends[0]}-{u.ends[1]}")
            if w != SENTINEL:
                raise ParseError(u.line, f"{u.eid!r} is already present")
            new = u.value
        elif w == SENTINEL:
            raise ParseError(u.line, f"{u.eid!r} is deleted")
        elif u.op == "del":
            new = SENTINEL
        elif u.op == "inc":
            new = w + u.value
        else:
            new = w - u.value
        weight[u.eid] = new
        steps.append((u.eid, new))
    return steps


def load_script(g: WeightedGraph, text: str) -> tuple[WeightedGraph, list[tuple[str, float]]]:
    """Parse a script, extend ``g`` with inserted edges and resolve the steps."""
    updates = parse_updates(text)
    g = with_inserted_edges(g, updates)
    return g, resolve(g, updates)
