"""Brute-force ground truth for the dynamic structures.

Nothing here is clever on purpose: every answer is recomputed from the
current graph so it can be compared against the incremental structures.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterator

from .graph import GraphError, SpanningTree, WeightedGraph, fundamental_cycle
from .static import kruskal


def recompute_after(g: WeightedGraph, eid: str, new_weight: float) -> SpanningTree:
    """MST of ``g`` after edge ``eid`` takes ``new_weight``."""
    return kruskal(g.with_weight(eid, new_weight))


def tree_sides(g: WeightedGraph, t: SpanningTree, e: str) -> set[int]:
    """Vertices on the ``u`` side of tree edge ``e`` once it is removed."""
    adj = defaultdict(list)
    for tid in t.edges:
        if tid != e:
            te = g.edges[tid]
            adj[te.u].append(te.v)
            adj[te.v].append(te.u)
    start = g.edges[e].u
    side, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in side:
                side.add(y)
                stack.append(y)
    return side


def min_replacement_for_tree_edge(g: WeightedGraph, t: SpanningTree, e: str) -> str | None:
    """Lightest non-tree edge crossing the cut left by deleting tree edge ``e``."""
    if e not in t.edges:
        raise GraphError(f"{e!r} is not a tree edge")
    side = tree_sides(g, t, e)
    best = None
    for f in g.edges.values():
        if f.id in t.edges:
            continue
        if (f.u in side) != (f.v in side):
            if best is None or f.key < best.key:
                best = f
    return None if best is None else best.id


def max_tree_edge_on_cycle(g: WeightedGraph, t: SpanningTree, f: str) -> str:
    """Heaviest tree edge on the fundamental cycle of non-tree edge ``f``."""
    return max(fundamental_cycle(g, t, f), key=g.key)


def swap_distance(a: SpanningTree | frozenset, b: SpanningTree | frozenset) -> int:
    """Number of edge exchanges separating two spanning trees of one graph."""
    ea = a.edges if isinstance(a, SpanningTree) else frozenset(a)
    eb = b.edges if isinstance(b, SpanningTree) else frozenset(b)
    return len(ea - eb)


def spanning_trees(g: WeightedGraph) -> Iterator[frozenset[str]]:
    """Every spanning tree of ``g``, by contraction/deletion on the edge list."""
    if g.n <= 1:
        yield frozenset()
        return
    edges = [(e.u, e.v, e.id) for e in sorted(g.edges.values(), key=lambda e: e.id)]
    yield from _enumerate(g.n, edges, ())


def _enumerate(comps: int, edges: list, chosen: tuple) -> Iterator[frozenset[str]]:
    if comps == 1:
        yield frozenset(chosen)
        return
    if len(edges) < comps - 1:
        return
    a, b, eid = edges[0]
    rest = edges[1:]
    merged = []
    for x, y, i in rest:
        x = a if x == b else x
        y = a if y == b else y
        if x != y:
            merged.append((x, y, i))
    yield from _enumerate(comps - 1, merged, chosen + (eid,))
    if _spans(rest, comps, a):
        yield from _enumerate(comps, rest, chosen)


def _spans(edges: list, comps: int, start: int) -> bool:
    adj = defaultdict(list)
    for x, y, _ in edges:
        adj[x].append(y)
        adj[y].append(x)
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == comps


def brute_force_mst_weight(g: WeightedGraph) -> float:
    """Minimum total weight over every spanning tree (exponential; n <= 8)."""
    w = {e.id: e.weight for e in g}
    best = None
    for tree in spanning_trees(g):
        total = sum(w[e] for e in tree)
        if best is None or total < best:
            best = total
    if best is None:
        raise GraphError("graph has no spanning tree")
    return best


def all_min_replacements(g: WeightedGraph, t: SpanningTree) -> dict[str, str | None]:
    """``min_replacement_for_tree_edge`` for every tree edge at once.

    Roots the tree, numbers vertices in DFS order and tests each non-tree
    edge against each subtree interval: an edge crosses the cut of tree edge
    (parent, child) iff exactly one endpoint lies below the child.
    """
    adj = defaultdict(list)
    for tid in t.edges:
        e = g.edges[tid]
        adj[e.u].append((e.v, tid))
        adj[e.v].append((e.u, tid))
    tin = [0] * g.n
    tout = [0] * g.n
    below: dict[str, int] = {}
    clock = 0
    stack = [(0, None, False)]
    seen = [False] * g.n
    while stack:
        x, via, done = stack.pop()
        if done:
            tout[x] = clock
            continue
        seen[x] = True
        tin[x] = clock
        clock += 1
        if via is not None:
            below[via] = x
        stack.append((x, via, True))
        for y, tid in adj[x]:
            if not seen[y]:
                stack.append((y, tid, False))
    nontree = sorted((e for e in g.edges.values() if e.id not in t.edges), key=lambda e: (e.weight, e.id))
    ends = [(tin[e.u], tin[e.v], e.id) for e in nontree]
    out = {}
    for tid, c in below.items():
        lo, hi = tin[c], tout[c]
        best = None
        for a, b, fid in ends:
            if (lo <= a < hi) != (lo <= b < hi):
                best = fid
                break
        out[tid] = best
    return out
