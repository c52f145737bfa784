"""Undirected weighted graphs, spanning trees and the cut/cycle verifiers.

Edges are identified by string ids, vertices by integers ``0..n-1``.  All
finite weights in a graph are pairwise distinct; ordering between edges is
always done on :func:`edge_key`, ``(weight, id)``, so edges that have been
pushed to the :data:`SENTINEL` weight (deleted edges) still compare in a
total, deterministic order.
"""

from __future__ import annotations

import io
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator

SENTINEL = math.inf


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DuplicateWeightError(GraphError):
    def __init__(self, first: str, second: str, weight: float):
        super().__init__(f"edges {first!r} and {second!r} share weight {weight!r}")
        self.ids = (first, second)
        self.weight = weight


class SelfLoopError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, a: int, b: int):
        super().__init__(f"graph is disconnected: vertices {a} and {b} are in different components")
        self.representatives = (a, b)


class NotSpanningError(GraphError):
    pass


@dataclass(frozen=True)
class WeightedEdge:
    id: str
    u: int
    v: int
    weight: float

    def __post_init__(self):
        if self.u == self.v:
            raise SelfLoopError(f"edge {self.id!r} is a self-loop on vertex {self.u}")

    @property
    def key(self) -> tuple[float, str]:
        return (self.weight, self.id)

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


def edge_key(e: WeightedEdge) -> tuple[float, str]:
    return (e.weight, e.id)


class WeightedGraph:
    """An undirected multigraph with distinct finite edge weights.

    Instances are treated as immutable; :meth:`with_weight` returns a copy.
    """

    def __init__(self, n: int, edges: Iterable[WeightedEdge] = (), check: bool = True):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        self.n = n
        self.edges: dict[str, WeightedEdge] = {}
        for e in edges:
            if e.id in self.edges:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise GraphError(f"edge {e.id!r} has an endpoint outside 0..{n - 1}")
            self.edges[e.id] = e
        if check:
            check_distinct_weights(self.edges.values())
        self._adj: dict[int, list[WeightedEdge]] | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.n

    def __contains__(self, eid: str) -> bool:
        return eid in self.edges

    def __getitem__(self, eid: str) -> WeightedEdge:
        return self.edges[eid]

    def __iter__(self) -> Iterator[WeightedEdge]:
        return iter(self.edges.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"

    def weight(self, eid: str) -> float:
        return self.edges[eid].weight

    def key(self, eid: str) -> tuple[float, str]:
        return self.edges[eid].key

    def adjacency(self) -> dict[int, list[WeightedEdge]]:
        if self._adj is None:
            adj: dict[int, list[WeightedEdge]] = {v: [] for v in range(self.n)}
            for e in self.edges.values():
                adj[e.u].append(e)
                adj[e.v].append(e)
            self._adj = adj
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    def max_degree(self) -> int:
        return max((len(es) for es in self.adjacency().values()), default=0)

    def with_weight(self, eid: str, weight: float) -> "WeightedGraph":
        if eid not in self.edges:
            raise KeyError(eid)
        check_weight_change(self, eid, weight)
        edges = dict(self.edges)
        edges[eid] = replace(edges[eid], weight=weight)
        g = WeightedGraph.__new__(WeightedGraph)
        g.n, g.edges, g._adj = self.n, edges, None
        return g

    def with_weights(self, weights: dict[str, float]) -> "WeightedGraph":
        edges = [WeightedEdge(e.id, e.u, e.v, weights[eid]) if eid in weights else e for eid, e in self.edges.items()]
        return WeightedGraph(self.n, edges)

    def is_connected(self) -> bool:
        return len(components(self.n, self.edges.values())) <= 1


def check_distinct_weights(edges: Iterable[WeightedEdge]) -> None:
    seen: dict[float, str] = {}
    for e in edges:
        if math.isinf(e.weight) and e.weight > 0:
            continue
        if e.weight != e.weight:
            raise GraphError(f"edge {e.id!r} has NaN weight")
        if e.weight in seen:
            raise DuplicateWeightError(seen[e.weight], e.id, e.weight)
        seen[e.weight] = e.id


def check_weight_change(g: WeightedGraph, eid: str, weight: float) -> None:
    """Raise if giving ``eid`` the new weight would break distinctness."""
    if weight != weight:
        raise GraphError("NaN weight")
    if weight == SENTINEL:
        return
    for e in g.edges.values():
        if e.id != eid and e.weight == weight:
            raise DuplicateWeightError(e.id, eid, weight)


def components(n: int, edges: Iterable[WeightedEdge]) -> list[list[int]]:
    adj = defaultdict(list)
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


# ---------------------------------------------------------------- edge-list I/O


def load_graph(text: str) -> WeightedGraph:
    """Parse the edge-list format: header ``n m`` then ``u v weight id`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError(1, "empty document")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(lineno, "header must be 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(lineno, "header must hold two integers") from None
    if n < 0 or m < 0:
        raise ParseError(lineno, "negative count in header")
    body = lines[1:]
    if len(body) != m:
        where = body[-1][0] if body else lineno
        raise ParseError(where, f"expected {m} edge lines, found {len(body)}")
    edges: list[WeightedEdge] = []
    ids: set[str] = set()
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != 4:
            raise ParseError(lineno, "edge line must be 'u v weight id'")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise ParseError(lineno, f"malformed edge line {ln!r}") from None
        eid = parts[3]
        if not math.isfinite(w):
            raise ParseError(lineno, f"weight of {eid!r} must be finite")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"vertex out of range 0..{n - 1}")
        if eid in ids:
            raise ParseError(lineno, f"duplicate edge id {eid!r}")
        if u == v:
            raise SelfLoopError(f"line {lineno}: edge {eid!r} is a self-loop on vertex {u}")
        ids.add(eid)
        edges.append(WeightedEdge(eid, u, v, w))
    return WeightedGraph(n, edges)


def save_graph(g: WeightedGraph) -> str:
    out = io.StringIO()
    out.write(f"{g.n} {g.m}\n")
    for eid in sorted(g.edges):
        e = g.edges[eid]
        out.write(f"{e.u} {e.v} {e.weight!r} {e.id}\n")
    return out.getvalue()


# ---------------------------------------------------------------- spanning trees


class SpanningTree:
    """A spanning tree of a graph, held as a set of edge ids.

    The rooted parent index used by path queries is built lazily.
    """

    def __init__(self, g: WeightedGraph, edge_ids: Iterable[str]):
        self.graph = g
        self.edges = frozenset(edge_ids)
        self._parent: list[tuple[int, str | None]] | None = None
        self._depth: list[int] | None = None

    def __contains__(self, eid: str) -> bool:
        return eid in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __eq__(self, other) -> bool:
        if isinstance(other, SpanningTree):
            return self.edges == other.edges
        if isinstance(other, (set, frozenset)):
            return self.edges == other
        return NotImplemented

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"SpanningTree({sorted(self.edges)})"

    def weight(self) -> float:
        return sum(self.graph.edges[e].weight for e in self.edges)

    def validate(self) -> None:
        g = self.graph
        missing = [e for e in self.edges if e not in g.edges]
        if missing:
            raise NotSpanningError(f"unknown edge ids {sorted(missing)}")
        if len(self.edges) != max(g.n - 1, 0):
            raise NotSpanningError(f"expected {g.n - 1} edges, got {len(self.edges)}")
        comps = components(g.n, (g.edges[e] for e in self.edges))
        if len(comps) > 1:
            raise NotSpanningError(f"tree does not span: {len(comps)} components")

    def _index(self):
        if self._parent is None:
            g = self.graph
            adj: dict[int, list[tuple[int, str]]] = defaultdict(list)
            for eid in self.edges:
                e = g.edges[eid]
                adj[e.u].append((e.v, eid))
                adj[e.v].append((e.u, eid))
            parent: list[tuple[int, str | None]] = [(-1, None)] * g.n
            depth = [-1] * g.n
            for root in range(g.n):
                if depth[root] >= 0:
                    continue
                depth[root] = 0
                queue = deque([root])
                while queue:
                    x = queue.popleft()
                    for y, eid in adj[x]:
                        if depth[y] < 0:
                            depth[y] = depth[x] + 1
                            parent[y] = (x, eid)
                            queue.append(y)
            self._parent, self._depth = parent, depth
        return self._parent, self._depth

    def path(self, a: int, b: int) -> list[str]:
        """Edge ids on the tree path between ``a`` and ``b``."""
        parent, depth = self._index()
        left: list[str] = []
        right: list[str] = []
        while depth[a] > depth[b]:
            a, eid = parent[a]
            left.append(eid)
        while depth[b] > depth[a]:
            b, eid = parent[b]
            right.append(eid)
        while a != b:
            a, ea = parent[a]
            b, eb = parent[b]
            if ea is None or eb is None:
                raise NotSpanningError("vertices are not connected by the tree")
            left.append(ea)
            right.append(eb)
        return left + right[::-1]


def fundamental_cycle(g: WeightedGraph, t: SpanningTree, f: str) -> frozenset[str]:
    """Tree edges on the unique cycle that non-tree edge ``f`` closes with ``t``."""
    if f not in g.edges:
        raise KeyError(f)
    if f in t.edges:
        raise GraphError(f"{f!r} is a tree edge")
    e = g.edges[f]
    return frozenset(t.path(e.u, e.v))


@dataclass
class Verdict:
    ok: bool
    message: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_mst_properties(g: WeightedGraph, t: SpanningTree) -> Verdict:
    """Check that every non-tree edge is the heaviest on its fundamental cycle.

    Under distinct weights this is equivalent to ``t`` being the unique MST.
    The witness on failure is ``(non_tree_edge, heavier_tree_edge)``.
    """
    t.validate()
    for f, e in g.edges.items():
        if f in t.edges:
            continue
        path = t.path(e.u, e.v)
        heaviest = max(path, key=g.key)
        if g.key(heaviest) > e.key:
            return Verdict(False, f"{f} is lighter than tree edge {heaviest} on its cycle", (f, heaviest))
    return Verdict(True)


# ---------------------------------------------------------------- degree-3 transformation


@dataclass
class TernaryMapping:
    forward: dict[int, list[int]] = field(default_factory=dict)
    internal_edges: frozenset[str] = frozenset()
    owner: list[int] = field(default_factory=list)

    def contract(self, edge_ids: Iterable[str]) -> frozenset[str]:
        return frozenset(e for e in edge_ids if e not in self.internal_edges)


def ternarize(g: WeightedGraph) -> tuple[WeightedGraph, TernaryMapping]:
    """Expand every vertex of degree > 3 into a chain so the maximum degree is 3.

    A vertex of degree ``d`` becomes ``d - 2`` chain vertices: the first keeps
    the original id, the rest are appended after ``n``.  Chain ends take two
    original edges, inner chain vertices one.  Chain (internal) edges weigh
    ``min_weight - 1 - rank`` so every MST of the result contains all of them.
    """
    adj = g.adjacency()
    finite = [e.weight for e in g if math.isfinite(e.weight)]
    floor = min(finite, default=0.0)
    forward: dict[int, list[int]] = {}
    owner = list(range(g.n))
    relocated: dict[tuple[str, int], int] = {}
    internal: list[WeightedEdge] = []
    next_vertex = g.n
    for v in range(g.n):
        incident = sorted(adj[v], key=lambda e: e.id)
        d = len(incident)
        if d <= 3:
            continue
        chain = [v] + list(range(next_vertex, next_vertex + d - 3))
        next_vertex += d - 3
        owner.extend([v] * (d - 3))
        forward[v] = chain
        slots = [chain[0], chain[0]] + chain[1:-1] + [chain[-1], chain[-1]]
        for e, slot in zip(incident, slots):
            # a parallel edge incident twice to v is impossible (no self-loops)
            relocated[(e.id, v)] = slot
        for i, (a, b) in enumerate(zip(chain, chain[1:])):
            eid = f"~{v}.{i}"
            while eid in g.edges:
                eid = "~" + eid
            internal.append(WeightedEdge(eid, a, b, floor - 1.0 - len(internal)))
    edges = []
    for e in g:
        u = relocated.get((e.id, e.u), e.u)
        w = relocated.get((e.id, e.v), e.v)
        edges.append(e if (u, w) == (e.u, e.v) else WeightedEdge(e.id, u, w, e.weight))
    out = WeightedGraph(next_vertex, edges + internal)
    return out, TernaryMapping(forward, frozenset(e.id for e in internal), owner)
