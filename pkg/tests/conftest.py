import random

import pytest

from dynmst.graph import WeightedEdge, WeightedGraph, load_graph


def triangle():
    return load_graph("3 3\n0 1 1.0 e0\n1 2 2.0 e1\n0 2 3.0 e2\n")


def two_nodes():
    return load_graph("2 1\n0 1 1.0 e0\n")


def graph_from(n, triples):
    """Graph from (id, u, v, weight) tuples."""
    return WeightedGraph(n, [WeightedEdge(eid, u, v, w) for eid, u, v, w in triples])


def fresh_weight(rng: random.Random, used) -> float:
    while True:
        w = round(rng.uniform(1.0, 1000.0), 4)
        if w not in used:
            return w


def random_updates(g: WeightedGraph, count: int, seed: int):
    """Seeded (edge id, new weight) pairs keeping weights distinct."""
    rng = random.Random(seed)
    weights = {e.id: e.weight for e in g}
    ids = sorted(weights)
    out = []
    for _ in range(count):
        eid = rng.choice(ids)
        w = fresh_weight(rng, set(weights.values()))
        weights[eid] = w
        out.append((eid, w))
    return out


@pytest.fixture
def tri():
    return triangle()


def index_problems(idx) -> list[str]:
    """Compare a responsibility index against from-scratch recomputation.

    (a) tree equals Kruskal, (b) every cycle set equals the fundamental cycle,
    (c) the covering map equals the minimum replacements, (d) the
    responsibility sets partition the covered tree edges.  The recomputation
    works on plain tuples and shares no code with the index.
    """
    problems = list(idx.check_structure())
    g = idx.graph
    ends = {eid: (e.u, e.v) for eid, e in g.edges.items()}
    order = sorted(ends, key=lambda eid: (idx.weight[eid], eid))
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for eid in order:
        u, v = ends[eid]
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            tree.add(eid)
    if idx.tree_edges != tree:
        problems.append(f"(a) tree differs in {sorted(idx.tree_edges ^ tree)}")
        return problems

    adj = {v: [] for v in range(g.n)}
    for eid in tree:
        u, v = ends[eid]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    up, depth = {0: (None, None)}, {0: 0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y, eid in adj[x]:
            if y not in depth:
                up[y], depth[y] = (x, eid), depth[x] + 1
                stack.append(y)

    def cycle(u, v):
        out = set()
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            u, eid = up[u]
            out.add(eid)
        return frozenset(out)

    nontree = idx.nontree_edges()
    if set(nontree) != set(ends) - tree:
        problems.append("(b) index does not hold exactly the non-tree edges")
        return problems
    want = {}
    for f in (e for e in order if e not in tree):
        c = cycle(*ends[f])
        if idx.cycle_set(f) != c:
            problems.append(f"(b) cycle set of {f}")
        for e in c:
            want.setdefault(e, f)  # order is by key, so the first claim is the minimum
    if idx.f_tree != want:
        problems.append("(c) covering map differs from the minimum replacements")
    seen = set()
    for f in nontree:
        n = idx.responsibility_set(f)
        if n & seen:
            problems.append(f"(d) {f} shares responsibility")
        seen |= n
    if seen != set(want):
        problems.append("(d) responsibility sets do not cover exactly the covered tree edges")
    return problems
