import pytest
from hypothesis import given, settings, strategies as st

from conftest import graph_from, triangle, two_nodes
from dynmst.generators import path_graph, random_graph
from dynmst.graph import DisconnectedGraphError, GraphError, verify_mst_properties
from dynmst.oracle import brute_force_mst_weight
from dynmst.static import IndexedHeap, UnionFind, kruskal, prim


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 1) and uf.union(3, 4)
    assert not uf.union(1, 0)
    assert uf.count == 3
    assert uf.find(1) == uf.find(uf.find(0))
    assert uf.connected(3, 4) and not uf.connected(0, 4)
    assert uf.union(1, 4) and uf.count == 2


def test_indexed_heap_decrease_key():
    h = IndexedHeap()
    for item, p in [("a", 5), ("b", 3), ("c", 9)]:
        h.push(item, p)
    h.decrease("c", 1)
    assert [h.pop()[0] for _ in range(3)] == ["c", "b", "a"]


def test_triangle():
    g = triangle()
    assert kruskal(g).edges == {"e0", "e1"}
    for s in range(3):
        assert prim(g, s).edges == {"e0", "e1"}


def test_two_nodes_and_path():
    assert prim(two_nodes(), 1).edges == {"e0"}
    g = path_graph(7, None, 2)
    assert kruskal(g).edges == set(g.edges)


def test_disconnected_reports_two_components():
    g = graph_from(4, [("a", 0, 1, 1.0), ("b", 2, 3, 2.0)])
    with pytest.raises(DisconnectedGraphError):
        kruskal(g)
    with pytest.raises(DisconnectedGraphError):
        prim(g, 0)


def test_prim_start_out_of_range():
    with pytest.raises(GraphError):
        prim(triangle(), 3)


@pytest.mark.parametrize("seed", range(6))
def test_kruskal_matches_enumeration(seed):
    g = random_graph(8, 16, seed)
    t = kruskal(g)
    assert abs(t.weight() - brute_force_mst_weight(g)) < 1e-9
    assert verify_mst_properties(g, t)


@pytest.mark.parametrize("seed", range(20))
def test_prim_equals_kruskal_from_every_start(seed):
    g = random_graph(16, 40, seed)
    k = kruskal(g).edges
    assert all(prim(g, s).edges == k for s in range(g.n))


def _is_cut_minimum(g, chosen_before, eid):
    """eid is the lightest edge leaving the component of one of its endpoints."""
    uf = UnionFind(g.n)
    for x in chosen_before:
        e = g.edges[x]
        uf.union(e.u, e.v)
    e = g.edges[eid]
    for side in (e.u, e.v):
        root = uf.find(side)
        leaving = [f for f in g if (uf.find(f.u) == root) != (uf.find(f.v) == root)]
        if min(leaving, key=lambda f: (f.weight, f.id)).id == eid:
            return True
    return False


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 14), st.integers(0, 10**6))
def test_every_added_edge_is_a_cut_minimum(n, seed):
    g = random_graph(n, min(3 * n, n * (n - 1) // 2), seed)
    for algo in (kruskal, prim):
        order = []
        algo(g, trace=order)
        for i, eid in enumerate(order):
            assert _is_cut_minimum(g, order[:i], eid)
