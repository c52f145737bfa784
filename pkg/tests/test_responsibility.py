from pathlib import Path

import pytest

from conftest import graph_from, index_problems, random_updates, triangle
from dynmst.generators import path_graph, random_graph
from dynmst.graph import SENTINEL, DuplicateWeightError, GraphError, SpanningTree
from dynmst.oracle import recompute_after
from dynmst.responsibility import UNCHANGED, UpdateOutcome, initialize
from dynmst.static import kruskal

GOLDEN = Path(__file__).parent / "golden"


def worked_example():
    """Path a-b-c-d-e (vertices 0..4): tree weights 1, 2.0, 2.2, 4; chords 6..12.

    Edges are told apart by id, so the two "2" edges are t2a and t2b.
    """
    return graph_from(5, [
        ("t1", 0, 1, 1.0), ("t2a", 1, 2, 2.0), ("t2b", 2, 3, 2.2), ("t4", 3, 4, 4.0),
        ("n6", 1, 4, 6.0), ("n7", 0, 4, 7.0), ("n8", 0, 2, 8.0),
        ("n10", 2, 4, 10.0), ("n11", 0, 3, 11.0), ("n12", 1, 3, 12.0),
    ])


def fresh(g):
    return initialize(g, kruskal(g))


def test_path_graph_gives_empty_index():
    idx = fresh(path_graph(6, None, 1))
    assert idx.nontree_edges() == [] and idx.f_tree == {} and idx.dump() == ""


def test_triangle_initialize():
    idx = fresh(triangle())
    assert idx.cycle_set("e2") == {"e0", "e1"}
    assert idx.responsibility_set("e2") == {"e0", "e1"}
    assert idx.f_tree == {"e0": "e2", "e1": "e2"}
    assert idx.f_nontree == {"e2": "e1"}


def test_initialize_rejects_non_mst():
    g = triangle()
    with pytest.raises(GraphError):
        initialize(g, SpanningTree(g, {"e0", "e2"}))


def test_tree_decrease_and_nontree_increase_leave_tree_alone():
    idx = fresh(triangle())
    assert idx.apply_update("e1", -0.5) == UNCHANGED
    assert idx.apply_update("e2", 10.0) == UNCHANGED
    assert idx.tree_edges == {"e0", "e1"} and not index_problems(idx)


def test_nontree_decrease_cases():
    idx = fresh(triangle())
    assert idx.decrease_nontree("e2", 2.5) == UNCHANGED
    idx = fresh(triangle())
    assert idx.decrease_nontree("e2", 1.5) == UpdateOutcome(True, "e1", "e2")
    assert idx.tree_edges == {"e0", "e2"} == recompute_after(triangle(), "e2", 1.5).edges
    assert not index_problems(idx)
    with pytest.raises(GraphError):
        idx.decrease_nontree("e0", 0.5)


def test_increase_on_bridge_never_swaps():
    g = graph_from(4, [("a", 0, 1, 1.0), ("b", 1, 2, 2.0), ("c", 0, 2, 3.0), ("bridge", 2, 3, 4.0)])
    idx = fresh(g)
    assert "bridge" not in idx.f_tree
    assert idx.increase_tree("bridge", SENTINEL) == UNCHANGED
    assert idx.tree_edges == kruskal(g).edges
    with pytest.raises(GraphError):
        idx.increase_tree("c", 10.0)


def test_max_over_whole_cycle_not_only_responsibility():
    # n1 owns the shared edge s, so n2's responsibility set is {t2} alone;
    # lowering n2 below s must still swap s out.
    g = graph_from(4, [
        ("t1", 0, 1, 1.0), ("s", 1, 2, 5.0), ("t2", 2, 3, 2.0),
        ("n1", 0, 2, 6.0), ("n2", 1, 3, 7.0),
    ])
    idx = fresh(g)
    assert idx.responsibility_set("n2") == {"t2"}
    out = idx.set_weight("n2", 4.0)
    assert out == UpdateOutcome(True, "s", "n2")
    assert idx.tree_edges == recompute_after(g, "n2", 4.0).edges
    assert not index_problems(idx)


def test_worked_example_swap_and_sets():
    g = worked_example()
    idx = fresh(g)
    assert idx.responsibility_set("n6") == {"t2a", "t2b", "t4"}
    assert idx.f_tree["t4"] == "n6"
    assert idx.cycle_set("n7") == {"t1", "t2a", "t2b", "t4"}
    out = idx.set_weight("t4", 9.0)
    assert out == UpdateOutcome(True, "t4", "n6")
    # the replaced edge is now an ordinary non-tree edge closing d-c-b-e
    assert idx.cycle_set("t4") == {"t2a", "t2b", "n6"}
    assert idx.cycle_set("n7") == {"t1", "n6"}
    assert idx.cycle_set("n10") == {"t2a", "n6"}
    assert idx.cycle_set("n8") == {"t1", "t2a"}
    assert idx.responsibility_set("n7") == {"t1", "n6"}
    assert idx.responsibility_set("n8") == {"t2a"}
    assert idx.responsibility_set("t4") == {"t2b"}
    assert "n6" not in idx.nontree_edges()
    assert not index_problems(idx)


def test_worked_example_dump_golden():
    g = worked_example()
    idx = fresh(g)
    assert idx.dump() == (GOLDEN / "worked_example_before.txt").read_text()
    idx.set_weight("t4", 9.0)
    assert idx.dump() == (GOLDEN / "worked_example_after.txt").read_text()


def test_symmetric_difference_identity():
    g = worked_example()
    idx = fresh(g)
    C_n7 = idx.cycle_set("n7")
    U = idx.cycle_set("n6") | {"n6"}
    weights = lambda s: sorted(g.edges[e].weight for e in s)
    assert weights(C_n7) == [1.0, 2.0, 2.2, 4.0]
    assert weights(U) == [2.0, 2.2, 4.0, 6.0]
    assert C_n7 ^ U == {"t1", "n6"}
    idx.set_weight("t4", 9.0)
    assert idx.cycle_set("n7") == C_n7 ^ U


def test_swap_changes_only_cycles_through_the_removed_edge():
    g = worked_example()
    idx = fresh(g)
    before = {f: idx.cycle_set(f) for f in idx.nontree_edges()}
    idx.set_weight("t4", 9.0)
    for f, c in before.items():
        if f != "n6" and "t4" not in c:
            assert idx.cycle_set(f) == c


def test_update_after_swap_order_guard():
    idx = fresh(triangle())
    with pytest.raises(GraphError):
        idx.update_after_swap("e1", "e2")


def test_duplicate_weight_and_unknown_edge():
    idx = fresh(triangle())
    with pytest.raises(DuplicateWeightError):
        idx.set_weight("e2", 1.0)
    with pytest.raises(KeyError):
        idx.set_weight("zz", 1.0)


def test_sentinel_delete_and_reinsert():
    g = random_graph(10, 20, 3)
    idx = fresh(g)
    weights = {e.id: e.weight for e in g}
    for eid in sorted(kruskal(g).edges)[:4]:
        idx.set_weight(eid, SENTINEL)
        weights[eid] = SENTINEL
        assert idx.tree_edges == kruskal(g.with_weights(weights)).edges
        assert not index_problems(idx)
    for i, eid in enumerate(sorted(weights)):
        if weights[eid] == SENTINEL:
            weights[eid] = 0.5 + i * 1e-3
            idx.set_weight(eid, weights[eid])
            assert not index_problems(idx)


@pytest.mark.parametrize("seed", range(12))
def test_random_sequences_match_oracle(seed):
    g = random_graph(12, 28, seed)
    idx = fresh(g)
    for step, (eid, w) in enumerate(random_updates(g, 120, seed)):
        idx.set_weight(eid, w)
        assert not index_problems(idx), (seed, step)


def test_in_order_is_strictly_increasing():
    g = random_graph(12, 40, 5)
    idx = fresh(g)
    for eid, w in random_updates(g, 200, 5):
        idx.set_weight(eid, w)
    keys = [idx.key(f) for f in idx.nontree_edges()]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
