import pytest

from conftest import random_updates, triangle
from dynmst.distdyn import MESSAGE_TYPES, DistributedDynamicMST, form_clusters
from dynmst.generators import bounded_degree_graph, path_graph, random_graph
from dynmst.graph import SENTINEL, DuplicateWeightError, GraphError
from dynmst.sim import SimulationError
from dynmst.static import kruskal
from dynmst.topology import build_partition, check_conditions, check_pair_minima


def relabel_free(p):
    return sorted(sorted(c) for c in p.clusters)


def test_z_at_least_n_gives_one_cluster():
    g = random_graph(10, 20, 1)
    p = form_clusters(g, 10 ** 6)
    assert len(p.clusters) == 1 and check_conditions(p)


def test_z_one_gives_singletons():
    g = random_graph(10, 20, 1)
    d = DistributedDynamicMST(g, 1)
    assert all(len(c) == 1 for c in d.partition().clusters)
    # no request can fit, so none is ever sent
    assert d.counters.by_type["JoinReq"] == 0 and d.counters.by_type["Accept"] == 0


def test_path6_matches_sequential_partition():
    g = path_graph(6, None, 0)
    p = form_clusters(g, 2)
    assert relabel_free(p) == relabel_free(build_partition(g, kruskal(g).edges, 2))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("z", [2, 3, 5])
def test_formation_conditions_and_cap(seed, z):
    g = random_graph(24, 60, seed)
    delay = "unit" if seed % 2 else f"seeded:{seed}"
    d = DistributedDynamicMST(g, z, delay)
    assert check_conditions(d.partition())
    assert d.max_cluster_size <= z
    # the cap read directly off the trace of join notes
    assert all(note.data[2] <= z for _, _, note in d.sim.notes if note.kind == "join")
    assert d.tree_edges == kruskal(g).edges


def test_initial_tree_from_ghs():
    g = random_graph(20, 50, 4)
    d = DistributedDynamicMST(g, 4, "seeded:2", initial="ghs")
    assert d.tree_edges == kruskal(g).edges and check_conditions(d.partition())
    with pytest.raises(GraphError):
        DistributedDynamicMST(g, 4, initial="prim")
    with pytest.raises(GraphError):
        DistributedDynamicMST(g, 0)


def test_nontree_increase_is_noop():
    d = DistributedDynamicMST(triangle(), 2)
    sent = d.counters.total
    out = d.handle_weight_change("e2", 9.0)
    assert not out.swapped and d.tree_edges == {"e0", "e1"}
    cmds = {tuple(r["payload"]) for r in d.sim.trace if r["type"] == "SwapCmd"}
    assert cmds == {("noop",)} and d.counters.total > sent


def test_triangle_swap():
    d = DistributedDynamicMST(triangle(), 2)
    out = d.handle_weight_change("e1", 20.0)
    assert out.swapped and (out.out, out.into) == ("e1", "e2")
    assert d.tree_edges == {"e0", "e2"}
    assert check_conditions(d.partition()) and not d.overlay_problems


def test_delete_and_reinsert_bridge_candidate():
    d = DistributedDynamicMST(triangle(), 1)
    d.handle_weight_change("e0", SENTINEL)
    assert d.tree_edges == {"e1", "e2"}
    d.handle_weight_change("e0", 0.5)
    assert d.tree_edges == {"e0", "e1"}


def test_duplicate_weight_rejected():
    d = DistributedDynamicMST(triangle(), 2)
    with pytest.raises(DuplicateWeightError):
        d.handle_weight_change("e2", 1.0)


def test_message_types_cover_trace():
    g = bounded_degree_graph(16, 22, 3)
    d = DistributedDynamicMST(g, 3)
    for eid, w in random_updates(g, 10, 3):
        d.handle_weight_change(eid, w)
    used = set(d.counters.by_type)
    assert used <= set(MESSAGE_TYPES)
    assert {"SizeReport", "DegreeReport", "MinReport", "SwapCmd"} <= used


@pytest.mark.parametrize("seed", range(5))
def test_update_sequences_match_oracle(seed):
    g = random_graph(20, 44, seed)
    d = DistributedDynamicMST(g, 4, f"seeded:{seed}" if seed % 2 else "unit")
    weights = {e.id: e.weight for e in g}
    for eid, w in random_updates(g, 25, seed):
        d.handle_weight_change(eid, w)
        weights[eid] = w
        assert d.tree_edges == kruskal(g.with_weights(weights)).edges
        assert check_conditions(d.partition())
        assert d.max_cluster_size <= 4 and not d.overlay_problems


def test_overlay_checked_after_each_collection():
    g = random_graph(16, 40, 7)
    d = DistributedDynamicMST(g, 3)
    for eid, w in random_updates(g, 15, 7):
        d.handle_weight_change(eid, w)
    assert d.protocol.collections > 0 and not d.overlay_problems
    # the final mirror agrees with minima recomputed from the live weights
    tree = d.expanded_tree()
    assert set(d.protocol.mirror.tree_edges) == set(tree)
    assert not check_pair_minima(d.protocol.mirror, d.weights)


def test_stale_overlay_detected():
    g = path_graph(8, 12, 2)
    d = DistributedDynamicMST(g, 2)
    tree = kruskal(g).edges
    f = min((e for e in g if e.id not in tree), key=lambda e: e.weight)
    # corrupt one process so its cluster is no longer connected
    d.sim.states[0].leader = max(d.leaders())
    with pytest.raises(SimulationError, match="stale overlay"):
        d.handle_weight_change(f.id, 0.001)
