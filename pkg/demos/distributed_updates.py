"""Distributed cluster formation followed by a few weight changes.

    python3 demos/distributed_updates.py
"""

from dynmst import DistributedDynamicMST, check_conditions, generate_graph, kruskal


def main():
    g = generate_graph("random", 16, 30, 3)
    d = DistributedDynamicMST(g, z=3, delay="seeded:5")
    p = d.partition()
    print(f"formed {len(p.clusters)} clusters on the ternarized tree "
          f"({d.expanded.n} vertices), conditions hold: {bool(check_conditions(p))}")
    print("largest cluster seen during formation:", d.max_cluster_size)
    weights = {e.id: e.weight for e in g}
    tree = sorted(d.tree_edges, key=lambda e: weights[e])
    nontree = sorted(set(g.edges) - d.tree_edges, key=lambda e: weights[e])
    for eid, w in ((tree[-1], 5000.0), (nontree[-1], 0.5), (nontree[0], 4000.0)):
        sent = d.counters.total
        out = d.handle_weight_change(eid, w)
        weights[eid] = w
        ok = d.tree_edges == kruskal(g.with_weights(weights)).edges
        print(f"{eid} -> {w}: {out}, {d.counters.total - sent} messages, matches oracle: {ok}")
    print("messages by type:", dict(sorted(d.counters.by_type.items())))


if __name__ == "__main__":
    main()
