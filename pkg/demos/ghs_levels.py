"""GHS and its node-counting variant on small graphs.

Prints message counts, completion time and the level history, then shows
the counting variant raising a fragment's level after absorptions.

    python3 demos/ghs_levels.py
"""

from dynmst import generate_graph, kruskal, load_graph, message_bound, run_chin_ting, run_ghs


def describe(name, g, run, delay="unit", wakeup=None):
    tree, counters, history, _ = run(g, delay, wakeup)
    print(f"{name}: n={g.n} m={g.m} delay={delay}")
    print(f"  tree matches kruskal: {tree.edges == kruskal(g).edges}")
    print(f"  messages {counters.total} (bound {message_bound(g.n, g.m)}), control {dict(counters.control)}")
    print(f"  by type {dict(sorted(counters.by_type.items()))}")
    print(f"  completion time {counters.completion_time}, max level {history.max_level}")
    for t, node, level, counted, raised, size in history.decisions:
        print(f"  core {node} at t={t / 1024:g}: level {level}, counted {counted}, "
              f"{'raises' if raised else 'searches on'}")


def main():
    describe("random graph, GHS", generate_graph("random", 24, 60, 1), run_ghs, "seeded:2", range(24))
    star = load_graph("4 3\n0 1 3.0 a\n0 2 2.0 b\n0 3 1.0 c\n")
    describe("star, GHS", star, run_ghs, wakeup=[0])
    describe("star, counting variant", star, run_chin_ting, wakeup=[0])


if __name__ == "__main__":
    main()
