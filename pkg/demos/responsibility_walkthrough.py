"""Raise one tree edge and watch the responsibility index repair itself.

Path 0-1-2-3-4 with tree weights 1, 2.0, 2.2, 4 and chords 6..12.  Raising
the weight-4 edge to 9 swaps it out for chord 6; the cycle set of chord 7
becomes its old cycle xor (cycle of 6 plus 6 itself).

    python3 demos/responsibility_walkthrough.py
"""

from dynmst import initialize, kruskal, load_graph

GRAPH = """5 10
0 1 1.0 t1
1 2 2.0 t2a
2 3 2.2 t2b
3 4 4.0 t4
1 4 6.0 n6
0 4 7.0 n7
0 2 8.0 n8
2 4 10.0 n10
0 3 11.0 n11
1 3 12.0 n12
"""


def show(idx, title):
    print(f"--- {title}")
    print("tree:", " ".join(sorted(idx.tree_edges)))
    print(idx.dump())


def main():
    g = load_graph(GRAPH)
    idx = initialize(g, kruskal(g))
    show(idx, "initial index (pre-order: key, C = cycle, N = responsibility)")
    before = idx.cycle_set("n7")
    union = idx.cycle_set("n6") | {"n6"}
    out = idx.set_weight("t4", 9.0)
    print(f"raise t4 to 9 -> {out}")
    show(idx, "after the swap")
    print("C(n7) before:", sorted(before))
    print("cycle of n6 plus n6:", sorted(union))
    print("C(n7) after:", sorted(idx.cycle_set("n7")), "= symmetric difference:",
          idx.cycle_set("n7") == before ^ union)


if __name__ == "__main__":
    main()
