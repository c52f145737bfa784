"""Static MST construction: Kruskal over union-find, Prim over an indexed heap."""

from __future__ import annotations

from .graph import DisconnectedGraphError, GraphError, SpanningTree, WeightedGraph


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.count -= 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def kruskal(g: WeightedGraph, trace: list | None = None) -> SpanningTree:
    """The unique MST of ``g``; edges are appended to ``trace`` in addition order."""
    uf = UnionFind(g.n)
    chosen = []
    for e in sorted(g.edges.values(), key=lambda e: (e.weight, e.id)):
        if uf.union(e.u, e.v):
            chosen.append(e.id)
            if trace is not None:
                trace.append(e.id)
            if len(chosen) == g.n - 1:
                break
    if g.n > 1 and len(chosen) != g.n - 1:
        reps = sorted({uf.find(v) for v in range(g.n)})
        raise DisconnectedGraphError(reps[0], reps[1])
    return SpanningTree(g, chosen)


class IndexedHeap:
    """Binary min-heap of items with priorities, supporting decrease-key."""

    def __init__(self):
        self._heap: list = []
        self._pos: dict = {}

    def __len__(self) -> int:
        return len(self._heap)

    def __contains__(self, item) -> bool:
        return item in self._pos

    def priority(self, item):
        return self._heap[self._pos[item]][0]

    def push(self, item, priority) -> None:
        if item in self._pos:
            raise KeyError(f"{item!r} already queued")
        self._heap.append((priority, item))
        self._pos[item] = len(self._heap) - 1
        self._up(len(self._heap) - 1)

    def decrease(self, item, priority) -> None:
        i = self._pos[item]
        if priority > self._heap[i][0]:
            raise ValueError("decrease-key with a larger priority")
        self._heap[i] = (priority, item)
        self._up(i)

    def pop(self):
        heap = self._heap
        top = heap[0]
        last = heap.pop()
        del self._pos[top[1]]
        if heap:
            heap[0] = last
            self._pos[last[1]] = 0
            self._down(0)
        return top[1], top[0]

    def _up(self, i: int) -> None:
        heap, pos = self._heap, self._pos
        entry = heap[i]
        while i > 0:
            p = (i - 1) >> 1
            if heap[p][0] <= entry[0]:
                break
            heap[i] = heap[p]
            pos[heap[i][1]] = i
            i = p
        heap[i] = entry
        pos[entry[1]] = i

    def _down(self, i: int) -> None:
        heap, pos = self._heap, self._pos
        n = len(heap)
        entry = heap[i]
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and heap[c + 1][0] < heap[c][0]:
                c += 1
            if heap[c][0] >= entry[0]:
                break
            heap[i] = heap[c]
            pos[heap[i][1]] = i
            i = c
        heap[i] = entry
        pos[entry[1]] = i


def prim(g: WeightedGraph, start: int = 0, trace: list | None = None) -> SpanningTree:
    """Grow one tree from ``start``, always adding the lightest edge leaving it.

    With a Fibonacci heap this runs in O(m + n log n); the binary heap used
    here gives O(m log n).
    """
    if not 0 <= start < max(g.n, 1):
        raise GraphError(f"start vertex {start} out of range")
    if g.n == 0:
        return SpanningTree(g, ())
    adj = g.adjacency()
    in_tree = [False] * g.n
    best_edge: dict[int, str] = {}
    queue = IndexedHeap()
    queue.push(start, (float("-inf"), ""))
    chosen = []
    while queue:
        v, _ = queue.pop()
        in_tree[v] = True
        if v != start:
            chosen.append(best_edge[v])
            if trace is not None:
                trace.append(best_edge[v])
        for e in adj[v]:
            w = e.other(v)
            if in_tree[w]:
                continue
            k = (e.weight, e.id)
            if w not in queue:
                queue.push(w, k)
                best_edge[w] = e.id
            elif k < queue.priority(w):
                queue.decrease(w, k)
                best_edge[w] = e.id
    if len(chosen) != g.n - 1:
        outside = next(v for v in range(g.n) if not in_tree[v])
        raise DisconnectedGraphError(start, outside)
    return SpanningTree(g, chosen)
