"""Fully-dynamic MST through responsibility sets over non-tree edges.

Every non-tree edge ``j`` carries its cycle set ``C_j`` (tree edges on its
fundamental cycle) and its responsibility set ``N_j``: the tree edges of
``C_j`` not already claimed by a lighter non-tree edge.  The non-tree edges
live in an AVL tree ordered by current weight; each node also keeps ``L`` and
``R``, the union of responsibility sets over its left and right subtrees.

Walking down the index with ``L``/``R`` finds the non-tree edge responsible
for a tree edge, which is its cheapest replacement.  Inserting a node walks
the same path and surrenders ownership: passing a heavier node strips the new
node's cycle from that node (and, lazily, from its right subtree); passing a
lighter node removes what it and its left subtree already own.

Sets are Python ints used as bitmasks over edge positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    SENTINEL,
    DuplicateWeightError,
    GraphError,
    SpanningTree,
    WeightedGraph,
    verify_mst_properties,
)


@dataclass(frozen=True)
class UpdateOutcome:
    swapped: bool = False
    out: str | None = None
    into: str | None = None

    def __repr__(self) -> str:
        if not self.swapped:
            return "UpdateOutcome(unchanged)"
        return f"UpdateOutcome(swapped out={self.out} in={self.into})"


UNCHANGED = UpdateOutcome()


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Node:
    __slots__ = ("key", "eid", "C", "N", "L", "R", "tag", "height", "left", "right")

    def __init__(self, key, eid, C):
        self.key = key
        self.eid = eid
        self.C = C
        self.N = C
        self.L = 0
        self.R = 0
        self.tag = 0
        self.height = 1
        self.left = None
        self.right = None


def _height(n):
    return n.height if n is not None else 0


def _agg(n):
    return (n.N | n.L | n.R) if n is not None else 0


def _remove(n, mask):
    # lazily strip ``mask`` from every responsibility set in n's subtree
    if n is not None:
        inv = ~mask
        n.N &= inv
        n.L &= inv
        n.R &= inv
        n.tag |= mask


def _push(n):
    if n.tag:
        _remove(n.left, n.tag)
        _remove(n.right, n.tag)
        n.tag = 0


def _pull(n):
    left, right = n.left, n.right
    n.L = _agg(left)
    n.R = _agg(right)
    hl, hr = _height(left), _height(right)
    n.height = (hl if hl > hr else hr) + 1


def _rotate_right(y):
    x = y.left
    _push(y)
    _push(x)
    y.left = x.right
    x.right = y
    _pull(y)
    _pull(x)
    return x


def _rotate_left(x):
    y = x.right
    _push(x)
    _push(y)
    x.right = y.left
    y.left = x
    _pull(x)
    _pull(y)
    return y


def _rebalance(n):
    balance = _height(n.left) - _height(n.right)
    if balance > 1:
        if _height(n.left.left) < _height(n.left.right):
            _push(n)
            n.left = _rotate_left(n.left)
        return _rotate_right(n)
    if balance < -1:
        if _height(n.right.right) < _height(n.right.left):
            _push(n)
            n.right = _rotate_right(n.right)
        return _rotate_left(n)
    return n


class ResponsibilityIndex:
    """Dynamic MST state: current weights, tree, and the ordered index."""

    def __init__(self, g: WeightedGraph, tree_edges, weights=None):
        self.graph = g
        self.weight: dict[str, float] = dict(weights) if weights else {e.id: e.weight for e in g}
        self._ids = list(g.edges)
        self._bit = {eid: 1 << i for i, eid in enumerate(self._ids)}
        self._finite: dict[float, str] = {w: eid for eid, w in self.weight.items() if w != SENTINEL}
        self.tree_mask = 0
        for eid in tree_edges:
            self.tree_mask |= self._bit[eid]
        self.root: _Node | None = None
        self._nodes: dict[str, _Node] = {}
        self._graph_cache: WeightedGraph | None = None
        self._decoded: dict[int, frozenset[str]] = {}
        self._tagged = False

    # ------------------------------------------------------------ views

    def key(self, eid: str):
        return (self.weight[eid], eid)

    def ids(self, mask: int) -> frozenset[str]:
        # masks repeat heavily between updates, so decoded sets are memoized
        out = self._decoded.get(mask)
        if out is None:
            ids = self._ids
            out = frozenset(ids[i] for i in _bits(mask))
            if len(self._decoded) >= 4096:
                self._decoded.clear()
            self._decoded[mask] = out
        return out

    def mask(self, eids) -> int:
        m = 0
        for eid in eids:
            m |= self._bit[eid]
        return m

    @property
    def tree_edges(self) -> frozenset[str]:
        return self.ids(self.tree_mask)

    def is_tree_edge(self, eid: str) -> bool:
        return bool(self.tree_mask & self._bit[eid])

    def nontree_edges(self) -> list[str]:
        """Non-tree edges in index (weight) order."""
        return [n.eid for n in self._inorder()]

    def current_graph(self) -> WeightedGraph:
        if self._graph_cache is None:
            self._graph_cache = self.graph.with_weights(self.weight)
        return self._graph_cache

    def spanning_tree(self) -> SpanningTree:
        return SpanningTree(self.current_graph(), self.tree_edges)

    def cycle_set(self, eid: str) -> frozenset[str]:
        return self.ids(self._nodes[eid].C)

    def responsibility_set(self, eid: str) -> frozenset[str]:
        self._settle()
        return self.ids(self._nodes[eid].N)

    @property
    def f_tree(self) -> dict[str, str]:
        """Covering assignment: tree edge -> responsible non-tree edge."""
        self._settle()
        ids = self._ids
        out = {}
        for node in self._nodes.values():
            for i in _bits(node.N):
                out[ids[i]] = node.eid
        return out

    @property
    def f_nontree(self) -> dict[str, str]:
        """Non-tree edge -> heaviest tree edge it is responsible for."""
        self._settle()
        out = {}
        for node in self._nodes.values():
            if node.N:
                out[node.eid] = self._heaviest(node.N)
        return out

    def responsible_for(self, tree_edge: str) -> str | None:
        node = self._find_responsible(self._bit[tree_edge])
        return None if node is None else node.eid

    # ------------------------------------------------------------ updates

    def apply_update(self, eid: str, delta: float) -> UpdateOutcome:
        """Add ``delta`` to the weight of ``eid`` and restore the MST."""
        if eid not in self.weight:
            raise KeyError(eid)
        return self.set_weight(eid, self.weight[eid] + delta)

    def set_weight(self, eid: str, new_weight: float) -> UpdateOutcome:
        if eid not in self.weight:
            raise KeyError(eid)
        old = self.weight[eid]
        if new_weight == old:
            return UNCHANGED
        self._check_distinct(eid, new_weight)
        tree = self.is_tree_edge(eid)
        if tree and new_weight > old:
            return self.increase_tree(eid, new_weight)
        if tree:
            self._set(eid, new_weight)
            return UNCHANGED
        if new_weight > old:
            self._reposition(self._nodes[eid], new_weight)
            return UNCHANGED
        return self.decrease_nontree(eid, new_weight)

    def decrease_nontree(self, eid: str, new_weight: float) -> UpdateOutcome:
        """Lower a non-tree edge; swap it in if it undercuts its cycle maximum.

        The maximum is taken over the whole cycle set, not only the
        responsibility set: an edge of the cycle owned by a lighter non-tree
        edge can still be the one that must leave.
        """
        if self.is_tree_edge(eid):
            raise GraphError(f"{eid!r} is a tree edge")
        self._check_distinct(eid, new_weight)
        node = self._nodes[eid]
        heaviest = self._heaviest(node.C)
        if (new_weight, eid) > self.key(heaviest):
            self._reposition(node, new_weight)
            return UNCHANGED
        self._set(eid, new_weight)
        self._swap(heaviest, eid)
        return UpdateOutcome(True, heaviest, eid)

    def increase_tree(self, eid: str, new_weight: float) -> UpdateOutcome:
        """Raise a tree edge; swap in its responsible edge if that is now lighter."""
        if not self.is_tree_edge(eid):
            raise GraphError(f"{eid!r} is not a tree edge")
        self._check_distinct(eid, new_weight)
        node = self._find_responsible(self._bit[eid])
        self._set(eid, new_weight)
        if node is None or node.key > (new_weight, eid):
            return UNCHANGED
        self._swap(eid, node.eid)
        return UpdateOutcome(True, eid, node.eid)

    def update_after_swap(self, e_r: str, e_c: str) -> None:
        """Repair cycle and responsibility sets once ``e_c`` has replaced ``e_r``.

        Expects the tree mask already swapped while the index still holds
        ``e_c`` and not ``e_r``.  Only cycles through ``e_r`` change, each by
        symmetric difference with ``C_{e_c} + e_c``; ownership is then
        recomputed for the tree edges of that cycle.
        """
        b_r, b_c = self._bit[e_r], self._bit[e_c]
        if self.tree_mask & b_r or not self.tree_mask & b_c:
            raise GraphError("update_after_swap called before the tree swap")
        node_c = self._nodes.pop(e_c)
        C_c = node_c.C
        self.root = self._delete(self.root, node_c.key)
        U = C_c | b_c
        for node in self._nodes.values():
            if node.C & b_r:
                node.C ^= U
        _remove(self.root, C_c)
        self._tagged = True
        self._assign(self.root, (C_c & ~b_r) | b_c, None)
        self._insert_node(_Node(self.key(e_r), e_r, (C_c & ~b_r) | b_c))

    # ------------------------------------------------------------ internals

    def _check_distinct(self, eid, w):
        if w != w:
            raise GraphError("NaN weight")
        if w != SENTINEL:
            other = self._finite.get(w)
            if other is not None and other != eid:
                raise DuplicateWeightError(other, eid, w)

    def _set(self, eid, w):
        old = self.weight[eid]
        if self._finite.get(old) == eid:
            del self._finite[old]
        if w != SENTINEL:
            self._finite[w] = eid
        self.weight[eid] = w
        self._graph_cache = None

    def _heaviest(self, mask):
        ids, weight = self._ids, self.weight
        best = None
        for i in _bits(mask):
            k = (weight[ids[i]], ids[i])
            if best is None or k > best:
                best = k
        return best[1]

    def _swap(self, out, into):
        self.tree_mask = (self.tree_mask & ~self._bit[out]) | self._bit[into]
        self._graph_cache = None
        self.update_after_swap(out, into)

    def _find_responsible(self, bit):
        n = self.root
        while n is not None:
            _push(n)
            if n.L & bit:
                n = n.left
            elif n.N & bit:
                return n
            elif n.R & bit:
                n = n.right
            else:
                return None
        return None

    def _insert_node(self, node):
        node.N = node.C
        node.L = node.R = node.tag = 0
        node.height = 1
        node.left = node.right = None
        self.root = self._insert(self.root, node)
        self._nodes[node.eid] = node

    def _insert(self, n, node):
        if n is None:
            return node
        _push(n)
        if node.key < n.key:
            # node becomes lighter than n and n's right subtree: it takes
            # over every edge of its cycle they currently own
            C = node.C
            n.N &= ~C
            n.R &= ~C
            _remove(n.right, C)
            self._tagged = True
            n.left = self._insert(n.left, node)
        else:
            node.N &= ~(n.L | n.N)
            n.right = self._insert(n.right, node)
        _pull(n)
        return _rebalance(n)

    def _delete(self, n, key):
        if n is None:
            raise KeyError(key)
        _push(n)
        if key < n.key:
            n.left = self._delete(n.left, key)
        elif key > n.key:
            n.right = self._delete(n.right, key)
        else:
            if n.left is None or n.right is None:
                return n.left if n.left is not None else n.right
            right, succ = self._pop_min(n.right)
            succ.left, succ.right = n.left, right
            n = succ
        _pull(n)
        return _rebalance(n)

    def _pop_min(self, n):
        _push(n)
        if n.left is None:
            return n.right, n
        n.left, m = self._pop_min(n.left)
        _pull(n)
        return _rebalance(n), m

    def _assign(self, n, mask, after):
        """Give each edge of ``mask`` to the lightest node (key > after) covering it."""
        if n is None or not mask:
            return mask
        _push(n)
        if after is None or n.key > after:
            mask = self._assign(n.left, mask, after)
            gain = n.C & mask
            if gain:
                n.N |= gain
                mask &= ~gain
        mask = self._assign(n.right, mask, after)
        _pull(n)
        return mask

    def _neighbours(self, key):
        pred = succ = None
        n = self.root
        while n is not None:
            if n.key < key:
                pred = n
                n = n.right
            elif n.key > key:
                succ = n
                n = n.left
            else:
                m = n.left
                while m is not None:
                    pred, m = m, m.right
                m = n.right
                while m is not None:
                    succ, m = m, m.left
                break
        return pred, succ

    def _reposition(self, node, new_weight):
        new_key = (new_weight, node.eid)
        pred, succ = self._neighbours(node.key)
        self._set(node.eid, new_weight)
        if (pred is None or pred.key < new_key) and (succ is None or new_key < succ.key):
            node.key = new_key
            return
        del self._nodes[node.eid]
        self.root = self._delete(self.root, node.key)
        self._assign(self.root, node.N, node.key)
        node.key = new_key
        self._insert_node(node)

    def _settle(self):
        # only lazy tags need flushing; rotations merely move existing ones down
        if not self._tagged:
            return
        self._tagged = False
        stack = [self.root] if self.root is not None else []
        while stack:
            n = stack.pop()
            _push(n)
            if n.left is not None:
                stack.append(n.left)
            if n.right is not None:
                stack.append(n.right)

    def _inorder(self):
        out, stack, n = [], [], self.root
        while stack or n is not None:
            while n is not None:
                stack.append(n)
                n = n.left
            n = stack.pop()
            out.append(n)
            n = n.right
        return out

    # ------------------------------------------------------------ debugging

    def dump(self) -> str:
        """Pre-order listing of the index, one node per line."""
        self._settle()
        lines = []

        def fmt(mask):
            return "[" + ",".join(sorted(self.ids(mask))) + "]"

        def walk(n, depth):
            if n is None:
                return
            lines.append(
                f"{'  ' * depth}{n.eid} w={n.key[0]!r} C={fmt(n.C)} N={fmt(n.N)} L={fmt(n.L)} R={fmt(n.R)}"
            )
            walk(n.left, depth + 1)
            walk(n.right, depth + 1)

        walk(self.root, 0)
        return "\n".join(lines) + ("\n" if lines else "")

    def check_structure(self) -> list[str]:
        """Problems with ordering, balance or the L/R aggregates (empty if none)."""
        self._settle()
        problems = []

        def walk(n):
            if n is None:
                return 0, 0
            hl, al = walk(n.left)
            hr, ar = walk(n.right)
            if n.L != al:
                problems.append(f"{n.eid}: L aggregate stale")
            if n.R != ar:
                problems.append(f"{n.eid}: R aggregate stale")
            if n.height != max(hl, hr) + 1:
                problems.append(f"{n.eid}: height stale")
            if abs(hl - hr) > 1:
                problems.append(f"{n.eid}: unbalanced")
            if n.N & ~n.C:
                problems.append(f"{n.eid}: N not within C")
            if n.key != self.key(n.eid):
                problems.append(f"{n.eid}: key does not match weight")
            return max(hl, hr) + 1, n.N | al | ar

        walk(self.root)
        nodes = self._inorder()
        keys = [n.key for n in nodes]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            problems.append("in-order traversal not strictly increasing")
        if set(self._nodes) != {n.eid for n in nodes}:
            problems.append("node table out of sync with tree")
        return problems


def initialize(g: WeightedGraph, t: SpanningTree, check: bool = True) -> ResponsibilityIndex:
    """Build the index for graph ``g`` and its MST ``t``.

    Non-tree edges are taken in increasing weight order; each takes
    responsibility for the tree edges of its cycle that no lighter non-tree
    edge has claimed.
    """
    if check:
        verdict = verify_mst_properties(g, t)
        if not verdict:
            raise GraphError(f"tree is not the MST: {verdict.message}")
    idx = ResponsibilityIndex(g, t.edges)
    bit = idx._bit
    claimed = 0
    nodes = []
    for e in sorted((e for e in g if e.id not in t.edges), key=lambda e: (e.weight, e.id)):
        C = 0
        for tid in t.path(e.u, e.v):
            C |= bit[tid]
        node = _Node((e.weight, e.id), e.id, C)
        node.N = C & ~claimed
        claimed |= C
        nodes.append(node)
        idx._nodes[e.id] = node

    def build(lo, hi):
        if lo >= hi:
            return None
        mid = (lo + hi) // 2
        n = nodes[mid]
        n.left = build(lo, mid)
        n.right = build(mid + 1, hi)
        _pull(n)
        return n

    idx.root = build(0, len(nodes))
    return idx
