"""The Gallager-Humblet-Spira protocol and the Chin-Ting counting variant.

Each process runs the classic fragment protocol: a fragment of level L with
core edge weight F searches for its minimum outgoing edge by broadcasting
Initiate, probing Basic edges with Test, and convergecasting Report toward
the core.  It then connects over that edge: equal levels combine into level
L+1, a lower level is absorbed.  Messages that cannot be answered yet are
parked in a per-process queue and retried after every event.

With ``counting=True`` each Report also carries the number of nodes below it.
When both halves of the core have reported, the core knows the fragment size;
if it has reached ``2^(L+1)`` the level is raised to ``floor(log2 size)`` and
a fresh search starts at the new level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import SpanningTree, WeightedGraph
from .sim import Counters, Halt, Note, Send, Simulation, Trace, Wakeup
from .static import UnionFind

INF = math.inf

SLEEPING, FIND, FOUND = "Sleeping", "Find", "Found"
BASIC, BRANCH, REJECTED = "Basic", "Branch", "Rejected"

MESSAGE_TYPES = ("Connect", "Initiate", "Test", "Accept", "Reject", "Report", "ChangeCore")


class ProtocolError(RuntimeError):
    pass


class GhsNode:
    """Per-process protocol state."""

    def __init__(self, v, incident):
        self.id = v
        self.weight = dict(incident)
        self.order = [eid for eid, _ in incident]  # by increasing weight
        self.edge_state = {eid: BASIC for eid in self.order}
        self.mode = SLEEPING
        self.level = 0
        self.core = None
        self.best_edge = None
        self.best_weight = INF
        self.test_edge = None
        self.in_branch = None
        self.find_count = 0
        self.count = 1
        self.own_count = 0
        self.pending: list = []
        self.halted = False

    def branches(self):
        return [e for e in self.order if self.edge_state[e] == BRANCH]


class Ghs:
    """Protocol object for the simulator; ``counting`` selects Chin-Ting."""

    control_types = ("Halt",)

    def __init__(self, counting: bool = False):
        self.counting = counting

    def initial_state(self, v, incident):
        return GhsNode(v, incident)

    def handle(self, s: GhsNode, event):
        out: list = []
        if isinstance(event, Wakeup):
            if s.mode == SLEEPING:
                self._wakeup(s, out)
        elif event.type == "Halt":
            self._halt(s, event.edge, out)
        else:
            if not self._dispatch(s, event.edge, event.type, event.payload, out):
                s.pending.append((event.edge, event.type, event.payload))
        self._retry(s, out)
        return s, out

    def _retry(self, s, out):
        progress = True
        while progress and s.pending:
            progress = False
            for item in list(s.pending):
                if self._dispatch(s, *item, out):
                    s.pending.remove(item)
                    progress = True
                    break

    # each handler returns False when the message has to wait
    def _dispatch(self, s, edge, kind, payload, out) -> bool:
        if kind == "Connect":
            return self._connect(s, edge, payload[0], out)
        if kind == "Initiate":
            self._initiate(s, edge, *payload, out=out)
            return True
        if kind == "Test":
            return self._test_msg(s, edge, payload[0], payload[1], out)
        if kind == "Accept":
            s.test_edge = None
            if s.weight[edge] < s.best_weight:
                s.best_edge, s.best_weight = edge, s.weight[edge]
            self._report(s, out)
            return True
        if kind == "Reject":
            if s.edge_state[edge] == BASIC:
                s.edge_state[edge] = REJECTED
            self._test(s, out)
            return True
        if kind == "Report":
            return self._report_msg(s, edge, payload, out)
        if kind == "ChangeCore":
            self._change_root(s, out)
            return True
        raise ProtocolError(f"node {s.id}: unknown message {kind}")

    def _wakeup(self, s, out):
        if not s.order:
            s.mode = FOUND
            s.halted = True
            out.append(Halt())
            return
        m = s.order[0]
        s.edge_state[m] = BRANCH
        s.level = 0
        s.mode = FOUND
        s.find_count = 0
        out.append(Note("level", 0))
        out.append(Send(m, "Connect", (0,)))

    def _connect(self, s, j, level, out):
        if s.mode == SLEEPING:
            self._wakeup(s, out)
        if s.edge_state[j] == REJECTED:
            raise ProtocolError(f"node {s.id}: Connect on rejected edge {j}")
        if level < s.level:
            s.edge_state[j] = BRANCH
            out.append(Note("absorb", (j, s.level)))
            out.append(Send(j, "Initiate", (s.level, s.core, s.mode)))
            if s.mode == FIND:
                s.find_count += 1
            return True
        if s.edge_state[j] == BASIC:
            return False
        out.append(Note("combine", (j, s.level + 1)))
        out.append(Send(j, "Initiate", (s.level + 1, s.weight[j], FIND)))
        return True

    def _initiate(self, s, j, level, core, mode, out):
        if level != s.level:
            out.append(Note("level", level))
        s.level, s.core, s.mode = level, core, mode
        s.in_branch = j
        s.best_edge, s.best_weight = None, INF
        s.count = 1
        self._fan_out(s, j, out)

    def _fan_out(self, s, exclude, out):
        for i in s.order:
            if i != exclude and s.edge_state[i] == BRANCH:
                out.append(Send(i, "Initiate", (s.level, s.core, s.mode)))
                if s.mode == FIND:
                    s.find_count += 1
        if s.mode == FIND:
            self._test(s, out)

    def _test(self, s, out):
        for e in s.order:
            if s.edge_state[e] == BASIC:
                s.test_edge = e
                out.append(Send(e, "Test", (s.level, s.core)))
                return
        s.test_edge = None
        self._report(s, out)

    def _test_msg(self, s, j, level, core, out):
        if s.mode == SLEEPING:
            self._wakeup(s, out)
        if level > s.level:
            return False
        if core != s.core:
            out.append(Send(j, "Accept"))
        else:
            if s.edge_state[j] == BASIC:
                s.edge_state[j] = REJECTED
            if s.test_edge != j:
                out.append(Send(j, "Reject"))
            else:
                self._test(s, out)
        return True

    def _report(self, s, out):
        if s.find_count == 0 and s.test_edge is None:
            s.mode = FOUND
            s.own_count = s.count
            payload = (s.best_weight, s.count) if self.counting else (s.best_weight,)
            out.append(Send(s.in_branch, "Report", payload))

    def _report_msg(self, s, j, payload, out):
        w = payload[0]
        if j != s.in_branch:
            s.find_count -= 1
            if self.counting:
                s.count += payload[1]
            if w < s.best_weight:
                s.best_weight, s.best_edge = w, j
            self._report(s, out)
            return True
        if s.mode == FIND:
            return False
        if self.counting:
            size = s.own_count + payload[1]
            if size >= 2 ** (s.level + 1):
                new_level = int(math.floor(math.log2(size)))
                out.append(Note("decision", (s.level, size, True)))
                self._raise(s, new_level, out)
                return True
            out.append(Note("decision", (s.level, size, False)))
        if w > s.best_weight:
            self._change_root(s, out)
        elif w == s.best_weight == INF:
            self._halt(s, None, out)
        return True

    def _raise(self, s, level, out):
        out.append(Note("level", level))
        s.level = level
        s.mode = FIND
        s.best_edge, s.best_weight = None, INF
        s.count = 1
        # the core edge itself is excluded: the other core node raises too
        self._fan_out(s, s.in_branch, out)

    def _change_root(self, s, out):
        b = s.best_edge
        if s.edge_state[b] == BRANCH:
            out.append(Send(b, "ChangeCore"))
        else:
            out.append(Send(b, "Connect", (s.level,)))
            s.edge_state[b] = BRANCH

    def _halt(self, s, via, out):
        if s.halted:
            return
        s.halted = True
        # the core node covers its own half; the other core node does the same
        skip = via if via is not None else s.in_branch
        for e in s.branches():
            if e != skip:
                out.append(Send(e, "Halt"))
        out.append(Halt())


@dataclass
class LevelHistory:
    """What the observer saw: fragments, level changes and core decisions."""

    n: int
    fragments: list = field(default_factory=list)  # (ticks, kind, level, size)
    level_ticks: list = field(default_factory=list)  # per node: {level: first tick}
    decisions: list = field(default_factory=list)  # (ticks, node, level, counted, raised, true size)
    cycles: list = field(default_factory=list)

    @property
    def max_level(self) -> int:
        return max((max(d) for d in self.level_ticks if d), default=0)

    def size_violations(self) -> list:
        return [f for f in self.fragments if f[3] < 2 ** f[2]]

    def reach_times(self) -> dict[int, int]:
        """For each level l, the tick by which every node had level >= l."""
        final = min((max(d) for d in self.level_ticks), default=0)
        out = {}
        for level in range(1, final + 1):
            out[level] = max(min(t for lv, t in d.items() if lv >= level) for d in self.level_ticks)
        return out

    def count_violations(self) -> list:
        """Final (non-raised) core decisions whose counted size breaks 2^L <= size < 2^(L+1)."""
        return [d for d in self.decisions if not d[4] and not (2 ** d[2] <= d[3] < 2 ** (d[2] + 1))]


def observe(sim: Simulation) -> LevelHistory:
    g = sim.graph
    hist = LevelHistory(g.n)
    hist.level_ticks = [dict() for _ in range(g.n)]
    uf = UnionFind(g.n)
    size = [1] * g.n
    joined = set()
    for t, v, note in sim.notes:
        kind = note.kind
        if kind == "level":
            hist.level_ticks[v].setdefault(note.data, t)
        elif kind in ("absorb", "combine"):
            eid, level = note.data
            if eid in joined:
                continue
            joined.add(eid)
            e = g.edges[eid]
            a, b = uf.find(e.u), uf.find(e.v)
            if a == b:
                hist.cycles.append((t, eid))
                continue
            uf.union(a, b)
            r = uf.find(a)
            size[r] = size[a] + size[b]
            if kind == "combine":
                hist.fragments.append((t, "combine", level, size[r]))
        elif kind == "decision":
            level, counted, raised = note.data
            true_size = size[uf.find(v)]
            hist.decisions.append((t, v, level, counted, raised, true_size))
            if raised:
                new_level = int(math.floor(math.log2(counted)))
                hist.fragments.append((t, "raise", new_level, true_size))
    return hist


def branch_edges(sim: Simulation) -> frozenset[str]:
    """Edges marked Branch at both endpoints."""
    marks: dict[str, int] = {}
    for s in sim.states:
        for e, st in s.edge_state.items():
            if st == BRANCH:
                marks[e] = marks.get(e, 0) + 1
    half = [e for e, k in marks.items() if k == 1]
    if half:
        raise ProtocolError(f"edges branch at one end only: {sorted(half)}")
    return frozenset(marks)


def run_protocol(g: WeightedGraph, counting: bool, delay="unit", wakeup=None, max_events: int = 5_000_000):
    sim = Simulation(g, Ghs(counting), max_events)
    counters, trace = sim.run(delay, wakeup)
    stuck = [s.id for s in sim.states if not s.halted]
    if g.n > 1 and stuck:
        raise ProtocolError(f"quiescent with processes {stuck[:8]} not halted")
    tree = SpanningTree(g, branch_edges(sim))
    return tree, counters, observe(sim), trace


def run_ghs(g: WeightedGraph, delay="unit", wakeup=None, max_events: int = 5_000_000):
    """Run GHS to completion; returns (tree, counters, level history, trace)."""
    return run_protocol(g, False, delay, wakeup, max_events)


def run_chin_ting(g: WeightedGraph, delay="unit", wakeup=None, max_events: int = 5_000_000):
    """GHS with node counting and root level increase."""
    return run_protocol(g, True, delay, wakeup, max_events)


def message_bound(n: int, m: int) -> int:
    """2m rejection-related messages plus 5n per level over floor(log2 n)+1 levels."""
    if n <= 1:
        return 2 * m
    return 2 * m + 5 * n * (int(math.floor(math.log2(n))) + 1)


def time_bound(level: int, n: int) -> int:
    """Unit-delay time by which every node has reached ``level``: 5lN - 3N."""
    return 5 * level * n - 3 * n


__all__ = [
    "Counters", "Trace", "Ghs", "GhsNode", "LevelHistory", "ProtocolError", "MESSAGE_TYPES",
    "branch_edges", "message_bound", "observe", "run_chin_ting", "run_ghs", "time_bound",
]
