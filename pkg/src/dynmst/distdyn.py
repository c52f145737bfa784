"""Distributed dynamic MST over clusters of the spanning tree.

Processes run on the ternarized graph and only ever explore tree edges while
forming clusters.  A cluster is a subtree with a leader; growth happens in
rounds started by the harness, each run until the network is quiet:

* join rounds: every participating cluster counts itself (size and external
  degree, summed by parents on the way up), learns the size and degree of
  each neighbouring cluster, and asks to join the greatest compatible one by
  (size, leader).  The target's leader accepts requests one at a time while
  the combined size stays within ``z`` (and, in "valid" rounds, the union's
  external degree stays at most 2).  A cluster that is itself joining
  rejects every request, so no cluster can grow past the cap.
* degree rounds: clusters report size and degree; a leader whose cluster
  has degree 3 with more than one vertex (or degree above 3) splits it at
  the edge that best balances the two halves.

Questions addressed to another cluster (its size, a join request) travel up
to that cluster's leader and the answer retraces the same path.

Weight changes are reported to a coordinator, the lowest-id core node (or
vertex 0 when the tree is supplied).  It keeps a topology hierarchy fed with
the distributed clusters and the per-pair minima gathered by a MinReport
convergecast, decides between a swap and a no-op, and broadcasts SwapCmd.
"""

from __future__ import annotations

from collections import defaultdict

from .graph import SENTINEL, DuplicateWeightError, GraphError, WeightedGraph, ternarize
from .responsibility import UNCHANGED, UpdateOutcome
from .sim import Note, Send, Simulation, SimulationError, Wakeup, parse_delay
from .static import kruskal
from .topology import RestrictedPartition, TopologyHierarchy, check_pair_minima

MESSAGE_TYPES = (
    "Orient", "Probe", "SizeReport", "DegreeReport", "Info", "Test", "TestReply", "CandReport",
    "JoinCmd", "Connect", "Accept", "Reject", "Ask", "Tell", "JoinReq", "JoinAck", "NewLeader",
    "SplitCmd", "Detach", "ChangeReport", "SwapCmd", "Collect", "Hello", "MinReport",
)


class DynNode:
    def __init__(self, v, incident, tree):
        self.id = v
        self.weight = dict(incident)
        self.edges = [eid for eid, _ in incident]
        self.tree = {eid for eid in self.edges if eid in tree}
        self.limbo: set[str] = set()
        # cluster structure
        self.leader = v
        self.cparent = None
        self.cchildren: set[str] = set()
        # routing tree toward the coordinator
        self.rparent = None
        self.rchildren: set[str] = set()
        # round bookkeeping
        self.rnd = -1
        self.mode = None
        self.expect = 0
        self.sub = 1
        self.deg = 0
        self.child_sub: dict[str, int] = {}
        self.info = None  # (S, D) for the current round
        self.best = None  # (key, edge toward it, neighbour info)
        # leader bookkeeping
        self.size = 1
        self.degree = 0
        self.decided = True
        self.joining = False
        self.held: list = []
        # collection bookkeeping
        self.collect = -1
        self.hellos: dict[str, int] = {}
        self.reports: list = []
        self.pending: list = []

    def boundary(self):
        inside = set(self.cchildren)
        if self.cparent is not None:
            inside.add(self.cparent)
        return sorted(self.tree - inside)

    def cluster_edges(self):
        out = set(self.cchildren)
        if self.cparent is not None:
            out.add(self.cparent)
        return out


class DynamicProtocol:
    control_types = ()

    def __init__(self, g: WeightedGraph, tree, z: int, coordinator: int, pinned=()):
        self.graph = g
        self.initial_tree = frozenset(tree)
        self.z = z
        self.coordinator = coordinator
        self.pinned = frozenset(pinned)
        self.mirror: TopologyHierarchy | None = None
        self.change = None
        self.phase = "idle"
        self.decision = UNCHANGED
        self.collections = 0

    def initial_state(self, v, incident):
        return DynNode(v, incident, self.initial_tree)

    # ------------------------------------------------------------ dispatch

    def handle(self, s: DynNode, event):
        out: list = []
        if isinstance(event, Wakeup):
            self._wake(s, event.data, out)
        elif not self._dispatch(s, event.edge, event.type, event.payload, out):
            s.pending.append((event.edge, event.type, event.payload))
        progress = True
        while progress and s.pending:
            progress = False
            for item in list(s.pending):
                if self._dispatch(s, *item, out):
                    s.pending.remove(item)
                    progress = True
                    break
        return s, out

    def _wake(self, s, data, out):
        kind = data[0]
        if kind == "orient":
            s.rparent = None
            s.rchildren = set(s.tree)
            for e in sorted(s.rchildren):
                out.append(Send(e, "Orient"))
        elif kind == "round":
            _, mode, r = data
            self._start_round(s, mode, r, out)
        elif kind == "weight":
            _, eid, w, report = data
            old = s.weight[eid]
            s.weight[eid] = w
            if report:
                self._route_change(s, (eid, w, old, eid in s.tree), out)
        elif kind == "decide":
            self._decide(s, out)
        elif kind == "collect":
            self.collections += 1
            self._start_collect(s, self.collections, out)
        else:
            raise SimulationError(f"unknown wakeup {data!r}")

    def _dispatch(self, s, edge, kind, payload, out) -> bool:
        handler = getattr(self, "_on_" + kind, None)
        if handler is None:
            raise SimulationError(f"node {s.id}: unexpected message {kind}")
        return handler(s, edge, payload, out) is not False

    # ------------------------------------------------------------ routing tree

    def _on_Orient(self, s, j, payload, out):
        s.rparent = j
        s.rchildren = set(s.tree) - {j}
        for e in sorted(s.rchildren):
            out.append(Send(e, "Orient"))

    # ------------------------------------------------------------ rounds

    def _start_round(self, s, mode, r, out):
        s.rnd, s.mode = r, mode
        s.sub = 1
        s.deg = len(s.boundary())
        s.child_sub = {}
        s.info = None
        s.best = None
        s.expect = len(s.cchildren)
        if s.cparent is None:
            s.decided = False
            s.joining = False
        for c in sorted(s.cchildren):
            out.append(Send(c, "Probe", (r, mode)))
        if s.expect == 0:
            self._counted(s, out)

    def _on_Probe(self, s, j, payload, out):
        r, mode = payload
        self._start_round(s, mode, r, out)

    def _on_SizeReport(self, s, j, payload, out):
        r, size, deg = payload
        if r != s.rnd:
            return False
        s.child_sub[j] = size
        s.sub += size
        s.deg += deg
        s.expect -= 1
        if s.expect == 0:
            self._counted(s, out)

    _on_DegreeReport = _on_SizeReport

    def _counted(self, s, out):
        kind = "DegreeReport" if s.mode == "degree" else "SizeReport"
        if s.cparent is not None:
            out.append(Send(s.cparent, kind, (s.rnd, s.sub, s.deg)))
            return
        s.size, s.degree = s.sub, s.deg
        out.append(Note("count", (s.rnd, s.size, s.degree)))
        if s.mode == "degree":
            s.decided = True
            if s.degree > 3 or (s.degree == 3 and s.size > 1):
                out.append(Note("split", (s.size, s.degree)))
                self._split_step(s, s.size, out)
            return
        self._on_Info(s, None, (s.rnd, s.size, s.degree), out)

    def _on_Info(self, s, j, payload, out):
        r, S, D = payload
        if r != s.rnd:
            return False
        s.info = (S, D)
        for c in sorted(s.cchildren):
            out.append(Send(c, "Info", payload))
        bnd = s.boundary()
        s.expect = len(bnd) + len(s.cchildren)
        for e in bnd:
            out.append(Send(e, "Test", (r,)))
        if s.expect == 0:
            self._candidates_done(s, out)

    def _fits(self, mode, size_a, deg_a, size_b, deg_b):
        if size_a + size_b > self.z:
            return False
        return mode == "size" or deg_a + deg_b - 2 <= 2

    def _offer(self, s, key, edge, out):
        if key is not None and (s.best is None or key > s.best[0]):
            s.best = (key, edge)
        s.expect -= 1
        if s.expect == 0:
            self._candidates_done(s, out)

    def _on_TestReply(self, s, j, payload, out):
        r, leader, size, degree = payload
        if r != s.rnd or s.info is None:
            return False
        S, D = s.info
        key = (size, leader)
        # only ever join toward a greater cluster, so requests cannot cycle
        if not self._fits(s.mode, S, D, size, degree) or key <= (S, s.leader):
            key = None
        self._offer(s, key, j, out)

    def _on_CandReport(self, s, j, payload, out):
        r, key = payload
        if r != s.rnd or s.info is None:
            return False
        self._offer(s, None if key is None else tuple(key), j, out)

    def _candidates_done(self, s, out):
        key = s.best[0] if s.best else None
        if s.cparent is not None:
            out.append(Send(s.cparent, "CandReport", (s.rnd, key)))
            return
        s.decided = True
        if s.best is not None:
            s.joining = True
            self._on_JoinCmd(s, None, (s.rnd,), out)

    def _on_JoinCmd(self, s, j, payload, out):
        (r,) = payload
        edge = s.best[1]
        if edge in s.cchildren:
            out.append(Send(edge, "JoinCmd", (r,)))
        else:
            S, D = s.info
            out.append(Send(edge, "Connect", (r, s.mode, s.leader, S, D)))

    # Tests and join requests are answered by the leader of the receiving
    # cluster; the route records the edges climbed so the answer can retrace it.
    def _on_Test(self, s, j, payload, out):
        return self._on_Ask(s, j, (payload[0], (j,)), out)

    def _on_Connect(self, s, j, payload, out):
        return self._on_JoinReq(s, j, (payload[0], (j,)) + tuple(payload[1:]), out)

    def _on_Ask(self, s, j, payload, out):
        r, route = payload
        if s.cparent is not None:
            out.append(Send(s.cparent, "Ask", (r, tuple(route) + (s.cparent,))))
            return True
        if s.rnd == r and s.info is None:
            return False  # still counting this round
        self._down(s, "Tell", tuple(route), (r, s.leader, s.size, s.degree), out)
        return True

    def _on_JoinReq(self, s, j, payload, out):
        r, route, mode, leader, size, degree = payload
        route = tuple(route)
        if s.cparent is not None:
            out.append(Send(s.cparent, "JoinReq", (r, route + (s.cparent,), mode, leader, size, degree)))
            return True
        if s.rnd == r and not s.decided:
            return False
        ok = not (s.rnd == r and s.joining) and self._fits(mode, s.size, s.degree, size, degree)
        if ok:
            s.size += size
            s.degree += degree - 2
            out.append(Note("join", (leader, s.leader, s.size)))
        self._down(s, "JoinAck", route, (r, ok), out)
        return True

    def _down(self, s, kind, route, data, out):
        if len(route) == 1:
            self._arrive(s, kind, route[0], data, out)
        else:
            out.append(Send(route[-1], kind, (route[:-1],) + tuple(data)))

    def _on_Tell(self, s, j, payload, out):
        self._down(s, "Tell", tuple(payload[0]), payload[1:], out)

    def _on_JoinAck(self, s, j, payload, out):
        self._down(s, "JoinAck", tuple(payload[0]), payload[1:], out)

    def _arrive(self, s, kind, edge, data, out):
        # the answer is back at the node owning the boundary edge
        if kind == "Tell":
            out.append(Send(edge, "TestReply", tuple(data)))
            return
        r, ok = data
        if ok:
            s.cchildren.add(edge)
            out.append(Send(edge, "Accept", (s.leader,)))
        else:
            out.append(Send(edge, "Reject"))

    def _on_Accept(self, s, j, payload, out):
        (leader,) = payload
        self._reorient(s, j, leader, out)

    def _on_Reject(self, s, j, payload, out):
        out.append(Note("rejected", s.leader))

    def _reorient(self, s, j, leader, out):
        others = s.cluster_edges() - {j}
        s.leader = leader
        s.cparent = j
        s.cchildren = others
        for e in sorted(others):
            out.append(Send(e, "NewLeader", (leader,)))

    def _on_NewLeader(self, s, j, payload, out):
        self._reorient(s, j, payload[0], out)

    # ------------------------------------------------------------ splitting

    def _split_step(self, s, S, out):
        heavy = sorted(s.cchildren, key=lambda c: (-s.child_sub[c], c))
        heavy = heavy[0] if heavy else None
        if heavy is not None and 2 * s.child_sub[heavy] > S:
            out.append(Send(heavy, "SplitCmd", (S,)))
            return
        down = None if heavy is None else max(s.child_sub[heavy], S - s.child_sub[heavy])
        up = None if s.cparent is None else max(s.sub, S - s.sub)
        if up is not None and (down is None or up <= down):
            out.append(Send(s.cparent, "Detach"))
            s.cparent = None
            self._become_leader(s, out)
        else:
            s.cchildren.discard(heavy)
            out.append(Send(heavy, "Detach"))

    def _on_SplitCmd(self, s, j, payload, out):
        self._split_step(s, payload[0], out)

    def _on_Detach(self, s, j, payload, out):
        if j == s.cparent:
            s.cparent = None
            self._become_leader(s, out)
        else:
            s.cchildren.discard(j)

    def _become_leader(self, s, out):
        s.leader = s.id
        s.rnd = -1
        for e in sorted(s.cchildren):
            out.append(Send(e, "NewLeader", (s.id,)))
        out.append(Note("leader", s.id))

    # ------------------------------------------------------------ weight changes

    def _route_change(self, s, change, out):
        if s.id == self.coordinator:
            self.change = change
            return
        out.append(Send(s.rparent, "ChangeReport", change))

    def _on_ChangeReport(self, s, j, payload, out):
        self._route_change(s, tuple(payload), out)

    def _decide(self, s, out):
        eid, w, old, is_tree = self.change
        key = (w, eid)
        if self.phase == "idle":
            if is_tree and w > old:
                self.phase = "cut"
                self._broadcast(s, ("cut", eid), out)
                return
            if not is_tree and w < old:
                self.phase = "collect-decrease"
                self.collections += 1
                self._start_collect(s, self.collections, out)
                return
            self.phase = "done"
            self.decision = UNCHANGED
            self._broadcast(s, ("noop",), out)
        elif self.phase == "cut-collected":
            f = self.mirror.replacement_between_roots(eid)
            if f is not None and (self.mirror.weight[f], f) < key:
                self.phase = "linked"
                self.decision = UpdateOutcome(True, eid, f)
                self._broadcast(s, ("link", f, eid), out)
            else:
                self.phase = "relinked"
                self.decision = UNCHANGED
                self._broadcast(s, ("link", eid, None), out)
        elif self.phase == "decrease-collected":
            g = self.graph
            e = g.edges[eid]
            self.mirror.weight[eid] = w
            heaviest = self.mirror.heaviest_on_path(e.u, e.v)
            if (self.mirror.weight[heaviest], heaviest) > key:
                self.phase = "linked"
                self.decision = UpdateOutcome(True, heaviest, eid)
                self._broadcast(s, ("swap", heaviest, eid), out)
            else:
                self.phase = "done"
                self.decision = UNCHANGED
                self._broadcast(s, ("noop",), out)

    def _broadcast(self, s, cmd, out):
        self._apply_cmd(s, cmd, out)
        for e in sorted(s.rchildren):
            out.append(Send(e, "SwapCmd", cmd))

    def _on_SwapCmd(self, s, j, payload, out):
        cmd = tuple(payload)
        self._apply_cmd(s, cmd, out)
        for e in sorted(s.rchildren):
            out.append(Send(e, "SwapCmd", cmd))

    def _apply_cmd(self, s, cmd, out):
        kind = cmd[0]
        if kind == "cut":
            self._drop_tree_edge(s, cmd[1], limbo=True, out=out)
        elif kind == "link":
            f, old = cmd[1], cmd[2]
            if f in s.weight:
                s.tree.add(f)
                s.limbo.discard(f)
                out.append(Note("touched", f))
            if old is not None and old in s.weight:
                s.limbo.discard(old)
        elif kind == "swap":
            e, f = cmd[1], cmd[2]
            self._drop_tree_edge(s, e, limbo=False, out=out)
            if f in s.weight:
                s.tree.add(f)
                out.append(Note("touched", f))

    def _drop_tree_edge(self, s, e, limbo, out):
        if e not in s.weight:
            return
        s.tree.discard(e)
        if limbo:
            s.limbo.add(e)
        if e == s.cparent:
            s.cparent = None
            self._become_leader(s, out)
        else:
            s.cchildren.discard(e)
        out.append(Note("touched", e))

    # ------------------------------------------------------------ min collection

    def _start_collect(self, s, c, out):
        s.collect = c
        s.reports = []
        for e in sorted(s.rchildren):
            out.append(Send(e, "Collect", (c,)))
        for e in s.edges:
            if e not in s.tree and e not in s.limbo:
                out.append(Send(e, "Hello", (c, s.leader)))
        self._maybe_report(s, out)

    def _on_Collect(self, s, j, payload, out):
        self._start_collect(s, payload[0], out)

    def _on_Hello(self, s, j, payload, out):
        c, leader = payload
        s.hellos[j] = (c, leader)
        if s.collect == c:
            self._maybe_report(s, out)

    def _on_MinReport(self, s, j, payload, out):
        c = payload[0]
        if s.collect != c:
            return False
        s.reports.append(payload[1:])
        self._maybe_report(s, out)

    def _maybe_report(self, s, out):
        c = s.collect
        nontree = [e for e in s.edges if e not in s.tree and e not in s.limbo]
        if any(s.hellos.get(e, (None,))[0] != c for e in nontree):
            return
        if len(s.reports) != len(s.rchildren):
            return
        minima: dict = {}
        members = [(s.id, s.leader)]
        tree = {e: s.weight[e] for e in s.tree}
        for e in nontree:
            other = s.hellos[e][1]
            key = (min(s.leader, other), max(s.leader, other))
            val = (s.weight[e], e)
            if key not in minima or val < minima[key]:
                minima[key] = val
        for rep_minima, rep_members, rep_tree in s.reports:
            for key, val in rep_minima:
                key, val = tuple(key), tuple(val)
                if key not in minima or val < minima[key]:
                    minima[key] = val
            members.extend(tuple(m) for m in rep_members)
            tree.update(dict(rep_tree))
        s.collect = -1
        if s.id != self.coordinator:
            payload = (c, tuple(sorted(minima.items())), tuple(sorted(members)), tuple(sorted(tree.items())))
            out.append(Send(s.rparent, "MinReport", payload))
            return
        self._adopt_overlay(minima, members, tree)
        if self.phase == "cut":
            self.phase = "cut-collected"
            self._decide(s, out)
        elif self.phase == "collect-decrease":
            self.phase = "decrease-collected"
            self._decide(s, out)

    def _adopt_overlay(self, minima, members, tree):
        groups = defaultdict(set)
        for v, leader in members:
            groups[leader].add(v)
        if self.mirror is None:
            self.mirror = TopologyHierarchy(self.graph, tree.keys(), self.z, pinned=self.pinned)
        for eid, w in tree.items():
            self.mirror.weight[eid] = w
        try:
            self.mirror.set_basic_partition(
                [groups[k] for k in sorted(groups)], tree.keys(), {k: v for k, v in minima.items()}
            )
        except GraphError as exc:
            raise SimulationError(f"stale overlay at the coordinator: {exc}") from None


class DistributedDynamicMST:
    """Harness around the protocol: forms clusters, then injects weight changes.

    Each phase (a join round, a degree round, a change report, a collection)
    is started by waking the processes concerned and runs until the network
    is quiet.  Which leaders take part in the next round is read off the
    process states; that choice is scheduling only and never affects safety.
    """

    def __init__(self, g: WeightedGraph, z: int = 4, delay="unit", initial: str = "kruskal",
                 max_events: int = 5_000_000):
        self.graph = g
        self.expanded, self.mapping = ternarize(g)
        gt = self.expanded
        self.z = int(z)
        if self.z < 1:
            raise GraphError("z must be at least 1")
        if initial == "kruskal":
            tree = kruskal(gt).edges
            coordinator = 0
        elif initial == "ghs":
            from .ghs import Ghs, branch_edges

            ghs = Simulation(gt, Ghs(), max_events)
            ghs.run(delay, list(range(gt.n)))
            tree = branch_edges(ghs)
            core = ghs.states[0].core
            ends = [e for e in gt if e.weight == core]
            coordinator = min(ends[0].u, ends[0].v) if ends else 0
        else:
            raise GraphError(f"unknown initial tree source {initial!r}")
        self.weights = {e.id: e.weight for e in gt}
        self.protocol = DynamicProtocol(gt, tree, self.z, coordinator, self.mapping.internal_edges)
        self.sim = Simulation(gt, self.protocol, max_events)
        self.sim.delay = parse_delay(delay)
        self.rounds = 0
        self.max_cluster_size = 1
        self.overlay_problems: list[str] = []
        self._seen = 0
        self._pulse(coordinator, ("orient",))
        self.form_clusters()

    @property
    def coordinator(self) -> int:
        return self.protocol.coordinator

    @property
    def counters(self):
        return self.sim.counters

    def _pulse(self, v, data):
        self.sim.wake(v, data)
        self.sim.resume()
        return self._new_notes()

    def _new_notes(self):
        notes = self.sim.notes[self._seen:]
        self._seen = len(self.sim.notes)
        for _, _, note in notes:
            if note.kind == "join":
                self.max_cluster_size = max(self.max_cluster_size, note.data[2])
        return notes

    # ------------------------------------------------------------ views

    def leaders(self) -> dict[int, set[int]]:
        groups = defaultdict(set)
        for s in self.sim.states:
            groups[s.leader].add(s.id)
        return groups

    def expanded_tree(self) -> frozenset[str]:
        states = self.sim.states
        return frozenset(e.id for e in self.expanded if e.id in states[e.u].tree and e.id in states[e.v].tree)

    @property
    def tree_edges(self) -> frozenset[str]:
        return self.mapping.contract(self.expanded_tree())

    def partition(self) -> RestrictedPartition:
        clusters = tuple(frozenset(c) for _, c in sorted(self.leaders().items()))
        return RestrictedPartition(self.expanded, self.expanded_tree(), self.z, clusters)

    # ------------------------------------------------------------ rounds

    def _current(self, vertices):
        states = self.sim.states
        return {states[v].leader for v in vertices}

    def _with_neighbours(self, leaders):
        states = self.sim.states
        out = set(leaders)
        for s in states:
            if s.leader in leaders:
                for e in s.boundary():
                    edge = self.expanded.edges[e]
                    out.add(states[edge.v if edge.u == s.id else edge.u].leader)
        return out

    def _round(self, mode, leaders):
        """One round; returns the vertices whose cluster changed."""
        self.rounds += 1
        for v in sorted(leaders):
            self.sim.wake(v, ("round", mode, self.rounds))
        self.sim.resume()
        changed = set()
        for _, v, note in self._new_notes():
            if note.kind == "join":
                changed.add(note.data[1])
            elif note.kind in ("split", "leader", "rejected"):
                changed.add(v)
        return changed

    def _join_rounds(self, mode, dirty):
        dirty = set(dirty)
        while dirty:
            dirty = self._round(mode, self._with_neighbours(self._current(dirty)))

    def _degree_rounds(self, dirty):
        """Split until no participating cluster is too wide; returns every vertex involved."""
        seen = set(dirty)
        while dirty:
            dirty = self._round("degree", self._current(dirty))
            seen |= dirty
        return seen

    def form_clusters(self) -> RestrictedPartition:
        """Size-capped joins, then degree reconciliation, then validity-checked joins."""
        self._join_rounds("size", range(self.expanded.n))
        self._degree_rounds(set(range(self.expanded.n)))
        self._join_rounds("valid", range(self.expanded.n))
        return self.partition()

    @staticmethod
    def _touched(notes):
        return {v for _, v, note in notes if note.kind in ("touched", "leader")}

    # ------------------------------------------------------------ updates

    def handle_weight_change(self, eid: str, new_weight: float) -> UpdateOutcome:
        """Inject one weight change and run the protocol until it settles."""
        if eid not in self.graph.edges:
            raise KeyError(eid)
        old = self.weights[eid]
        if new_weight == old:
            return UNCHANGED
        if new_weight != SENTINEL:
            for other, w in self.weights.items():
                if w == new_weight and other != eid and other not in self.mapping.internal_edges:
                    raise DuplicateWeightError(other, eid, new_weight)
        self.weights[eid] = new_weight
        e = self.expanded.edges[eid]
        proto = self.protocol
        proto.phase = "idle"
        proto.decision = UNCHANGED
        reporter = min(e.u, e.v)
        for v in (e.u, e.v):
            self.sim.wake(v, ("weight", eid, new_weight, v == reporter))
        self.sim.resume()
        self._new_notes()
        was_tree = eid in self.sim.states[e.u].tree
        before = proto.collections
        notes = self._pulse(self.coordinator, ("decide",))
        if proto.phase == "cut":
            self._join_rounds("valid", self._touched(notes))
            notes = self._pulse(self.coordinator, ("collect",))
        if proto.collections != before:
            self._check_overlay((eid,) if was_tree else ())
        if proto.phase in ("linked", "relinked"):
            touched = self._degree_rounds(self._touched(notes))
            self._join_rounds("valid", touched)
            if proto.phase == "linked":
                self._pulse(self.coordinator, ("orient",))
        proto.phase = "idle"
        return proto.decision

    def apply_update(self, eid: str, delta: float) -> UpdateOutcome:
        return self.handle_weight_change(eid, self.weights[eid] + delta)

    def _check_overlay(self, exclude):
        mirror = self.protocol.mirror
        if mirror is not None:
            self.overlay_problems.extend(check_pair_minima(mirror, self.weights, exclude))


def form_clusters(g: WeightedGraph, z: int, delay="unit", initial: str = "kruskal") -> RestrictedPartition:
    """Run distributed cluster formation on ``g`` (ternarized internally)."""
    return DistributedDynamicMST(g, z, delay, initial).partition()
