"""Deterministic discrete-event simulation of message passing over FIFO links.

One process per vertex, one bidirectional channel per edge.  A protocol
supplies ``initial_state(v, incident)`` and ``handle(state, event)``; the
handler returns the (possibly updated) state plus a list of actions:
``Send`` over an incident edge, ``Note`` for the observer, or ``Halt``.

Time is kept in integer ticks, ``TICKS`` per unit, so delays are exact
rationals in (0, 1].  Events at equal times are ordered by sender, channel
and per-sender sequence number, which makes every run reproducible.
"""

from __future__ import annotations

import heapq
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .graph import WeightedGraph

TICKS = 1024


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Send:
    edge: str
    type: str
    payload: tuple = ()


@dataclass(frozen=True)
class Note:
    kind: str
    data: Any = None


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class Wakeup:
    data: Any = None


@dataclass(frozen=True)
class Deliver:
    edge: str
    type: str
    payload: tuple
    src: int


class UnitDelay:
    """Every message takes exactly one time unit."""

    name = "unit"

    def __call__(self) -> int:
        return TICKS


class SeededDelay:
    """Delays drawn uniformly from (0, 1] by a seeded generator."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"seeded:{seed}"
        self._rng = random.Random(seed)

    def __call__(self) -> int:
        return self._rng.randint(1, TICKS)


def parse_delay(spec) -> UnitDelay | SeededDelay:
    """``"unit"`` or ``"seeded:<seed>"``; delay objects pass through."""
    if isinstance(spec, (UnitDelay, SeededDelay)):
        return spec
    if spec == "unit":
        return UnitDelay()
    if isinstance(spec, str) and spec.startswith("seeded:"):
        try:
            return SeededDelay(int(spec.split(":", 1)[1]))
        except ValueError:
            pass
    raise ValueError(f"unknown delay model {spec!r}; use 'unit' or 'seeded:<seed>'")


def ticks_to_time(t: int) -> Fraction:
    return Fraction(t, TICKS)


@dataclass
class Counters:
    by_type: Counter = field(default_factory=Counter)
    control: Counter = field(default_factory=Counter)
    completion_ticks: int = 0
    events: int = 0

    @property
    def total(self) -> int:
        return sum(self.by_type.values())

    @property
    def completion_time(self) -> Fraction:
        return ticks_to_time(self.completion_ticks)


def _jsonable(x):
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        if x == float("-inf"):
            return "-inf"
        return x
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return x


class Trace(list):
    """Event records in processing order; serializes to JSON lines."""

    FIELDS = ("t", "kind", "src", "dst", "edge", "type", "payload")

    def to_jsonl(self) -> str:
        out = []
        for rec in self:
            row = {k: rec.get(k) for k in self.FIELDS}
            row["t"] = str(row["t"])
            row["payload"] = _jsonable(row["payload"])
            out.append(json.dumps(row, separators=(",", ":")))
        return "\n".join(out) + ("\n" if out else "")


class Simulation:
    def __init__(self, g: WeightedGraph, protocol, max_events: int = 5_000_000):
        self.graph = g
        self.protocol = protocol
        self.max_events = max_events
        self.channel_index = {eid: i for i, eid in enumerate(sorted(g.edges))}
        incident: list[list[tuple[str, float]]] = [[] for _ in range(g.n)]
        for e in g:
            incident[e.u].append((e.id, e.weight))
            incident[e.v].append((e.id, e.weight))
        self.states = [protocol.initial_state(v, sorted(incident[v], key=lambda p: (p[1], p[0]))) for v in range(g.n)]
        self.control_types = frozenset(getattr(protocol, "control_types", ()))
        self.halted = [False] * g.n
        self.now = 0
        self.counters = Counters()
        self.trace = Trace()
        self.notes: list[tuple[int, int, Note]] = []
        self._queue: list = []
        self._seq = [0] * g.n
        self._last = {}
        self.delay = UnitDelay()

    @property
    def n(self) -> int:
        return self.graph.n

    def channels(self) -> int:
        return len(self.channel_index)

    def pending(self) -> int:
        return len(self._queue)

    def _push(self, t, src, chan, event, dst):
        seq = self._seq[src]
        self._seq[src] += 1
        heapq.heappush(self._queue, (t, src, chan, seq, dst, event))

    def wake(self, v: int, data=None) -> None:
        """Schedule a wakeup (optionally carrying data) at the current time."""
        self._push(self.now, v, -1, Wakeup(data), v)

    def run(self, delay="unit", wakeup=None) -> tuple[Counters, Trace]:
        """Process events until none are pending."""
        self.delay = parse_delay(delay)
        if wakeup is None:
            wakeup = [0] if self.n else []
        for v in sorted(set(wakeup)):
            if not 0 <= v < self.n:
                raise SimulationError(f"wakeup vertex {v} out of range")
            self.wake(v)
        return self.resume()

    def resume(self) -> tuple[Counters, Trace]:
        edges = self.graph.edges
        while self._queue:
            if self.counters.events >= self.max_events:
                raise SimulationError(
                    f"event ceiling {self.max_events} reached at t={ticks_to_time(self.now)} "
                    f"with {len(self._queue)} events pending"
                )
            t, src, chan, _, dst, event = heapq.heappop(self._queue)
            self.now = t
            self.counters.events += 1
            if isinstance(event, Wakeup):
                self.trace.append({"t": ticks_to_time(t), "kind": "wakeup", "src": dst, "dst": dst,
                                   "edge": None, "type": None, "payload": _jsonable(event.data)})
            else:
                self.trace.append({"t": ticks_to_time(t), "kind": "deliver", "src": src, "dst": dst,
                                   "edge": event.edge, "type": event.type, "payload": event.payload})
            state, actions = self.protocol.handle(self.states[dst], event)
            self.states[dst] = state
            for act in actions:
                if isinstance(act, Send):
                    e = edges[act.edge]
                    if dst not in (e.u, e.v):
                        raise SimulationError(f"process {dst} sent over non-incident edge {act.edge}")
                    to = e.v if dst == e.u else e.u
                    ch = self.channel_index[act.edge]
                    arrive = max(t + self.delay(), self._last.get((ch, dst), 0))
                    self._last[(ch, dst)] = arrive
                    if act.type in self.control_types:
                        self.counters.control[act.type] += 1
                    else:
                        self.counters.by_type[act.type] += 1
                    self.trace.append({"t": ticks_to_time(t), "kind": "send", "src": dst, "dst": to,
                                       "edge": act.edge, "type": act.type, "payload": act.payload})
                    self._push(arrive, dst, ch, Deliver(act.edge, act.type, act.payload, dst), to)
                elif isinstance(act, Halt):
                    if not self.halted[dst]:
                        self.halted[dst] = True
                        self.trace.append({"t": ticks_to_time(t), "kind": "halt", "src": dst, "dst": dst,
                                           "edge": None, "type": None, "payload": None})
                elif isinstance(act, Note):
                    self.notes.append((t, dst, act))
                else:
                    raise SimulationError(f"unknown action {act!r}")
            self.counters.completion_ticks = t
        return self.counters, self.trace


def build_network(g: WeightedGraph, protocol, max_events: int = 5_000_000) -> Simulation:
    """One process per vertex and one channel per edge, all queues empty."""
    return Simulation(g, protocol, max_events)


def run(sim: Simulation, delay="unit", wakeup=None) -> tuple[Counters, Trace]:
    return sim.run(delay, wakeup)


def causal_depths(trace: Trace) -> list[int]:
    """Length of the causal chain ending at each record, in message hops.

    Sends inherit the depth of the record being processed when they were
    issued; a delivery is one hop deeper than its send (matched per channel
    direction in FIFO order).
    """
    depths = []
    current = 0
    in_flight: dict[tuple, list[int]] = {}
    heads: dict[tuple, int] = {}
    for rec in trace:
        kind = rec["kind"]
        if kind == "wakeup":
            current = 0
            depths.append(0)
        elif kind == "deliver":
            key = (rec["edge"], rec["src"])
            i = heads.get(key, 0)
            current = in_flight[key][i] + 1
            heads[key] = i + 1
            depths.append(current)
        elif kind == "send":
            in_flight.setdefault((rec["edge"], rec["src"]), []).append(current)
            depths.append(current)
        else:
            depths.append(current)
    return depths


class Idle:
    """A protocol in which every process halts as soon as it wakes."""

    control_types = ()

    def initial_state(self, v, incident):
        return {"id": v}

    def handle(self, state, event):
        return state, [Halt()]
