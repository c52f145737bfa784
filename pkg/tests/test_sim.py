from fractions import Fraction
from pathlib import Path

import pytest

from conftest import triangle, two_nodes
from dynmst.generators import random_graph
from dynmst.ghs import run_ghs
from dynmst.sim import (
    TICKS, Halt, Idle, Send, SeededDelay, SimulationError, Wakeup, build_network, causal_depths,
    parse_delay, run,
)

GOLDEN = Path(__file__).parent / "golden"


class PingPong:
    """Bounces one message back and forth forever."""

    control_types = ()

    def initial_state(self, v, incident):
        return {"id": v, "edges": [e for e, _ in incident]}

    def handle(self, s, event):
        return s, [Send(s["edges"][0], "Ping")]


class Flood:
    """Each woken process sends ``k`` numbered messages on every edge, then halts."""

    control_types = ()

    def __init__(self, k=5):
        self.k = k

    def initial_state(self, v, incident):
        return {"id": v, "edges": [e for e, _ in incident], "sent": False}

    def handle(self, s, event):
        if s["sent"]:
            return s, [Halt()]
        s["sent"] = True
        return s, [Send(e, "Msg", (s["id"], i)) for i in range(self.k) for e in s["edges"]] + [Halt()]


class WrongEdge:
    control_types = ()

    def initial_state(self, v, incident):
        return v

    def handle(self, s, event):
        return s, [Send("e1", "Bad")] if s == 0 else []


def test_network_shapes():
    for g, channels in ((two_nodes(), 1), (triangle(), 3)):
        sim = build_network(g, Idle())
        assert sim.n == g.n and sim.channels() == channels and sim.pending() == 0
    g = random_graph(64, 150, 3)
    sim = build_network(g, Idle())
    assert sim.n == 64 and sim.channels() == 150 and sim.pending() == 0


def test_processes_see_only_incident_weights():
    seen = {}

    class Record(Idle):
        def initial_state(self, v, incident):
            seen[v] = incident
            return {}

    build_network(triangle(), Record())
    assert seen[0] == [("e0", 1.0), ("e2", 3.0)]
    assert seen[1] == [("e0", 1.0), ("e1", 2.0)]


def test_idle_protocol():
    sim = build_network(triangle(), Idle())
    counters, trace = run(sim, "unit", [0, 1, 2])
    assert counters.total == 0 and counters.completion_time == 0
    assert all(sim.halted)


def test_default_wakeup_is_lowest_id():
    sim = build_network(triangle(), Idle())
    _, trace = run(sim)
    assert [r["dst"] for r in trace if r["kind"] == "wakeup"] == [0]


def test_fifo_and_causality_under_seeded_delays():
    g = random_graph(12, 30, 5)
    sim = build_network(g, Flood(6))
    counters, trace = run(sim, "seeded:11", range(g.n))
    assert counters.total == 6 * 2 * g.m
    sent, delivered = {}, {}
    for rec in trace:
        key = (rec["edge"], rec["src"])
        if rec["kind"] == "send":
            sent.setdefault(key, []).append((rec["payload"], rec["t"]))
        elif rec["kind"] == "deliver":
            delivered.setdefault(key, []).append((rec["payload"], rec["t"]))
    assert sent.keys() == delivered.keys()
    for key in sent:
        assert [p for p, _ in sent[key]] == [p for p, _ in delivered[key]]
        for (_, ts), (_, td) in zip(sent[key], delivered[key]):
            assert ts < td
    times = [r["t"] for r in trace]
    assert times == sorted(times)


def test_seeded_delays_in_unit_interval():
    d = SeededDelay(3)
    draws = [d() for _ in range(10_000)]
    assert 0 < min(draws) and max(draws) <= TICKS
    assert parse_delay("seeded:3").name == "seeded:3"
    with pytest.raises(ValueError):
        parse_delay("gaussian")


def test_same_seed_same_trace():
    g = random_graph(20, 45, 8)
    a = run_ghs(g, "seeded:4", range(g.n))[3].to_jsonl()
    b = run_ghs(g, "seeded:4", range(g.n))[3].to_jsonl()
    c = run_ghs(g, "seeded:5", range(g.n))[3].to_jsonl()
    assert a == b and a != c


@pytest.mark.parametrize("seed", range(8))
def test_unit_delay_time_is_longest_causal_chain(seed):
    g = random_graph(16, 40, seed)
    for wakeup in (range(g.n), [0]):
        _, counters, _, trace = run_ghs(g, "unit", wakeup)
        assert counters.completion_time == Fraction(max(causal_depths(trace)))


def test_event_ceiling():
    sim = build_network(two_nodes(), PingPong(), max_events=100)
    with pytest.raises(SimulationError, match="event ceiling"):
        run(sim)


def test_bad_wakeup_and_bad_edge():
    with pytest.raises(SimulationError):
        run(build_network(two_nodes(), Idle()), "unit", [5])
    with pytest.raises(SimulationError, match="non-incident"):
        run(build_network(triangle(), WrongEdge()), "unit", [0])


def test_wakeup_carries_data():
    sim = build_network(two_nodes(), Idle())
    sim.wake(1, ("hello", 2))
    _, trace = sim.resume()
    assert trace[0]["payload"] == ["hello", 2]
    assert isinstance(Wakeup(("x",)).data, tuple)


@pytest.mark.parametrize("name,graph", [("ghs_two_nodes", two_nodes), ("ghs_triangle", triangle)])
def test_golden_traces(name, graph):
    g = graph()
    trace = run_ghs(g, "unit", range(g.n))[3]
    assert trace.to_jsonl() == (GOLDEN / f"{name}.jsonl").read_text()
