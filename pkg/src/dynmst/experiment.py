"""Experiment runner behind the command line: one graph, one algorithm, one row.

Every run is checked against an independent oracle (Kruskal on the current
weights, plus exhaustive enumeration on tiny graphs for the static
algorithms).  The CSV schema is ``CSV_FIELDS``; weights are summed with
``math.fsum`` over sorted values so equal trees print equal totals.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .graph import SENTINEL, WeightedGraph
from .oracle import brute_force_mst_weight
from .static import kruskal, prim

ALGORITHMS = ("kruskal", "prim", "resp-dmst", "topo-dmst", "ghs", "chin-ting", "dist-dynamic")
DISTRIBUTED = ("ghs", "chin-ting", "dist-dynamic")

CSV_FIELDS = (
    "graph", "algorithm", "n", "m", "seed", "delay", "z", "updates", "swaps",
    "tree_weight", "oracle_weight", "messages", "message_bound", "within_bound",
    "completion_time", "messages_by_type", "oracle_match",
)

# exhaustive enumeration is only attempted on graphs this small
BRUTE_FORCE_N = 8
BRUTE_FORCE_M = 14


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    algo: str
    graph: WeightedGraph
    graph_name: str = "graph"
    steps: list = field(default_factory=list)
    delay: str = "unit"
    z: int | None = None
    seed: int = 0
    wakeup: str = "all"
    initial: str = "kruskal"


@dataclass
class ExperimentResult:
    row: dict
    mismatches: list[str]
    tree: frozenset
    weights: dict
    last_swap: tuple | None = None
    trace: object = None

    @property
    def ok(self) -> bool:
        return not self.mismatches


def tree_weight(weights: dict, tree) -> float:
    return math.fsum(sorted(weights[e] for e in tree))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "inf" if x == SENTINEL else repr(x)
    return str(x)


def _apply(weights: dict, eid: str, w: float) -> None:
    if w != SENTINEL and any(v == w and k != eid for k, v in weights.items()):
        raise ConfigError(f"update gives {eid!r} the weight {w!r}, which is already in use")
    weights[eid] = w


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    if cfg.algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {cfg.algo!r}; choose from {', '.join(ALGORITHMS)}")
    if cfg.algo in ("ghs", "chin-ting") and cfg.steps:
        raise ConfigError(f"{cfg.algo} builds a tree once and does not take updates")
    g = cfg.graph
    if not g.is_connected():
        raise ConfigError("the graph is not connected")
    runner = {
        "kruskal": _run_static, "prim": _run_static, "resp-dmst": _run_sequential,
        "topo-dmst": _run_sequential, "ghs": _run_ghs, "chin-ting": _run_ghs,
        "dist-dynamic": _run_distributed,
    }[cfg.algo]
    res = runner(cfg)
    oracle = kruskal(g.with_weights(res.weights)).edges
    if res.tree != oracle:
        res.mismatches.append(f"tree differs from the oracle in {sorted(res.tree ^ oracle)}")
    row = res.row
    row.update(
        graph=cfg.graph_name, algorithm=cfg.algo, n=g.n, m=g.m, seed=cfg.seed,
        delay=cfg.delay if cfg.algo in DISTRIBUTED else "", updates=len(cfg.steps),
        tree_weight=tree_weight(res.weights, res.tree), oracle_weight=tree_weight(res.weights, oracle),
        oracle_match=not res.mismatches,
    )
    res.row = {k: _fmt(row.get(k)) for k in CSV_FIELDS}
    return res


def _final_weights(cfg):
    weights = {e.id: e.weight for e in cfg.graph}
    for eid, w in cfg.steps:
        _apply(weights, eid, w)
    return weights


def _run_static(cfg):
    weights = _final_weights(cfg)
    g = cfg.graph.with_weights(weights)
    tree = (kruskal if cfg.algo == "kruskal" else prim)(g).edges
    other = (prim if cfg.algo == "kruskal" else kruskal)(g).edges
    problems = [] if tree == other else ["kruskal and prim disagree"]
    if g.n <= BRUTE_FORCE_N and g.m <= BRUTE_FORCE_M and all(w != SENTINEL for w in weights.values()):
        best = brute_force_mst_weight(g)
        if not math.isclose(best, tree_weight(weights, tree), rel_tol=0, abs_tol=1e-9):
            problems.append(f"enumeration minimum {best!r} differs")
    return ExperimentResult({"swaps": 0}, problems, tree, weights)


def _run_sequential(cfg):
    from .responsibility import initialize
    from .topology import TopologyDynamicMST

    g = cfg.graph
    if cfg.algo == "resp-dmst":
        structure = initialize(g, kruskal(g))
        if cfg.z is not None:
            raise ConfigError("--z only applies to topo-dmst and dist-dynamic")
    else:
        structure = TopologyDynamicMST(g, cfg.z)
    weights = {e.id: e.weight for e in g}
    problems, swaps, last = [], 0, None
    for i, (eid, w) in enumerate(cfg.steps, 1):
        _apply(weights, eid, w)
        out = structure.set_weight(eid, w)
        if out.swapped:
            swaps += 1
            last = (out.out, out.into)
        if structure.tree_edges != kruskal(g.with_weights(weights)).edges:
            problems.append(f"update {i} ({eid} -> {w!r}): tree differs from the oracle")
            break
    row = {"swaps": swaps, "z": getattr(structure, "z", None)}
    return ExperimentResult(row, problems, frozenset(structure.tree_edges), weights, last)


def _run_ghs(cfg):
    from .ghs import message_bound, run_chin_ting, run_ghs

    g = cfg.graph
    wakeup = list(range(g.n)) if cfg.wakeup == "all" else [cfg.seed % g.n] if g.n else []
    run = run_ghs if cfg.algo == "ghs" else run_chin_ting
    tree, counters, history, trace = run(g, cfg.delay, wakeup)
    bound = message_bound(g.n, g.m)
    problems = []
    if counters.total > bound:
        problems.append(f"{counters.total} messages exceed the bound {bound}")
    if history.size_violations():
        problems.append(f"fragment smaller than 2^level: {history.size_violations()[0]}")
    if cfg.algo == "chin-ting" and history.count_violations():
        problems.append(f"counted size outside [2^L, 2^(L+1)): {history.count_violations()[0]}")
    row = _message_columns(counters)
    row.update(swaps=0, message_bound=bound, within_bound=counters.total <= bound)
    weights = {e.id: e.weight for e in g}
    return ExperimentResult(row, problems, tree.edges, weights, trace=trace)


def _run_distributed(cfg):
    from .distdyn import DistributedDynamicMST
    from .topology import check_conditions

    g = cfg.graph
    z = 4 if cfg.z is None else cfg.z
    d = DistributedDynamicMST(g, z, cfg.delay, cfg.initial)
    weights = {e.id: e.weight for e in g}
    problems, swaps, last = [], 0, None

    def verify(label):
        verdict = check_conditions(d.partition())
        if not verdict.ok:
            problems.append(f"{label}: partition {verdict.message}")
        if d.max_cluster_size > z:
            problems.append(f"{label}: a cluster reached size {d.max_cluster_size} > {z}")
        if d.overlay_problems:
            problems.append(f"{label}: overlay {d.overlay_problems[0]}")
        if d.tree_edges != kruskal(g.with_weights(weights)).edges:
            problems.append(f"{label}: tree differs from the oracle")

    verify("formation")
    for i, (eid, w) in enumerate(cfg.steps, 1):
        if problems:
            break
        _apply(weights, eid, w)
        out = d.handle_weight_change(eid, w)
        if out.swapped:
            swaps += 1
            last = (out.out, out.into)
        verify(f"update {i} ({eid} -> {w!r})")
    row = _message_columns(d.counters)
    row.update(swaps=swaps, z=z)
    return ExperimentResult(row, problems, d.tree_edges, weights, last, d.sim.trace)


def _message_columns(counters):
    by_type = ";".join(f"{k}={v}" for k, v in sorted(counters.by_type.items()))
    return {"messages": counters.total, "completion_time": counters.completion_time, "messages_by_type": by_type}


def csv_text(rows) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return out.getvalue()


def to_dot(g: WeightedGraph, tree, weights=None, last_swap=None) -> str:
    """Tree edges solid, non-tree dashed, the last swap (out red, in blue) bold."""
    weights = weights or {e.id: e.weight for e in g}
    out_edge, in_edge = last_swap if last_swap else (None, None)
    lines = ["graph mst {", "  node [shape=circle];"]
    for v in range(g.n):
        lines.append(f"  {v};")
    for eid in sorted(g.edges):
        e = g.edges[eid]
        attrs = [f'label="{eid}:{_fmt(weights[eid])}"', "style=" + ("solid" if eid in tree else "dashed")]
        if eid == out_edge:
            attrs += ["color=red", "penwidth=2"]
        elif eid == in_edge:
            attrs += ["color=blue", "penwidth=2"]
        lines.append(f"  {e.u} -- {e.v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
