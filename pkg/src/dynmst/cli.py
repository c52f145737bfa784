"""Command line: ``dynmst --algo <name> (--graph FILE | --generate kind:n:m:seed) ...``

Exit status: 0 when every oracle check passes, 2 on any mismatch, 1 on a
usage, input or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import ALGORITHMS, DISTRIBUTED, ConfigError, ExperimentConfig, csv_text, run_experiment, to_dot
from .generators import generate_graph, parse_generate_spec
from .graph import GraphError, load_graph, save_graph
from .sim import SimulationError, parse_delay
from .updates import load_script

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dynmst", description="Run an MST algorithm on a graph and check it against an oracle.")
    p.add_argument("--algo", choices=ALGORITHMS, help="algorithm to run")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph", metavar="FILE", help="edge-list file: 'n m' then 'u v weight id' lines")
    src.add_argument("--generate", metavar="KIND:N:M:SEED", help="generate a graph (kind: random, path, star, grid)")
    p.add_argument("--updates", metavar="FILE", help="update script (inc/dec/del/ins lines)")
    p.add_argument("--delay", default="unit", help="unit or seeded:<seed> (distributed algorithms)")
    p.add_argument("--z", type=int, help="cluster size bound (topo-dmst, dist-dynamic)")
    p.add_argument("--seed", type=int, default=0, help="graph seed when --generate leaves it empty")
    p.add_argument("--sweep", type=int, default=1, metavar="K",
                   help="run K generated graphs with seeds SEED..SEED+K-1")
    p.add_argument("--wakeup", choices=("all", "one"), default="all", help="GHS wakeup regime")
    p.add_argument("--initial", choices=("kruskal", "ghs"), default="kruskal",
                   help="initial tree source for dist-dynamic")
    p.add_argument("--csv", metavar="FILE", help="write the CSV here instead of stdout")
    p.add_argument("--dot", metavar="FILE", help="write the final tree as Graphviz DOT")
    p.add_argument("--trace", metavar="FILE", help="write the message trace as JSON lines")
    p.add_argument("--emit-graph", metavar="FILE", help="write the (generated) graph and stop")
    return p


def _configs(args):
    if args.sweep < 1:
        raise ConfigError("--sweep must be at least 1")
    if args.sweep > 1 and not args.generate:
        raise ConfigError("--sweep needs --generate")
    if args.sweep > 1 and (args.dot or args.trace or args.emit_graph):
        raise ConfigError("--dot, --trace and --emit-graph take a single run")
    if args.graph:
        path = Path(args.graph)
        graphs = [(path.name, args.seed, load_graph(path.read_text()))]
    elif args.generate:
        kind, n, m, seed = parse_generate_spec(args.generate)
        base = args.seed if seed is None else seed
        graphs = []
        for s in range(base, base + args.sweep):
            name = f"{kind}:{n}:{'' if m is None else m}:{s}"
            graphs.append((name, s, generate_graph(kind, n, m, s)))
    else:
        raise ConfigError("give --graph or --generate")
    if args.emit_graph:
        return graphs, []
    if not args.algo:
        raise ConfigError("--algo is required")
    parse_delay(args.delay)
    if args.trace and args.algo not in DISTRIBUTED:
        raise ConfigError("--trace needs a distributed algorithm")
    script = Path(args.updates).read_text() if args.updates else ""
    configs = []
    for name, seed, g in graphs:
        g, steps = load_script(g, script)
        configs.append(ExperimentConfig(args.algo, g, name, steps, args.delay, args.z, seed,
                                        args.wakeup, args.initial))
    return graphs, configs


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        graphs, configs = _configs(args)
        if args.emit_graph:
            Path(args.emit_graph).write_text(save_graph(graphs[0][2]))
            return EXIT_OK
        results = [run_experiment(cfg) for cfg in configs]
    except (ConfigError, GraphError, ValueError, OSError) as exc:
        print(f"dynmst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SimulationError as exc:
        print(f"dynmst: simulation aborted: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    text = csv_text(r.row for r in results)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    last = results[-1]
    if args.dot:
        g = configs[-1].graph
        Path(args.dot).write_text(to_dot(g, last.tree, last.weights, last.last_swap))
    if args.trace:
        Path(args.trace).write_text(last.trace.to_jsonl())
    bad = [r for r in results if not r.ok]
    for r in bad:
        for msg in r.mismatches:
            print(f"dynmst: mismatch on {r.row['graph']}: {msg}", file=sys.stderr)
    return EXIT_MISMATCH if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
