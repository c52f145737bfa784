import csv
import io
import random

import pytest

import dynmst.experiment as experiment
from dynmst.cli import main
from dynmst.experiment import CSV_FIELDS
from dynmst.generators import generate, generate_graph
from dynmst.graph import GraphError, SpanningTree, load_graph, save_graph

HEADER = ("graph,algorithm,n,m,seed,delay,z,updates,swaps,tree_weight,oracle_weight,messages,"
          "message_bound,within_bound,completion_time,messages_by_type,oracle_match")

TRIANGLE = "3 3\n0 1 1.0 e0\n1 2 2.0 e1\n0 2 3.0 e2\n"


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text(TRIANGLE)
    return p


def mixed_script(g, count, seed):
    """inc/dec lines that keep every weight distinct and positive."""
    rng = random.Random(seed)
    weights = {e.id: e.weight for e in g}
    lines = []
    for _ in range(count):
        eid = rng.choice(sorted(weights))
        while True:
            delta = round(rng.uniform(0.5, 300.0), 4)
            op = rng.choice(("inc", "dec")) if weights[eid] - delta > 0 else "inc"
            new = weights[eid] + delta if op == "inc" else weights[eid] - delta
            if new not in weights.values():
                break
        weights[eid] = new
        lines.append(f"{op} {eid} {delta}")
    return "\n".join(lines) + "\n"


def test_csv_header_is_stable():
    assert ",".join(CSV_FIELDS) == HEADER


def test_kruskal_on_triangle(capsys, tri_file):
    code, out, _ = run_cli(capsys, "--algo", "kruskal", "--graph", tri_file)
    assert code == 0
    assert out.splitlines()[0] == HEADER
    (row,) = rows(out)
    assert row["oracle_match"] == "true" and row["tree_weight"] == "3.0" and row["n"] == "3"


@pytest.mark.parametrize("algo", ["kruskal", "prim", "resp-dmst", "topo-dmst", "dist-dynamic"])
def test_every_algorithm_with_script(capsys, tmp_path, tri_file, algo):
    script = tmp_path / "ups.txt"
    script.write_text("inc e1 30\ndel e0\nins 0 1 0.25 e0\ndec e2 2.5\n")
    code, out, err = run_cli(capsys, "--algo", algo, "--graph", tri_file, "--updates", script)
    assert code == 0, err
    (row,) = rows(out)
    assert row["updates"] == "4" and row["tree_weight"] == row["oracle_weight"] == "0.75"


@pytest.mark.slow
def test_ghs_sweep_of_200(capsys):
    code, out, _ = run_cli(capsys, "--algo", "ghs", "--generate", "random:16:40:", "--seed", "1", "--sweep", "200",
                           "--delay", "seeded:3")
    table = rows(out)
    assert code == 0 and len(table) == 200
    assert all(r["oracle_match"] == "true" and r["within_bound"] == "true" for r in table)
    assert all(int(r["messages"]) <= int(r["message_bound"]) for r in table)
    assert len({r["graph"] for r in table}) == 200


def test_resp_dmst_long_script(capsys, tmp_path):
    g = generate_graph("random", 12, 30, 5)
    graph = tmp_path / "g.txt"
    graph.write_text(save_graph(g))
    script = tmp_path / "ups.txt"
    script.write_text(mixed_script(g, 1000, 5))
    code, out, _ = run_cli(capsys, "--algo", "resp-dmst", "--graph", graph, "--updates", script)
    (row,) = rows(out)
    assert code == 0 and row["updates"] == "1000"
    assert row["tree_weight"] == row["oracle_weight"] and row["oracle_match"] == "true"


def test_mismatch_exits_2(capsys, tri_file, monkeypatch):
    g = load_graph(TRIANGLE)
    monkeypatch.setattr(experiment, "prim", lambda graph: SpanningTree(g, {"e0", "e2"}))
    code, out, err = run_cli(capsys, "--algo", "prim", "--graph", tri_file)
    assert code == 2 and rows(out)[0]["oracle_match"] == "false" and "mismatch" in err


@pytest.mark.parametrize("argv", [
    ["--algo", "kruskal"],
    ["--algo", "nope", "--generate", "path:4::1"],
    ["--algo", "kruskal", "--generate", "random:8:4:1"],
    ["--algo", "kruskal", "--generate", "blob:8:10:1"],
    ["--algo", "kruskal", "--generate", "random:8"],
    ["--algo", "ghs", "--generate", "path:4::1", "--delay", "gaussian"],
    ["--algo", "kruskal", "--generate", "path:4::1", "--trace", "t.jsonl"],
    ["--algo", "resp-dmst", "--generate", "path:4::1", "--z", "3"],
    ["--algo", "kruskal", "--graph", "/nonexistent/graph.txt"],
    ["--generate", "path:4::1"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and "error" in err


def test_updates_rejected_for_static_protocols(capsys, tmp_path, tri_file):
    script = tmp_path / "ups.txt"
    script.write_text("inc e0 5\n")
    code, _, err = run_cli(capsys, "--algo", "ghs", "--graph", tri_file, "--updates", script)
    assert code == 1 and "does not take updates" in err


def test_duplicate_weight_from_script(capsys, tmp_path, tri_file):
    script = tmp_path / "ups.txt"
    script.write_text("inc e0 1\n")
    code, _, err = run_cli(capsys, "--algo", "kruskal", "--graph", tri_file, "--updates", script)
    assert code == 1 and "already in use" in err


def test_generate_examples(capsys, tmp_path):
    assert load_graph(generate("path", 4, None, 0)).m == 3
    with pytest.raises(GraphError):
        generate("random", 8, 4, 1)
    assert generate("random", 32, 96, 7) == generate("random", 32, 96, 7)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for p in (a, b):
        assert run_cli(capsys, "--generate", "random:32:96:7", "--emit-graph", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    g = load_graph(a.read_text())
    assert g.n == 32 and g.m == 96 and g.is_connected()
    assert len({e.weight for e in g}) == 96


def test_outputs_are_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        base = tmp_path / str(k)
        base.mkdir()
        script = base / "ups.txt"
        script.write_text("inc e3 400\ndel e5\ndec e7 0.5\n")
        code, _, _ = run_cli(capsys, "--algo", "dist-dynamic", "--generate", "random:16:30:2", "--updates", script,
                             "--delay", "seeded:9", "--csv", base / "out.csv", "--trace", base / "t.jsonl",
                             "--dot", base / "g.dot")
        assert code == 0
        outs.append([(base / f).read_bytes() for f in ("out.csv", "t.jsonl", "g.dot")])
    assert outs[0] == outs[1]


def test_dot_marks_last_swap(capsys, tmp_path, tri_file):
    script = tmp_path / "ups.txt"
    script.write_text("inc e1 30\n")
    dot = tmp_path / "g.dot"
    assert run_cli(capsys, "--algo", "topo-dmst", "--graph", tri_file, "--updates", script, "--dot", dot)[0] == 0
    text = dot.read_text()
    assert 'label="e1:32.0", style=dashed, color=red' in text
    assert 'label="e2:3.0", style=solid, color=blue' in text


def test_messages_by_type_column(capsys, tri_file):
    code, out, _ = run_cli(capsys, "--algo", "chin-ting", "--graph", tri_file, "--wakeup", "one")
    (row,) = rows(out)
    counts = dict(kv.split("=") for kv in row["messages_by_type"].split(";"))
    assert code == 0 and sum(map(int, counts.values())) == int(row["messages"])
    assert row["delay"] == "unit" and row["completion_time"]
