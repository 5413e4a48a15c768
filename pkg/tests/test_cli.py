import json

import pytest

from treepart.cli import main
from treepart.graph import generate, parse_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_then_tw(tmp_path, capsys):
    f = tmp_path / "g.txt"
    assert run(capsys, "gen", "gcl 3 2", "-o", str(f))[0] == 0
    assert parse_graph(f.read_text()) == generate("gcl 3 2")
    code, out, _ = run(capsys, "tw", str(f), "--exact")
    assert code == 0 and out.strip() == "3"


def test_gen_roundtrip_stdout(capsys):
    code, out, _ = run(capsys, "gen", "grid 3 3")
    assert code == 0 and parse_graph(out) == generate("grid 3 3")


def test_partition_then_verify(tmp_path, capsys):
    part = tmp_path / "p.txt"
    code, _, err = run(capsys, "partition", "grid5x5", "--class", "minor-free:3", "--c", "3",
                       "-o", str(part))
    assert code == 0 and "width" in err
    code, out, _ = run(capsys, "verify", "grid5x5", str(part))
    assert code == 0 and json.loads(out)["valid"]


def test_verify_rejects_bad_partition(tmp_path, capsys):
    part = tmp_path / "p.txt"
    run(capsys, "partition", "path 30", "--class", "degree", "-o", str(part))
    code, out, _ = run(capsys, "verify", "cycle 30", str(part))
    assert code == 1 and not json.loads(out)["valid"]


def test_brute_tpw(capsys):
    code, out, _ = run(capsys, "brute", "ccl-2-2", "--tpw", "1")
    assert code == 0 and out.strip() == "3"


def test_brute_disjointed(capsys):
    assert run(capsys, "brute", "path 4", "--disjointed", "1", "2")[0] == 0
    code, out, _ = run(capsys, "brute", "star 3", "--disjointed", "1", "0")
    assert code == 1 and "no" in out


def test_exit_codes(capsys):
    assert run(capsys, "partition", "path 5", "--class", "bogus")[0] == 2
    assert run(capsys, "partition", "star 50", "--class", "k1t:3")[0] == 1
    assert run(capsys, "partition", "grid 3 3", "--class", "minor-free:3", "--c", "1")[0] == 2
    assert run(capsys, "tw")[0] == 2
    assert run(capsys, "tw", "no-such-family 3")[0] == 2


def test_budget_override(capsys):
    code, _, err = run(capsys, "--budgets", "tw=5", "tw", "path 8")
    assert code == 1 and "budget" in err
    assert run(capsys, "--budgets", "tw=5", "tw", "path 8", "--heuristic")[1].strip() == "1"


def test_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("TREEPART_BUDGETS", "tw=5")
    assert run(capsys, "tw", "path 8")[0] == 1


def test_bench(tmp_path, capsys):
    suite = tmp_path / "suite.txt"
    suite.write_text("# sample\ndegree grid 4 4\nouter-k:1 rand-outer 15 1 2\npath:4 ccl 1 3\n")
    csv_out, json_out = tmp_path / "o.csv", tmp_path / "o.json"
    code, _, _ = run(capsys, "bench", str(suite), "--csv", str(csv_out), "--json", str(json_out))
    assert code == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0].startswith("# treepart-experiment") and len(lines) == 5
    assert len(json.loads(json_out.read_text())["rows"]) == 3


def test_outer_partition_with_drawing(tmp_path, capsys):
    g, d = tmp_path / "g.txt", tmp_path / "d.txt"
    assert run(capsys, "gen", "rand-outer 20 1 7", "-o", str(g), "--drawing-out", str(d))[0] == 0
    assert run(capsys, "partition", str(g), "--class", "outer-k:1", "--drawing", str(d))[0] == 0
    assert run(capsys, "partition", str(g), "--class", "outer-k:1")[0] == 2


def test_deterministic(capsys):
    a = run(capsys, "gen", "rand-deg 30 3", "--seed", "9")
    b = run(capsys, "--seed", "9", "gen", "rand-deg 30 3")
    c = run(capsys, "--seed", "9", "gen", "rand-deg 30 3")
    assert b == c and b[1] != ""
