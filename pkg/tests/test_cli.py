from __future__ import annotations

import argparse
import json
import subprocess
import sys

import pytest

from cancel_codes import cli
from cancel_codes.family import format_fam, read_family, write_family
from cancel_codes.predicates import G6, is_t_cancellative


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def g6_file(tmp_path):
    p = tmp_path / "g6.fam"
    write_family(G6, p)
    return p


def test_verify_exit_codes(capsys, tmp_path, g6_file):
    code, out, _ = run(capsys, "verify", g6_file, "--property", "canc:2")
    assert code == 1 and out.startswith("violated canc:2")
    code, out, _ = run(capsys, "verify", g6_file, "--property", "canc:1")
    assert code == 0 and out.strip() == "holds canc:1"
    code, out, _ = run(capsys, "verify", g6_file, "--property", "g6g7")
    assert code == 1
    code, out, _ = run(capsys, "verify", g6_file, "--property", "rpartite:3")
    assert code == 0 and out.startswith("holds rpartite:3\npartition:")

    bad = tmp_path / "short.fam"
    bad.write_text("5 3\n0 1 2\n1 2 3\n")
    code, _, err = run(capsys, "verify", bad, "--property", "canc:1")
    assert code == 2 and "line 4" in err
    code, _, err = run(capsys, "verify", g6_file, "--property", "canc")
    assert code == 2 and "bad property" in err
    code, _, _ = run(capsys, "verify", tmp_path / "missing.fam", "--property", "canc:1")
    assert code == 2


def test_verify_json_witness(capsys, g6_file):
    code, out, _ = run(capsys, "verify", g6_file, "--property", "canc:2", "--json")
    assert code == 1
    d = json.loads(out)
    assert d["holds"] is False and d["property"] == "canc:2"
    assert len(d["members"]) == len(d["indices"]) >= 3


def test_construct_algebraic_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "algebraic", "--q", 5, "--k", 2)
    assert code == 0
    head = out.splitlines()[0]
    assert head == "20 25"
    assert all(len(line.split()) == 4 for line in out.splitlines()[1:])


@pytest.mark.parametrize(
    "argv,prop,size",
    [
        (["algebraic", "--q", 4, "--k", 2], "canc:2", 16),
        (["algebraic", "--q", 5, "--k", 2, "--set", "0;1;3;4"], "canc:2", 25),
        (["tolhuizen", "--n", 9, "--r", 3, "--seed", 1, "--coset"], "canc:1", None),
        (["rpartite", "--n", 7, "--r", 3], "canc:1", 12),
        (["packing4", "--n", 13, "--seed", 2], "canc:2", None),
        (["hk", "--n", 26, "--k", 3, "--seed", 0], "canc:2", None),
    ],
)
def test_construct_then_verify(capsys, tmp_path, argv, prop, size):
    out = tmp_path / "f.fam"
    code, text, _ = run(capsys, "construct", *argv, "--out", out)
    assert code == 0 and text.startswith("wrote")
    meta = json.loads((tmp_path / "f.fam.json").read_text())
    assert meta["property"] == prop and meta["verified"] is True
    F = read_family(out)
    assert meta["members"] == len(F)
    if size is not None:
        assert len(F) == size
    code, text, _ = run(capsys, "verify", out, "--property", prop)
    assert code == 0, text


def test_construct_needs_seed(capsys):
    for argv in (["tolhuizen", "--n", 9, "--r", 3], ["packing4", "--n", 9], ["hk", "--n", 26, "--k", 3]):
        code, _, err = run(capsys, "construct", *argv)
        assert code == 2 and "--seed" in err
    code, _, err = run(capsys, "construct", "algebraic", "--q", 5)
    assert code == 2
    # library failures are a separate exit code
    code, _, err = run(capsys, "construct", "algebraic", "--q", 5, "--k", 3)
    assert code == 3 and "UniverseTooSmall" in err


def test_construct_tolhuizen_metadata(capsys, tmp_path):
    out = tmp_path / "t.fam"
    code, _, _ = run(capsys, "construct", "tolhuizen", "--n", 12, "--r", 4, "--seed", 0, "--out", out)
    assert code == 0
    meta = json.loads((tmp_path / "t.fam.json").read_text())
    assert meta["target"] == 143 and meta["meets_target"] and meta["members"] >= 143
    assert meta["members"] == meta["family_size"]


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--n", 5, "--r", 2, "--t", 2, "--property", "canc")
    assert code == 0 and out.splitlines()[0] == "4 exact"
    w = tmp_path / "w.fam"
    code, out, _ = run(capsys, "search", "--n", 5, "--r", 3, "--t", 1, "--json", "--emit", w)
    d = json.loads(out)
    assert d["optimum"] == 4 and d["status"] == "exact"
    assert len(read_family(w)) == 4 and is_t_cancellative(read_family(w), 1)
    code, out, _ = run(capsys, "search", "--n", 8, "--r", 3, "--t", 1, "--node-budget", 20)
    assert code == 0 and out.split()[1] == "lower-bound"
    code, _, _ = run(capsys, "search", "--n", 5, "--property", "nonsense:1")
    assert code == 2


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--which", "c0", "--tol", "1e-6")
    assert code == 0 and out.split()[1].startswith("0.288788")
    assert "error bound" in out
    code, out, _ = run(capsys, "bound", "--which", "eq7", "--n", 7, "--k", 1, "--json")
    assert json.loads(out)["value"] == "28/3"
    code, out, _ = run(capsys, "bound", "--which", "pr", "--n", 7, "--r", 3)
    assert out.split()[1] == "12"
    code, _, err = run(capsys, "bound", "--which", "uniform-even", "--n", 7)
    assert code == 2 and "--k" in err
    code, _, err = run(capsys, "bound", "--which", "thm2", "--n", 10, "--t", 3)
    assert code == 3 and "OutOfRegime" in err


def test_goodset(capsys):
    code, out, _ = run(capsys, "goodset", "--q", 11, "--k", 3, "--seed", 1)
    assert code == 0 and out.splitlines() == ["0;1;2;3;4;9", "tried 1"]
    code, _, err = run(capsys, "goodset", "--q", 7, "--k", 3, "--seed", 0)
    assert code == 3 and "SearchExhausted" in err


def test_manifest_and_replay(capsys, tmp_path):
    out = tmp_path / "a.fam"
    man = tmp_path / "m.json"
    code, _, _ = run(capsys, "construct", "algebraic", "--q", 7, "--k", 2, "--seed", 3, "--out", out, "--manifest", man)
    assert code == 0
    m = json.loads(man.read_text())
    assert m["subcommand"] == "construct" and m["seed"] == 3 and "--manifest" not in m["argv"]
    assert set(m["outputs"]) == {str(out), str(out) + ".json"}
    for key in ("params", "version", "inputs", "exit_code", "wall_time"):
        assert key in m
    first = out.read_bytes()
    code, text, _ = run(capsys, "replay", man)
    assert code == 0 and text.strip().endswith("replay identical")
    assert out.read_bytes() == first
    # tampering with a recorded digest is detected
    m["outputs"][str(out)] = "0" * 64
    man.write_text(json.dumps(m))
    code, text, _ = run(capsys, "replay", man)
    assert code == 1 and "DIFFERENT" in text


def test_verify_manifest_records_input(capsys, tmp_path, g6_file):
    man = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", g6_file, "--property", "canc:2", "--manifest", man)
    m = json.loads(man.read_text())
    assert code == m["exit_code"] == 1
    assert list(m["inputs"]) == [str(g6_file)]


def test_report_writes_csv_and_png(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--out-dir", tmp_path, "--n-max", 3, "--uniform-n-max", 5)
    assert code == 0
    for name in ("nonuniform.csv", "uniform.csv", "optima.png"):
        assert (tmp_path / name).stat().st_size > 0
    assert (tmp_path / "optima.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    header = (tmp_path / "nonuniform.csv").read_text().splitlines()[0]
    assert header.startswith("n,t,")


def test_threads_from_environment(monkeypatch, capsys):
    ns = argparse.Namespace(threads=None)
    monkeypatch.setenv("CANCEL_CODES_THREADS", "2")
    assert cli._threads(ns) == 2
    assert cli._threads(argparse.Namespace(threads=3)) == 3
    monkeypatch.setenv("CANCEL_CODES_THREADS", "junk")
    assert cli._threads(ns) == 1
    monkeypatch.setenv("CANCEL_CODES_THREADS", "2")
    code, out, _ = run(capsys, "search", "--n", 6, "--r", 3, "--t", 1)
    assert out.splitlines()[0] == "8 exact"


def test_module_entry_point(tmp_path):
    p = tmp_path / "x.fam"
    p.write_text(format_fam(G6))
    proc = subprocess.run([sys.executable, "-m", "cancel_codes", "verify", str(p), "--property", "canc:2"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "cancel_codes", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().endswith("0.1.0")
