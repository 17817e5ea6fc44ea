import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from eulerlab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run

DEMO_PROBLEMS = Path(__file__).resolve().parents[1] / "demos" / "problems"
SUBCOMMANDS = ("catalog", "solve", "verify", "barrier", "kernel", "transform")


def test_help_lists_subcommands():
    out = subprocess.run([sys.executable, "-m", "eulerlab", "--help"], capture_output=True,
                         text=True)
    assert out.returncode == 0
    for name in SUBCOMMANDS:
        assert name in out.stdout


def test_catalog_list(capsys):
    assert run(["catalog", "--list"]) == EXIT_OK
    lines = [ln for ln in capsys.readouterr().out.splitlines() if ln.strip()]
    assert len(lines) >= 13


def test_catalog_check_and_sample(tmp_path):
    assert run(["catalog", "--check", "--out", str(tmp_path / "cat.jsonl")]) == EXIT_OK
    recs = [json.loads(ln) for ln in (tmp_path / "cat.jsonl").read_text().splitlines()]
    assert len(recs) >= 13 and all(r["ok"] for r in recs)
    assert run(["catalog", "--sample", "power_quarter", "--grid", "11,11",
                "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "power_quarter.csv").exists()


def test_verify_harnack_jsonl(tmp_path):
    out = tmp_path / "h.jsonl"
    assert run(["verify", "--suite", "harnack", "--seed", "1163091269", "--out", str(out)]) \
        == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 52
    assert all(json.loads(ln)["passed"] for ln in lines)


def test_verify_is_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for p in (a, b):
        assert run(["verify", "--suite", "unspecifiability", "--seed", "7", "--out", str(p)]) \
            == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_barrier_origin_value(tmp_path):
    out = tmp_path / "b.csv"
    assert run(["barrier", "--name", "harnack_lower", "--y0", "1", "--lambda", "2",
                "--out", str(out)]) == EXIT_OK
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    row = data[(data[:, 0] == 0) & (data[:, 1] == 0)]
    assert row.shape == (1, 3)
    assert abs(row[0, 2] - 1 / 9) <= 1e-10


def test_barrier_even_grid_is_usage_error(tmp_path):
    assert run(["barrier", "--name", "harnack_lower", "--grid", "80,41",
                "--out", str(tmp_path)]) == EXIT_USAGE


def test_solve_problem(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["solve", "--problem", str(DEMO_PROBLEMS / "abreu_linear.yaml"),
                "--out", str(out)]) == EXIT_OK
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert np.max(np.abs(data[:, 2] - data[:, 0])) < 1e-10
    assert (tmp_path / "s_report.csv").exists()


def test_solve_missing_file(tmp_path):
    assert run(["solve", "--problem", str(tmp_path / "nope.yaml")]) == EXIT_USAGE
    assert run(["solve"]) == EXIT_USAGE


def test_kernel_and_divergence(tmp_path):
    assert run(["kernel", "--b2", "0.5", "--f0", "gauss", "--grid", "9,5",
                "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "kernel_gauss.csv").exists()
    assert run(["kernel", "--b2", "1.0", "--out", str(tmp_path)]) == EXIT_FAIL


def test_transform_consistency_and_points(tmp_path):
    assert run(["transform", "--name", "sabr", "--beta", "0.5", "--out", str(tmp_path)]) == EXIT_OK
    out = tmp_path / "c.csv"
    assert run(["transform", "--name", "sabr", "--beta", "0.5", "--points", "0,1",
                "--out", str(out)]) == EXIT_OK
    row = np.loadtxt(out, delimiter=",", skiprows=1)
    assert row[3] == pytest.approx(-0.5)


def test_usage_errors():
    assert run(["nonsense"]) == EXIT_USAGE
    assert run(["transform", "--name", "nope"]) == EXIT_USAGE
    assert run(["catalog", "--list", "--bogus"]) == EXIT_USAGE
