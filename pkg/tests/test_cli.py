from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from numrange.fileio import matrix_to_json

from conftest import run_cli


@pytest.fixture
def diag_file(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(matrix_to_json(np.diag([0, 1, 1j])))
    return path


def test_boundary_csv(diag_file, tmp_path):
    code, out, err = run_cli("boundary", "--input", str(diag_file), "--grid", "8",
                             "--svg", str(tmp_path / "b.svg"))
    assert code == 0 and err == ""
    rows = out.strip().splitlines()
    assert rows[0] == "theta,mu,multiplicity,px,py,flat"
    first = rows[1].split(",")
    assert first[:3] == ["0", "1", "1"]
    assert (tmp_path / "b.svg").read_text().startswith("<svg")


def test_outputs_are_deterministic(diag_file):
    a = run_cli("boundary", "--input", str(diag_file), "--grid", "64", "--refine")
    b = run_cli("boundary", "--input", str(diag_file), "--grid", "64", "--refine")
    assert a == b
    c = run_cli("ess", "--family", "diagonal:i-over-k", "--schedule", "8:16,16:32,32:64")
    d = run_cli("ess", "--family", "diagonal:i-over-k", "--schedule", "8:16,16:32,32:64")
    assert c == d


def test_out_file(diag_file, tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run_cli("boundary", "--input", str(diag_file), "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("theta,")


def test_branches_csv_has_hf_line():
    code, out, _ = run_cli("branches", "--gallery", "ellipse2x2", "--step", "0.01", "--top", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,branch,lambda,zx,zy,is_top"
    assert lines[-1].startswith("# hellmann-feynman max deviation:")
    dev = float(lines[-1].split(":")[1].split()[0])
    assert dev < 1e-3


def test_ess_with_checks():
    code, out, _ = run_cli("ess", "--family", "diagonal:one-then-i-over-k", "--check-theta", "0",
                           "--check-theta", str(-math.pi / 2))
    doc = json.loads(out)
    assert code == 0
    assert [c["verdict"] for c in doc["checks"]] == ["discrete", "essential"]
    assert doc["oracle"] == {"polygon": [[0.0, 0.0]]}


def test_anderson_matrix_and_family():
    code, out, _ = run_cli("anderson", "--gallery", "roots-of-unity(5)", "--curve", "circle:1",
                           "--grid", "256")
    assert code == 0 and json.loads(out)["touch_count"] == 5
    code, out, _ = run_cli("anderson", "--family", "shift:unit", "--curve", "circle:1",
                           "--schedule", "16:32,32:64,64:128")
    assert code == 0 and json.loads(out)["verdict_record"] == "hypothesis-failure"


def test_segment_and_empty():
    code, out, _ = run_cli("segment", "--gallery", "example3", "--from", "0,0", "--to", "2,0")
    assert code == 0
    a, b = out.split()
    assert a == "0,0"
    assert abs(float(b.split(",")[0]) - 1) < 1e-8
    code, out, _ = run_cli("segment", "--gallery", "example3", "--from", "2,2", "--to", "3,3")
    assert code == 0 and out == "empty\n"


def test_gallery_list_and_emit(tmp_path):
    code, out, _ = run_cli("gallery", "list")
    assert code == 0 and "example1" in out and "ellipse2x2" in out
    code, out, _ = run_cli("gallery", "emit", "jordan(3)")
    doc = json.loads(out)
    assert doc["n"] == 3 and doc["entries"][0][1] == [1.0, 0.0]


@pytest.mark.parametrize("argv, code", [
    (["boundary"], 2),
    (["boundary", "--gallery", "nope"], 2),
    (["boundary", "--input", "/does/not/exist.json"], 2),
    (["boundary", "--gallery", "example1"], 2),
    (["gallery", "emit", "example1"], 2),
    (["anderson", "--gallery", "roots-of-unity(4)", "--curve", "circle:0.5"], 4),
    (["anderson", "--gallery", "example3", "--curve", "ellipse:1:2"], 2),
    (["segment", "--gallery", "example3", "--from", "1,1", "--to", "1,1"], 2),
    (["ess", "--family", "diagonal:unknown"], 2),
    (["ess", "--family", "shift:unit", "--schedule", "4:2"], 2),
    (["branches", "--gallery", "disk2x2", "--step", "-1"], 2),
])
def test_exit_codes_and_quiet_stdout(argv, code):
    got, out, err = run_cli(*argv)
    assert got == code
    assert out == ""


def test_bad_matrix_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "entries": [[[1, 0]]]}')
    code, out, err = run_cli("boundary", "--input", str(bad))
    assert code == 2 and out == "" and "row" in err


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "numrange.cli", "gallery", "list"],
                         capture_output=True, text=True, check=True)
    assert "jordan(n)" in out.stdout
