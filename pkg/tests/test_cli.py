import csv
import io
import json
import subprocess
import sys

import pytest

from deformosc import harness
from deformosc.cli import main, render
from deformosc.errors import DomainError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines()]


def test_spectrum1d_conventional(capsys):
    code, out, _ = run(capsys, "spectrum1d", "--alpha", "0", "--beta", "0", "--efield", "0", "--levels", "3")
    assert code == 0
    rows = jsonl(out)
    assert [r["energy"] for r in rows] == [0.5, 1.5, 2.5]
    assert all(r["schema"] == 1 and r["cmd"] == "spectrum1d" for r in rows)
    assert all("delta" not in r for r in rows)


def test_spectrum1d_verify(capsys):
    code, out, _ = run(capsys, "spectrum1d", "--alpha", "0.1", "--beta", "0.1", "--efield", "0.5",
                       "--levels", "10", "--verify")
    assert code == 0
    rows = jsonl(out)
    assert len(rows) == 10
    assert all(abs(r["delta"]) <= 1e-7 and r["converged"] for r in rows)


def test_spectrum1d_alpha0_shift(capsys):
    code, out, _ = run(capsys, "spectrum1d", "--mode", "alpha0", "--beta", "0.2", "--efield", "0.7", "--levels", "5")
    assert code == 0
    rows = jsonl(out)
    assert all(r["correction"] == pytest.approx(-0.245, abs=1e-12) for r in rows)


def test_states1d_examples(capsys):
    code, out, _ = run(capsys, "states1d", "--alpha", "0.1", "--beta", "0.1", "--efield", "0", "--n", "2")
    assert code == 0
    c = jsonl(out)[0]["coeffs"]
    assert c[2] == pytest.approx(1.0, abs=1e-15)
    assert max(abs(x) for i, x in enumerate(c) if i != 2) <= 1e-15
    code, out, _ = run(capsys, "states1d", "--alpha", "0.15", "--beta", "0.25", "--efield", "0.4", "--n", "1",
                       "--check-closed-form", "--verify-eigen")
    r = jsonl(out)[0]
    assert code == 0 and r["pn_match"] and r["residual"] <= 1e-8


def test_spectrumdd_examples(capsys):
    code, out, _ = run(capsys, "spectrumdd", "--dim", "3", "--beta", "0", "--betap", "0", "--nmax", "2", "--l", "1")
    assert code == 0
    assert [r["energy"] for r in jsonl(out)] == [2.5, 4.5, 6.5]
    code, out, _ = run(capsys, "spectrumdd", "--dim", "3", "--l", "0", "--beta", "0.05", "--betap", "0.05",
                       "--nmax", "3", "--verify")
    assert code == 0
    assert all(abs(r["delta"]) <= 1e-6 for r in jsonl(out))


def test_radialwf_csv(capsys):
    code, out, _ = run(capsys, "radialwf", "--dim", "3", "--l", "1", "--beta", "0.05", "--betap", "0.05",
                       "--n", "1", "--pmax", "5", "--points", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["P"]) for r in rows] == [1.25, 2.5, 3.75, 5.0]
    assert {"chi", "R", "ok"} <= set(rows[0])


def test_exit_code_domain_error(capsys):
    code, _, err = run(capsys, "spectrum1d", "--alpha", "2", "--beta", "0.6")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "spectrum1d", "--alpha", "0.1", "--beta", "0.2", "--mode", "equal")
    assert code == 2
    code, _, _ = run(capsys, "states1d", "--alpha", "0.1", "--beta", "0.2", "--n", "4", "--check-closed-form")
    assert code == 2


def test_exit_code_verification_failure(capsys):
    code, out, _ = run(capsys, "spectrum1d", "--alpha", "0.1", "--beta", "0.4", "--efield", "1",
                       "--levels", "3", "--verify", "--tol", "1e-30")
    assert code == 3
    assert not all(r["ok"] for r in jsonl(out))


def test_out_file_and_timing(tmp_path, capsys):
    path = tmp_path / "o.jsonl"
    code, out, err = run(capsys, "spectrum1d", "--alpha", "0.1", "--beta", "0.2", "--levels", "2",
                         "--out", str(path), "--timing")
    assert code == 0 and out == ""
    assert len(jsonl(path.read_text())) == 2
    assert "wall_time_s" in err


def _write_spec(tmp_path, spec):
    p = tmp_path / "sweep.json"
    p.write_text(json.dumps(spec))
    return str(p)


def test_sweep_rows_per_point_and_level(tmp_path, capsys):
    spec = {"kind": "1d", "params": {"alpha": [0.1, 0.2], "beta": {"start": 0.1, "stop": 0.3, "steps": 3},
                                     "efield": 0.5}, "levels": 4}
    code, out, _ = run(capsys, "sweep", _write_spec(tmp_path, spec))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2 * 3 * 4
    assert [(float(r["alpha"]), float(r["beta"]), int(r["n"])) for r in rows[:5]] == [
        (0.1, 0.1, 0), (0.1, 0.1, 1), (0.1, 0.1, 2), (0.1, 0.1, 3), (0.1, 0.2, 0)]


def test_sweep_radial_with_oracle(tmp_path, capsys):
    spec = {"kind": "radial", "params": {"beta": 0.05, "betap": 0.05}, "l": [0, 1], "levels": 2,
            "oracle": True, "dim": 3}
    code, out, _ = run(capsys, "sweep", _write_spec(tmp_path, spec), "--format", "jsonl")
    assert code == 0
    rows = jsonl(out)
    assert [(r["l"], r["n"]) for r in rows] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(abs(r["delta"]) <= 1e-6 for r in rows)


def test_sweep_bad_point_and_bad_spec(tmp_path, capsys):
    spec = {"kind": "1d", "params": {"alpha": [0.1, 2.0], "beta": 0.6}, "levels": 2}
    code, out, _ = run(capsys, "sweep", _write_spec(tmp_path, spec), "--format", "jsonl")
    assert code == 2
    rows = jsonl(out)
    assert rows[-1]["error"] and rows[-1]["alpha"] == 2.0
    code, _, _ = run(capsys, "sweep", _write_spec(tmp_path, {"kind": "3d", "params": {}}))
    assert code == 2
    code, _, _ = run(capsys, "sweep", _write_spec(tmp_path, {"kind": "1d", "params": {"gamma": 1}}))
    assert code == 2
    code, _, _ = run(capsys, "sweep", _write_spec(tmp_path, {"kind": "1d", "params": {"alpha": []}}))
    assert code == 2


def test_sweep_order_independent_of_threads(tmp_path, monkeypatch):
    spec = harness.SweepSpec.from_dict({"kind": "1d", "params": {"alpha": [0.05, 0.1, 0.2, 0.3],
                                                                 "beta": [0.1, 0.4]}, "levels": 3})
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("DOT_MAX_THREADS", threads)
        assert harness.max_threads() == int(threads)
        outs.append(render([r.flat() for r in harness.sweep(spec)], "csv"))
    assert outs[0] == outs[1]
    monkeypatch.setenv("DOT_MAX_THREADS", "many")
    with pytest.raises(DomainError):
        harness.max_threads()


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify-all")
    assert code == 0
    rows = jsonl(out)
    assert len(rows) == 7 and all(r["ok"] for r in rows)


def test_render_csv_encodes_lists():
    text = render([{"a": 1, "v": [1.0, 2.0]}, {"a": 2, "b": None}], "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert json.loads(rows[0]["v"]) == [1.0, 2.0]
    assert rows[1]["b"] == ""


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "deformosc", "spectrum1d", "--alpha", "0.1", "--beta", "0.3",
            "--efield", "0.2", "--levels", "4", "--format", "csv"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") == 5
