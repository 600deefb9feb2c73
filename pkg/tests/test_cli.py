import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from noon_ent.cli import EXIT_ENTANGLED, EXIT_ERROR, EXIT_INCONCLUSIVE, main
from noon_ent.fock import make_noisy_noon, noon_state, to_spec


@pytest.fixture
def spec_file(tmp_path):
    def write(op, name="state.json"):
        p = tmp_path / name
        p.write_text(json.dumps(to_spec(op)))
        return str(p)

    return write


def test_analyze_entangled(spec_file, capsys):
    code = main(["analyze", spec_file(noon_state(2))])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_ENTANGLED
    assert out["verdict"] == "entangled"
    assert out["witness"]["value"] == pytest.approx(-0.5)
    assert out["min_weight"] == pytest.approx(-0.25)
    assert out["ppt_min"] == pytest.approx(-0.5)


def test_analyze_separable(spec_file, capsys):
    code = main(["analyze", spec_file(noon_state(2, coherence=0.0))])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_INCONCLUSIVE
    assert out["verdict"] == "inconclusive"


def test_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.json")]) == EXIT_ERROR
    assert main(["sweep", "--start", "1", "--stop", "0", "--steps", "3"]) == EXIT_ERROR
    assert main(["bogus"]) == EXIT_ERROR


def test_non_state_rejected(spec_file, capsys):
    op = make_noisy_noon(0.0, [0.0, 0.0], [0.0, 0.0], [0.0, 1.0])
    assert main(["analyze", spec_file(op)]) == EXIT_ERROR


def test_witness_override(spec_file, capsys):
    path = spec_file(noon_state(2, coherence=0.2))
    assert main(["witness", path, "--g-sup", "0.05"]) == EXIT_ENTANGLED
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(-0.15)
    assert main(["witness", path]) == EXIT_INCONCLUSIVE


def test_sep_solve_both_solvers(spec_file, capsys):
    op = make_noisy_noon(0.0, [0.0, 0.0], [0.0, 0.0], [0.0, 1.0])
    path = spec_file(op)
    assert main(["sep-solve", path]) == 0
    analytic = json.loads(capsys.readouterr().out)
    assert main(["sep-solve", path, "--numeric", "--restarts", "4"]) == 0
    numeric = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(analytic["g_values"], [-0.5, 0.0, 0.5], atol=1e-12)
    np.testing.assert_allclose(numeric["g_values"], analytic["g_values"], atol=1e-6)


def test_quasiprob_csv(spec_file, tmp_path):
    out = tmp_path / "q.csv"
    assert main(["--format", "csv", "--out", str(out), "quasiprob", spec_file(noon_state(1))]) == EXIT_ENTANGLED
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["label", "weight"]
    assert len(rows) == 13


def sweep_args(param, start, stop, steps, *extra):
    return ["sweep", "--param", param, "--start", str(start), "--stop", str(stop), "--steps", str(steps), *extra]


def test_sweep_delta_crossing(capsys):
    assert main(sweep_args("delta", 0.0, 1.0, 101, "--N", "2")) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0]) == ["delta", "witness_value", "min_weight", "ppt_min"]
    x = np.array([float(r["delta"]) for r in rows])
    w = np.array([float(r["witness_value"]) for r in rows])
    cross = x[np.argmax(w > 0)]
    assert abs(cross - np.sqrt(2 * np.log(2)) / 2) <= x[1] - x[0]


def test_sweep_t4_moment(capsys):
    assert main(sweep_args("t4_moment", 0.0, 1.0, 11)) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    for r in rows:
        t4 = float(r["t4_moment"])
        assert float(r["witness_value"]) == pytest.approx(0.25 - t4 / 2, abs=1e-11)
        assert float(r["min_weight"]) == pytest.approx(-t4 / 4, abs=1e-11)


def test_sweep_is_byte_identical(tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "4", "4"):
        monkeypatch.setenv("NOON_ENT_THREADS", threads)
        path = tmp_path / f"s{len(outs)}.csv"
        assert main(["--out", str(path), *sweep_args("lambda", 0.0, 1.0, 21, "--N", "3")]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_sweep_subprocess_identical():
    cmd = [sys.executable, "-m", "noon_ent.cli", *sweep_args("delta", 0.0, 0.8, 9)]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"delta,")


def test_tripartite_sweep(capsys):
    assert main(["tripartite", "--param", "lambda", "--start", "0", "--stop", "1", "--steps", "5"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0]) == ["lambda", "partial_value", "full_value"]
    for r in rows:
        lam = float(r["lambda"])
        assert float(r["partial_value"]) == pytest.approx(-(4 * lam + 1) / 9, abs=1e-11)
        assert float(r["full_value"]) == pytest.approx(-(4 * lam - 1) / 9, abs=1e-11)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("NOON_ENT_THREADS", "many")
    assert main(sweep_args("lambda", 0.0, 1.0, 3)) == EXIT_ERROR
