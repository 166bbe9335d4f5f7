import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from coinwalk import cli
from coinwalk.distribution import Distribution
from coinwalk.errors import InvariantError


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "position,probability"
    return {int(x): float(p) for x, p in (ln.split(",") for ln in lines[1:])}


def test_exact_default_sigma(tmp_path, capsys):
    code, _, _ = run(["run", "--steps", 100, "--out", tmp_path / "w"], capsys)
    assert code == 0
    rec = json.loads((tmp_path / "w.json").read_text())
    assert rec["engine"] == "exact" and rec["steps"] == 100
    assert abs(rec["sigma"] - 10.0) < 1e-6
    assert rec["seed"] is None
    assert rec["tv_vs_analytic"] < 1e-12
    probs = read_csv(tmp_path / "w.csv")
    assert math.fsum(probs.values()) == pytest.approx(1.0, abs=1e-10)
    assert all(x % 2 == 0 for x in probs)


def test_zero_steps_single_row(tmp_path, capsys):
    code, _, _ = run(["run", "--steps", 0, "--out", tmp_path / "z", "--format", "csv"], capsys)
    assert code == 0
    assert (tmp_path / "z.csv").read_text() == "position,probability\n0,1.0\n"
    assert not (tmp_path / "z.json").exists()


def test_stdout_when_no_out(capsys):
    code, out, _ = run(["run", "--engine", "analytic", "--steps", 2, "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines() == ["position,probability", "-2,0.25", "0,0.5", "2,0.25"]


def test_suffix_in_out_is_stripped(tmp_path, capsys):
    code, _, _ = run(["run", "--steps", 3, "--out", tmp_path / "s.csv"], capsys)
    assert code == 0
    assert (tmp_path / "s.csv").exists() and (tmp_path / "s.json").exists()


def test_classical_engine(tmp_path, capsys):
    code, _, _ = run(
        ["run", "--engine", "classical", "--trials", 100_000, "--seed", 1, "--out", tmp_path / "c"], capsys
    )
    assert code == 0
    rec = json.loads((tmp_path / "c.json").read_text())
    assert abs(rec["sigma"] - 10.0) < 0.1
    assert rec["seed"] == 1
    assert rec["tv_vs_analytic"] < 0.05


@pytest.mark.parametrize("engine", ["exact", "mc", "classical", "analytic"])
def test_reruns_are_byte_identical(tmp_path, capsys, engine):
    argv = ["run", "--engine", engine, "--steps", 20, "--trials", 300, "--seed", 5, "--format", "csv",
            "--format", "json", "--format", "svg"]
    assert run(argv + ["--out", tmp_path / "a"], capsys)[0] == 0
    assert run(argv + ["--out", tmp_path / "b"], capsys)[0] == 0
    for ext in ("csv", "json", "svg"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()


def test_svg_written(tmp_path, capsys):
    code, _, _ = run(["run", "--steps", 10, "--format", "svg", "--out", tmp_path / "g"], capsys)
    assert code == 0
    text = (tmp_path / "g.svg").read_text()
    assert text.startswith("<svg") and "polyline" in text and text.rstrip().endswith("</svg>")


def test_non_classical_has_no_tv(tmp_path, capsys):
    code, _, _ = run(["run", "--p", 0.2, "--steps", 10, "--out", tmp_path / "n"], capsys)
    assert code == 0
    assert json.loads((tmp_path / "n.json").read_text())["tv_vs_analytic"] is None


def test_degrees(tmp_path, capsys):
    code, _, _ = run(["run", "--degrees", "--theta", 45, "--steps", 16, "--out", tmp_path / "d"], capsys)
    assert code == 0
    assert json.loads((tmp_path / "d.json").read_text())["sigma"] == pytest.approx(4.0, abs=1e-9)


def test_x0_shifts(tmp_path, capsys):
    code, _, _ = run(["run", "--steps", 1, "--x0", 5, "--format", "csv", "--out", tmp_path / "x"], capsys)
    assert code == 0
    probs = read_csv(tmp_path / "x.csv")
    assert set(probs) == {4, 6}
    assert probs[4] == pytest.approx(0.5, abs=1e-15) and probs[6] == pytest.approx(0.5, abs=1e-15)


def test_initial_file_round_trip(tmp_path, capsys):
    init = tmp_path / "init.json"
    s = 1 / math.sqrt(2)
    init.write_text(json.dumps([{"x": -2, "a": [s, 0], "b": [0, 0]}, {"x": 3, "a": [0, 0], "b": [0, s]}]))
    for engine in ("exact", "analytic"):
        code, _, _ = run(["run", "--engine", engine, "--steps", 6, "--initial-file", init, "--out", tmp_path / engine], capsys)
        assert code == 0
    a, b = read_csv(tmp_path / "exact.csv"), read_csv(tmp_path / "analytic.csv")
    assert set(a) == set(b)
    assert max(abs(a[x] - b[x]) for x in a) < 1e-12
    assert json.loads((tmp_path / "exact.json").read_text())["tv_vs_analytic"] < 1e-12


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--p", 1.5],
        ["run", "--p", -0.1],
        ["run", "--steps", -1],
        ["run", "--engine", "mc", "--trials", 0],
        ["run", "--engine", "mc", "--seed", -3],
        ["run", "--engine", "mc", "--coin-state", "mixed"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert "error" in err


def test_bad_initial_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["run", "--initial-file", bad], capsys)[0] == 2
    assert run(["run", "--initial-file", tmp_path / "missing.json"], capsys)[0] == 2


def test_unnormalized_initial_file_exit_2(tmp_path, capsys):
    f = tmp_path / "u.json"
    f.write_text(json.dumps([{"x": 0, "a": [1, 0], "b": [1, 0]}]))
    code, _, err = run(["run", "--initial-file", f], capsys)
    assert code == 2
    assert "total weight 2.0" in err


def test_argparse_rejects_unknown_engine(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--engine", "bogus"])
    assert exc.value.code == 2


def test_drift_exit_3(monkeypatch, capsys):
    real = cli.lattice_walk.position_marginal

    def drifting(state):
        d = real(state)
        return Distribution(d.x_min, d.probs * (1 + 1e-6), d.t)

    monkeypatch.setattr(cli.lattice_walk, "position_marginal", drifting)
    code, _, err = run(["run", "--steps", 5], capsys)
    assert code == 3
    assert "invariant" in err


def test_invariant_error_exit_3(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise InvariantError("trace drifted")

    monkeypatch.setattr(cli.lattice_walk, "evolve", broken)
    assert run(["run", "--steps", 5], capsys)[0] == 3


def test_figure1_single_trial(tmp_path, capsys):
    code, out, _ = run(["figure1", "--trials", 1, "--out", tmp_path / "f"], capsys)
    assert code == 0
    names = {p.name for p in (tmp_path / "f").iterdir()}
    assert names == {"classical.csv", "quantum.csv", "theory.csv", "panel_a_classical.svg", "panel_b_quantum.svg"}
    assert "sigma_QW" in out and "sigma_CRW" in out


def test_figure1_deterministic_and_in_band(tmp_path, capsys):
    assert run(["figure1", "--out", tmp_path / "a"], capsys)[0] == 0
    assert run(["figure1", "--out", tmp_path / "b"], capsys)[0] == 0
    for name in ("classical.csv", "quantum.csv", "theory.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        probs = read_csv(tmp_path / "a" / name)
        assert math.fsum(probs.values()) == pytest.approx(1.0, abs=1e-10)
    q = read_csv(tmp_path / "a" / "quantum.csv")
    xs = np.array(list(q), dtype=float)
    ps = np.array(list(q.values()))
    sigma = math.sqrt(np.sum(ps * xs**2) - np.sum(ps * xs) ** 2)
    assert 9.5 <= sigma <= 10.5


def test_verify_quick(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(["verify", "--max-t", 5], capsys)
    assert time.perf_counter() - t0 < 5.0
    assert code == 0
    assert out.count("[PASS]") == 9
    assert "all 9 checks passed" in out


def test_verify_inject_fault(capsys):
    code, out, _ = run(["verify", "--max-t", 5, "--inject-fault"], capsys)
    assert code == 1
    assert "[FAIL] 4" in out
    assert "verification FAILED" in out


def test_verify_bad_max_t(capsys):
    assert run(["verify", "--max-t", 0], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "coinwalk", "run", "--engine", "analytic", "--steps", "1", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["position,probability", "-1,0.5", "1,0.5"]
