import csv
import json

import pytest

from entevo import io as jsonio
from entevo.cli import EXIT_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE, fmt, main
from entevo.states import isotropic_state, max_entangled

ROOF_FAST = ["--restarts", "4", "--max-iters", "4000"]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(True) == "true" and fmt(False) == "false"
    assert fmt(5) == "5"
    assert fmt(0.1791759469228055) == "0.179175947"
    assert fmt(1.0) == "1"


def test_trajectory(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", "--d", "5", "--gamma", "1", "--t-max", "0.35",
                 "--steps", "200", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert rows[0] == ["t", "F", "concurrence", "schmidt_number", "g_positive"]
    assert rows[1] == ["0", "1", "1", "5", "true"]
    assert len(rows) == 201
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["t_2"] == pytest.approx(0.1791759, abs=1e-7)
    assert side["ratio_eq9"] == pytest.approx(3.56712, abs=1e-5)


def test_trajectory_ck_columns(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", "--d", "3", "--t-max", "0.2", "--steps", "2", "--ck-roofs",
                 "--out", str(out), *ROOF_FAST]) == EXIT_OK
    rows = read_csv(out)
    assert rows[0][-2:] == ["c_2", "c_3"]
    assert all(len(r) == 7 for r in rows)


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ENTEVO_OUT_DIR", str(tmp_path))
    assert main(["rates", "--d-min", "2", "--d-max", "3"]) == EXIT_OK
    assert (tmp_path / "rates.csv").exists()


def test_verify_factorization_d2(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--law", "factorization", "--d", "2", "--samples", "100",
                 "--seed", "7", "--out", str(out)]) == EXIT_OK
    res = json.loads(out.read_text())
    assert res["n_cases"] == 100 and res["failures"] == 0
    assert res["max_abs_error"] <= 1e-9


def test_verify_ck_d3(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "--law", "ck", "--d", "3", "--k", "2", "--samples", "20",
                 "--seed", "7", "--out", str(out)])
    res = json.loads(out.read_text())
    assert len(res["slacks"]) == 20
    assert min(res["slacks"]) >= -5e-3
    assert code == EXIT_OK


def test_verify_failure_exit_code(tmp_path, monkeypatch):
    import entevo.cli as cli
    from entevo.lab import SweepSummary

    def fake(config):
        return SweepSummary(law="factorization", method="wootters", n_cases=1, failures=1,
                            tolerance=1e-9, max_abs_error=1.0, mean_abs_error=1.0,
                            min_slack=None, cases=[])

    monkeypatch.setattr(cli, "monte_carlo_sweep", fake)
    assert main(["verify", "--d", "2", "--samples", "1", "--out", str(tmp_path / "v.json")]) == EXIT_FAILED


@pytest.mark.parametrize("argv", [
    ["verify", "--law", "factorization", "--d", "1", "--samples", "5"],
    ["verify", "--law", "ck", "--d", "3", "--samples", "5"],
    ["verify", "--d", "3", "--method", "wootters"],
    ["trajectory", "--steps", "1"],
    ["trajectory", "--gamma", "0"],
    ["rates", "--d-min", "1"],
    ["state", "--kind", "isotropic", "--d", "3"],
    ["trajectory", "--restarts", "-1"],
    ["bogus"],
    [],
])
def test_usage_errors_write_nothing(argv, tmp_path):
    out = tmp_path / "out.file"
    assert main(argv + ["--out", str(out)] if argv and argv[0] != "bogus" else argv) == EXIT_USAGE
    assert not out.exists()


def test_rates(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["rates", "--d-min", "2", "--d-max", "5", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert rows[0] == ["d", "t_2", "t_d", "ratio", "ratio_over_d"]
    by_d = {int(r[0]): r for r in rows[1:]}
    assert float(by_d[5][3]) == pytest.approx(3.56712, abs=1e-5)
    assert float(by_d[2][3]) == pytest.approx(0.606826, abs=1e-6)
    assert float(by_d[2][1]) == float(by_d[2][2])


def test_rates_large_d(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["rates", "--d-min", "1000", "--d-max", "1000", "--out", str(out)]) == EXIT_OK
    assert 0.99 <= float(read_csv(out)[1][4]) <= 1.0


@pytest.mark.parametrize("state,expected,tol", [
    (max_entangled(3).projector(), 1.0, 1e-9),
    (isotropic_state(2, 0.625), 0.25, 1e-3),
])
def test_roof_values(state, expected, tol, tmp_path):
    src, out = tmp_path / "in.json", tmp_path / "roof.json"
    jsonio.save(state, src)
    assert main(["roof", "--input", str(src), "--out", str(out), "--seed", "3"]) == EXIT_OK
    res = json.loads(out.read_text())
    assert abs(res["value"] - expected) <= tol
    assert res["seed"] == 3 and "params" in res and "converged" in res


def test_roof_isotropic_below_threshold(tmp_path):
    src, out = tmp_path / "in.json", tmp_path / "roof.json"
    jsonio.save(isotropic_state(3, 0.6), src)
    assert main(["roof", "--input", str(src), "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["value"] <= 0.02


def test_roof_pure_state_input(tmp_path):
    src, out = tmp_path / "in.json", tmp_path / "roof.json"
    jsonio.save(max_entangled(2), src)
    assert main(["roof", "--input", str(src), "--out", str(out), "--measure", "C", "--k", "2"]) == EXIT_OK
    assert json.loads(out.read_text())["value"] == pytest.approx(1.0, abs=1e-12)


def test_roof_bad_inputs(tmp_path):
    out = tmp_path / "roof.json"
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert main(["roof", "--input", str(bad), "--out", str(out)]) == EXIT_IO
    assert main(["roof", "--input", str(tmp_path / "missing.json"), "--out", str(out)]) == EXIT_IO
    ch = tmp_path / "ch.json"
    assert main(["state", "--kind", "depolarizing", "--d", "2", "--p", "0.2", "--out", str(ch)]) == EXIT_OK
    assert main(["roof", "--input", str(ch), "--out", str(out)]) == EXIT_IO
    assert not out.exists()


@pytest.mark.parametrize("kind,extra", [
    ("isotropic", ["--F", "0.7"]),
    ("max-entangled", []),
    ("random-pure", []),
    ("random-mixed", ["--rank", "2"]),
    ("depolarizing", ["--p", "0.4"]),
    ("random-channel", ["--n-kraus", "3"]),
])
def test_state_files_load(kind, extra, tmp_path):
    out = tmp_path / "s.json"
    assert main(["state", "--kind", kind, "--d", "3", "--out", str(out), *extra]) == EXIT_OK
    jsonio.load(out)


COMMANDS = [
    ["trajectory", "--d", "4", "--steps", "50"],
    ["verify", "--d", "2", "--samples", "10", "--n-channels", "3", "--seed", "5"],
    ["verify", "--law", "two-sided", "--d", "2", "--samples", "5", "--seed", "1"],
    ["rates", "--d-max", "6"],
    ["state", "--kind", "random-mixed", "--d", "3", "--rank", "2", "--seed", "4"],
]


@pytest.mark.parametrize("argv", COMMANDS)
def test_byte_identical_reruns(argv, tmp_path):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
