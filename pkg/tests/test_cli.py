import csv
import io
import json

import jsonschema
import numpy as np
import pytest
from click.testing import CliRunner
from scipy import special

from rmtgap import cli, gap_prob
from rmtgap import verify as verify_mod
from rmtgap.errors import ToleranceError


def run(args, env=None):
    return CliRunner().invoke(cli.main, args, env=env)


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_tabulate_bulk_first_row_is_one():
    res = run(["tabulate", "--regime", "bulk", "--grid", "0:1.5:4"])
    assert res.exit_code == 0, res.output
    rows = csv_rows(res.output)
    assert len(rows) == 4
    assert list(rows[0]) == list(cli.TABLE_COLUMNS)
    for col in ("E1", "E2", "E4", "tau1", "tau2"):
        assert float(rows[0][col]) == 1.0
    e = [float(r["E2"]) for r in rows]
    assert all(x > y for x, y in zip(e, e[1:]))


def test_tabulate_hard_tau_columns():
    res = run(["tabulate", "--regime", "hard", "--a", "0.5", "--grid", "0.5:2:3", "--format", "json"])
    assert res.exit_code == 0, res.output
    for r in json.loads(res.output):
        assert r["tau1"] == pytest.approx(r["E1"], rel=1e-12)
        assert r["tau1"] * r["tau2"] == pytest.approx(r["E2"], rel=1e-12)
        assert r["E4"] == pytest.approx(0.5 * (r["E1"] + r["tau2"]), abs=1e-12)


def test_tabulate_beta_fills_one_column():
    res = run(["tabulate", "--regime", "soft", "--beta", "4", "--grid", "-2:1:3"])
    assert res.exit_code == 0, res.output
    for r in csv_rows(res.output):
        assert r["E1"] == "" and r["E2"] == ""
        assert 0.0 < float(r["E4"]) < 1.0
        assert r["tau1"] and r["tau2"]


def test_tabulate_finite_blanks():
    res = run(["tabulate", "--regime", "finite_laguerre_e2", "--N", "1", "--grid", "0.5:1:2"])
    assert res.exit_code == 0, res.output
    rows = csv_rows(res.output)
    assert rows[0]["E1"] == "" and rows[0]["E4"] == "" and rows[0]["tau2"] == ""
    assert float(rows[1]["E2"]) == pytest.approx(np.exp(-1.0), abs=1e-10)


@pytest.mark.parametrize(
    "args",
    [
        ["--regime", "bulk", "--grid", "0:2:9"],
        ["--regime", "soft", "--grid", "-3:2:9"],
        ["--regime", "hard", "--a", "1", "--grid", "0.1:3:9"],
        ["--regime", "circular", "--N", "3", "--grid", "0.1:2:9"],
    ],
)
def test_tabulate_deterministic_across_threads(args):
    outs = {run(["tabulate", *args], env={"RMTGAP_THREADS": t}).output for t in ("1", "3", "8")}
    assert len(outs) == 1


@pytest.mark.parametrize(
    "command, args",
    [
        ("tabulate", ["--regime", "hard", "--grid", "0:2:3"]),
        ("tabulate", ["--regime", "finite_jacobi_e2", "--N", "2", "--grid", "0.1:0.5:3"]),
        ("verify", ["finite"]),
        ("seed-dump", []),
    ],
)
def test_json_output_matches_schema(command, args):
    res = run([command, *args, "--format", "json"])
    assert res.exit_code == 0, res.output
    jsonschema.validate(json.loads(res.output), cli.load_schema(command))


def test_verify_bulk_lists_sine_determinant():
    res = run(["verify", "bulk"])
    assert res.exit_code == 0, res.output
    names = [r["check"] for r in csv_rows(res.output)]
    assert any(n.startswith("E2_bulk vs sine determinant") for n in names)
    assert all(r["passed"] == "true" for r in csv_rows(res.output))


def test_verify_soft_lists_hm_route():
    res = run(["verify", "--regime", "soft"])
    assert res.exit_code == 0, res.output
    assert "F1 tau vs Hastings-McLeod integral route" in res.output


def test_verify_finite_accepts_n():
    res = run(["verify", "finite", "--N", "2"])
    assert res.exit_code == 0, res.output
    assert "E1 Gaussian N=2 vs brute force" in res.output


def test_verify_failure_exits_one(monkeypatch):
    bad = verify_mod.Check("forced mismatch", 1.0, 0.0, 1e-6)
    monkeypatch.setattr(verify_mod, "run", lambda groups=None, tol=None, threshold=None: [("bulk", bad)])
    res = run(["verify", "bulk"])
    assert res.exit_code == 1
    assert "forced mismatch" in res.stderr


def test_verify_conflicting_regimes():
    assert run(["verify", "bulk", "--regime", "soft"]).exit_code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["tabulate", "--regime", "hard", "--a", "-1.5", "--grid", "0:1:3"],
        ["tabulate", "--regime", "bulk", "--grid", "0:1:1"],
        ["tabulate", "--regime", "bulk", "--grid", "0:1"],
        ["tabulate", "--regime", "bulk", "--grid", "1:0:3"],
        ["tabulate", "--regime", "bulk", "--grid", "0:1:3", "--tol", "1e-3"],
        ["tabulate", "--regime", "finite_laguerre_e2", "--N", "2", "--beta", "1", "--grid", "0:1:3"],
        ["tabulate", "--regime", "nowhere", "--grid", "0:1:3"],
        ["verify", "bulk", "--tol", "1e-14"],
    ],
)
def test_usage_errors_exit_two(args):
    assert run(args).exit_code == 2


def test_bad_thread_variable_exits_two():
    res = run(["tabulate", "--regime", "bulk", "--grid", "0:1:3"], env={"RMTGAP_THREADS": "zero"})
    assert res.exit_code == 2


def test_numerical_failure_exits_three(monkeypatch):
    def boom(*args, **kwargs):
        raise ToleranceError("forced")

    monkeypatch.setattr(gap_prob, "evaluate", boom)
    res = run(["tabulate", "--regime", "bulk", "--grid", "0:1:3"])
    assert res.exit_code == 3
    assert "ToleranceError" in res.stderr


def test_seed_dump_rows():
    res = run(["seed-dump"])
    assert res.exit_code == 0, res.output
    rows = csv_rows(res.output)
    assert {r["regime"] for r in rows} == {"bulk", "soft", "hard", "finite"}
    assert all(float(r["residual"]) < 1e-10 for r in rows)
    minus = next(r for r in rows if r["family"] == "sigma-II minus branch")
    ai, aip, _, _ = special.airy(10.0)
    expected = 0.5 * ai + 0.5 * (aip**2 - 10.0 * ai**2)
    assert float(minus["h0"]) == pytest.approx(expected, rel=1e-12)


def test_seed_dump_filter():
    rows = csv_rows(run(["seed-dump", "--regime", "hard"]).output)
    assert rows and all(r["regime"] == "hard" for r in rows)


def test_out_writes_file(tmp_path):
    path = tmp_path / "t.csv"
    res = run(["tabulate", "--regime", "bulk", "--grid", "0:1:3", "--out", str(path)])
    assert res.exit_code == 0
    assert res.output == ""
    assert csv_rows(path.read_text())[2]["s"] == "1"


def test_json_floats_have_fifteen_digits():
    data = json.loads(run(["tabulate", "--regime", "soft", "--grid", "-1:0:2", "--format", "json"]).output)
    for r in data:
        for key in ("E1", "E2", "E4"):
            assert r[key] == float(format(r[key], ".15g"))
