import csv
import json

import pytest

from volflow.commands import fig8 as fig8_command
from volflow.errors import EXIT_CHECK_FAILURE, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, BranchError, SolverError
from volflow.main import build_config, build_parser, parse_sizes, run


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


# --------- Parser ---------
def test_parse_sizes():
    assert parse_sizes("3") == (3, 3)
    assert parse_sizes("2..5") == (2, 5)
    assert parse_sizes(None) == (2, 2)


def test_default_sizes_per_command():
    parser = build_parser()
    assert build_config(parser.parse_args(["verify"])).sizes == [2, 3, 4, 5]
    assert build_config(parser.parse_args(["veronese"])).sizes == [3]


def test_help_exits_zero(capsys):
    assert run(["--help"]) == EXIT_OK


@pytest.mark.parametrize("argv", [["verify", "--n", "x"], ["verify", "--n", "5..3"], ["verify", "--n", "1"], ["nope"]])
def test_usage_errors(argv):
    assert run(argv) == EXIT_USAGE


# --------- verify ---------
def test_verify_passes_and_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--n", "2..3", "--trials", "4", "--seed", "7"]
    assert run(args + ["--output", str(first)]) == EXIT_OK
    assert run(args + ["--output", str(second)]) == EXIT_OK
    a, b = _read_json(first), _read_json(second)
    assert a["passed"] is True
    assert [c["max_residual"] for c in a["checks"]] == [c["max_residual"] for c in b["checks"]]
    assert {c["name"] for c in a["checks"]} >= {"omega_normalization", "rate_dual_path", "hodgson_reduction"}


def test_verify_fails_with_impossible_tolerance():
    assert run(["verify", "--n", "2", "--trials", "2", "--tol", "1e-30"]) == EXIT_CHECK_FAILURE


def test_verify_csv_output(tmp_path):
    out = tmp_path / "verify.csv"
    assert run(["verify", "--n", "2", "--trials", "2", "--output", str(out), "--format", "csv"]) == EXIT_OK
    with out.open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and set(rows[0]) >= {"name", "n", "trials", "max_residual", "tolerance", "passed"}


# --------- rate ---------
@pytest.mark.parametrize("name,total", [("hodgson.json", 0.14), ("two_cusp.json", 0.40), ("unipotent.json", 0.0)])
def test_rate_fixtures(fixtures_dir, tmp_path, name, total):
    out = tmp_path / "rate.json"
    assert run(["rate", "--input", str(fixtures_dir / name), "--output", str(out)]) == EXIT_OK
    report = _read_json(out)
    assert report["total"] == pytest.approx(total, abs=1e-12)
    assert report["difference"] < 1e-12


def test_rate_reports_schema_field(fixtures_dir, capsys):
    assert run(["rate", "--input", str(fixtures_dir / "bad_jets.json")]) == EXIT_USAGE
    assert "cusps.0.db" in capsys.readouterr().err


def test_rate_requires_input():
    assert run(["rate"]) == EXIT_USAGE


def test_rate_missing_file(tmp_path):
    assert run(["rate", "--input", str(tmp_path / "missing.json")]) == EXIT_USAGE


# --------- compare / veronese ---------
def test_compare(tmp_path):
    out = tmp_path / "compare.json"
    assert run(["compare", "--n", "2..3", "--trials", "5", "--output", str(out)]) == EXIT_OK
    report = _read_json(out)
    assert report["signs"] == {"hodgson": 1, "dgg": -1, "bfg": -1}


def test_veronese_prints_images(capsys):
    assert run(["veronese", "--trials", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "σ_3(E12)" in out
    assert "veronese_trace_identity" in out


# --------- fig8 ---------
def test_fig8_rejects_out_of_range_path(tmp_path):
    spec = tmp_path / "path.json"
    spec.write_text(json.dumps({"u0": [0.9, 0.0]}), encoding="utf-8")
    assert run(["fig8", "--input", str(spec)]) == EXIT_USAGE
    assert run(["fig8", "--u0", "0.9,0"]) == EXIT_USAGE
    assert run(["fig8", "--u0", "abc"]) == EXIT_USAGE


def test_fig8_zero_path_writes_both_formats(tmp_path):
    out = tmp_path / "fig8.json"
    assert run(["fig8", "--u0", "0,0", "--samples", "9", "--output", str(out)]) == EXIT_OK
    report = _read_json(out)
    assert len(report["rows"]) == 9
    with (tmp_path / "fig8.csv").open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    assert header == ["t", "u_re", "u_im", "v_re", "v_im", "vol", "rate", "rate_fd", "int_rate"]


def test_fig8_default_radial_path(tmp_path, capsys):
    out = tmp_path / "fig8.json"
    assert run(["fig8", "--u0", "0.1,0.05", "--samples", "33", "--output", str(out)]) == EXIT_OK
    report = _read_json(out)
    assert len(report["rows"]) == 33
    assert report["passed"] is True
    assert 3.5 < report["diagnostics"]["quartic"]["slope"] < 4.5
    assert "Inclinação quártica" in capsys.readouterr().out


@pytest.mark.parametrize("error", [SolverError("Newton não convergiu", sample_index=4), BranchError("salto de ramo")])
def test_fig8_solver_failures_exit_with_solver_code(monkeypatch, capsys, error):
    def failing(*args, **kwargs):
        raise error

    monkeypatch.setattr(fig8_command, "deformation_experiment", failing)
    assert run(["fig8", "--u0", "0.1,0.05"]) == EXIT_SOLVER
    assert error.detail in capsys.readouterr().err
