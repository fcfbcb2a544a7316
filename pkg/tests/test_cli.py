"""Tests for CLI argument parsing, option resolution and run() exit codes."""

import csv
import io
import json
from unittest.mock import patch

import pytest

from ineqcheck.__main__ import main, parse_arguments, resolve_options, run
from ineqcheck.exceptions import UsageError
from ineqcheck.report import CSV_COLUMNS
from tests.conftest import E


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _parse(argv):
    """Parse *argv* list, prepending the program name."""
    with patch("sys.argv", ["ineqcheck"] + argv):
        return parse_arguments()


def _run_json(argv, capsys):
    code = run(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# parse_arguments(): individual flags
# ---------------------------------------------------------------------------


def test_verify_flags():
    args = _parse(["verify", "--fn", "exp", "--class", "convex", "--p", "2", "--q", "0.5"])
    assert args.command == "verify"
    assert args.fn == "exp"
    assert args.cls == "convex"
    assert args.p == 2.0
    assert args.q == 0.5
    assert args.s is None


def test_unset_options_stay_none_until_resolved():
    args = _parse(["verify", "--fn", "exp", "--class", "convex"])
    assert args.a is None and args.format is None
    resolved = resolve_options(args)
    assert (resolved.a, resolved.b, resolved.p, resolved.q) == (0.0, 1.0, 1.0, 1.0)
    assert resolved.format == "table"
    assert "fn" in resolved.explicit and "a" not in resolved.explicit


def test_sweep_flags():
    args = _parse(["sweep", "--fn", "x,exp", "--classes", "convex,p", "--p-grid", "1,2", "--diagonal", "--workers", "4"])
    assert args.fn == "x,exp"
    assert args.classes == "convex,p"
    assert args.p_grid == "1,2"
    assert args.diagonal is True
    assert args.workers == 4


def test_falsify_flags():
    args = _parse(["falsify", "--class", "s-convex", "--trials", "10", "--seed", "5", "--p-range", "1:2"])
    assert args.cls == "s-convex"
    assert args.trials == 10
    assert args.seed == 5
    assert args.p_range == "1:2"
    assert args.all_reports is False


def test_common_flags():
    args = _parse(["identity", "--fn", "x", "--atol", "1e-6", "--rtol", "1e-5", "--max-subdivisions", "64", "--quiet"])
    assert args.atol == 1e-6
    assert args.rtol == 1e-5
    assert args.max_subdivisions == 64
    assert args.quiet is True


def test_serve_defaults():
    args = _parse(["serve"])
    assert args.port == 8000
    assert args.bind == "127.0.0.1"
    assert args.reload is False


def test_serve_short_flags():
    args = _parse(["serve", "-p", "9000", "-b", "0.0.0.0"])
    assert args.port == 9000
    assert args.bind == "0.0.0.0"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify", "--bogus"],
        ["verify", "--p", "two"],
        ["verify", "--format", "xml"],
        ["nonsense"],
    ],
)
def test_bad_arguments_raise_usage_error(argv):
    with pytest.raises(UsageError):
        _parse(argv)


# ---------------------------------------------------------------------------
# run(): verify and identity
# ---------------------------------------------------------------------------


def test_verify_exp_convex_json(capsys):
    code, document = _run_json(["verify", "--fn", "exp", "--class", "convex"], capsys)
    assert code == 0
    assert document["command"] == "verify"
    assert document["config"]["fn"] == "exp"
    (report,) = document["reports"]
    assert report["verdict"] == "Holds"
    assert report["formula_id"] == "cor2.3"
    assert report["lhs"] == pytest.approx(E / 6, abs=1e-9)
    assert report["ratio"] == pytest.approx(0.754235, abs=1e-6)
    assert document["summary"] == {"total": 1, "holds": 1, "violated": 0, "inconclusive": 0, "exit_code": 0}


def test_verify_json_keys_are_in_schema_order(capsys):
    _, document = _run_json(["verify", "--fn", "x", "--class", "p"], capsys)
    assert list(document) == ["command", "config", "reports", "summary"]
    assert list(document["reports"][0]) == [
        "problem", "class", "formula_id", "lhs", "lhs_error", "rhs", "rhs_error",
        "slack", "ratio", "verdict", "certifications", "nonnegativity", "beta_terms", "seed", "note",
    ]


def test_json_output_round_trips(capsys):
    run(["verify", "--fn", "pow-0.5", "--class", "s-convex", "--s", "0.5", "--format", "json"])
    out = capsys.readouterr().out
    assert json.dumps(json.loads(out), indent=2) + "\n" == out


def test_identity_constant(capsys):
    code, document = _run_json(["identity", "--fn", "const1"], capsys)
    assert code == 0
    (report,) = document["reports"]
    assert report["formula_id"] == "lem2.1"
    assert report["lhs"] == pytest.approx(1 / 6, abs=1e-12)
    assert report["rhs"] == pytest.approx(1 / 6, abs=1e-12)


def test_refuted_certification_exits_2(capsys):
    code, document = _run_json(["verify", "--fn", "sin-pi", "--class", "p"], capsys)
    assert code == 2
    report = document["reports"][0]
    assert report["verdict"] == "Inconclusive"
    assert report["certifications"][0]["witness"] == [0.0, 1.0, 0.5]


def test_table_output(capsys):
    code = run(["verify", "--fn", "x2", "--class", "quasi"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0].startswith("function")
    assert "Holds" in out
    assert "cor2.5" in out


def test_csv_output(capsys):
    code = run(["verify", "--fn", "exp", "--class", "convex", "--format", "csv"])
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert code == 0
    assert tuple(rows[0]) == CSV_COLUMNS
    record = dict(zip(rows[0], rows[1]))
    assert record["function"] == "exp"
    assert record["formula_id"] == "cor2.3"
    assert record["verdict"] == "Holds"
    assert record["certified"] == "true"
    assert record["witness"] == ""


def test_output_file(temp_dir, capsys):
    target = temp_dir / "report.json"
    code = run(["identity", "--fn", "x", "--format", "json", "--output", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["reports"][0]["verdict"] == "Holds"


def test_unwritable_output_exits_3(temp_dir, capsys):
    target = temp_dir / "missing" / "dir" / "report.json"
    code = run(["verify", "--fn", "exp", "--class", "convex", "--format", "json", "--output", str(target)])
    captured = capsys.readouterr()
    assert code == 3
    assert captured.out == ""
    assert not target.exists()
    last = captured.err.strip().splitlines()[-1]
    assert last.startswith("error: cannot write report to")
    assert str(target) in last


# ---------------------------------------------------------------------------
# run(): usage and domain errors exit 3
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["verify", "--fn", "const1", "--class", "q", "--p", "1", "--q", "2"], "p > 1"),
        (["verify", "--fn", "exp", "--class", "convex", "--s", "0.5"], "s"),
        (["verify", "--fn", "exp", "--class", "s-convex"], "s"),
        (["verify", "--class", "convex"], "--fn"),
        (["verify", "--fn", "tan", "--class", "convex"], "tan"),
        (["verify", "--unknown-flag"], "unknown-flag"),
        (["verify", "--fn", "exp", "--class", "convex", "--atol", "-1"], "tolerance"),
        (["sweep", "--classes", "convex"], "function"),
        (["sweep", "--fn", "x", "--classes", "concave"], "concave"),
        (["falsify", "--class", "q", "--p-range", "0.5:2"], "q > 1"),
        (["catalog", "--a", "2", "--b", "1"], "a < b"),
    ],
)
def test_usage_errors_exit_3(argv, fragment, capsys):
    assert run(argv) == 3
    last_line = capsys.readouterr().err.strip().splitlines()[-1]
    assert last_line.startswith("error: ")
    assert fragment in last_line


def test_main_exits_with_run_code():
    with patch("sys.argv", ["ineqcheck", "verify", "--fn", "exp"]):
        with pytest.raises(SystemExit) as exc:
            main()
        assert exc.value.code == 3


# ---------------------------------------------------------------------------
# run(): sweep, falsify, catalog
# ---------------------------------------------------------------------------


def test_sweep_diagonal(capsys):
    code, document = _run_json(["sweep", "--fn", "x", "--p-grid", "1,2", "--diagonal"], capsys)
    assert code == 0
    assert [(r["problem"]["p"], r["problem"]["q"]) for r in document["reports"]] == [(1.0, 1.0), (2.0, 2.0)]
    assert document["summary"]["total"] == 2


def test_sweep_with_inconclusive_point_exits_2(capsys):
    code, document = _run_json(["sweep", "--fn", "const1", "--classes", "q", "--p-grid", "1,2", "--q-grid", "2"], capsys)
    assert code == 2
    assert [r["verdict"] for r in document["reports"]] == ["Inconclusive", "Holds"]
    assert document["reports"][0]["lhs"] is None


def test_sweep_file(temp_dir, capsys):
    sweep_file = temp_dir / "sweep.json"
    sweep_file.write_text(
        json.dumps({"sweep": {"functions": ["x", "exp"], "classes": ["p"], "interval": [1, 2]}})
    )
    code, document = _run_json(["sweep", "--sweep-config", str(sweep_file)], capsys)
    assert code == 0
    assert document["config"]["interval"] == [1.0, 2.0]
    assert [r["problem"]["function"] for r in document["reports"]] == ["x", "exp"]


def test_sweep_flags_override_file_interval(temp_dir, capsys):
    sweep_file = temp_dir / "sweep.json"
    sweep_file.write_text(json.dumps({"sweep": {"functions": ["x"], "interval": [1, 2]}}))
    _, document = _run_json(["sweep", "--sweep-config", str(sweep_file), "--a", "0", "--b", "3"], capsys)
    assert document["config"]["interval"] == [0.0, 3.0]


def test_falsify_summary(capsys):
    code, document = _run_json(["falsify", "--class", "convex", "--trials", "5", "--seed", "42"], capsys)
    assert code == 0
    assert document["summary"]["trials"] == 5
    assert document["summary"]["violated"] == 0
    assert document["summary"]["exit_code"] == 0
    assert document["reports"] == []


def test_falsify_all_reports(capsys):
    _, document = _run_json(["falsify", "--class", "p", "--trials", "3", "--all-reports"], capsys)
    assert len(document["reports"]) == 3
    assert all(r["seed"] is not None for r in document["reports"])


def test_falsify_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("INEQ_SEED", "17")
    _, document = _run_json(["falsify", "--class", "quasi", "--trials", "2"], capsys)
    assert document["config"]["seed"] == 17


def test_falsify_explicit_seed_beats_environment(monkeypatch, capsys):
    monkeypatch.setenv("INEQ_SEED", "17")
    _, document = _run_json(["falsify", "--class", "quasi", "--trials", "2", "--seed", "3"], capsys)
    assert document["config"]["seed"] == 3


def test_catalog_listing(capsys):
    code, document = _run_json(["catalog"], capsys)
    assert code == 0
    ids = [f["id"] for f in document["functions"]]
    assert "exp" in ids and "sin-pi" in ids


def test_catalog_table(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "abs-centered" in out
    assert "(none)" in out


# ---------------------------------------------------------------------------
# Run files
# ---------------------------------------------------------------------------


def test_run_file_supplies_options(temp_dir, capsys):
    run_file = temp_dir / "run.conf"
    run_file.write_text("# exp against the convex bound\nfn = exp\nclass = convex\nformat = json\n")
    code = run(["verify", "--config", str(run_file)])
    document = json.loads(capsys.readouterr().out)
    assert code == 0
    assert document["config"]["fn"] == "exp"


def test_flags_override_run_file(temp_dir, capsys):
    run_file = temp_dir / "run.conf"
    run_file.write_text("fn = exp\nclass = convex\np = 3\n")
    _, document = _run_json(["verify", "--config", str(run_file), "--p", "2"], capsys)
    assert document["config"]["p"] == 2.0


def test_bad_run_file_exits_3(temp_dir, capsys):
    run_file = temp_dir / "run.conf"
    run_file.write_text("fn = exp\ncolour = blue\nnot a pair\n")
    assert run(["verify", "--config", str(run_file)]) == 3
    err = capsys.readouterr().err
    assert "2 configuration errors" in err


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def test_serve_passes_options_to_uvicorn():
    with patch("uvicorn.run") as mock_run:
        assert run(["serve", "--port", "9090", "--bind", "0.0.0.0", "--reload"]) == 0
    kwargs = mock_run.call_args[1]
    assert mock_run.call_args[0][0] == "ineqcheck.main:get_app"
    assert kwargs["factory"] is True
    assert kwargs["port"] == 9090
    assert kwargs["host"] == "0.0.0.0"
    assert kwargs["reload"] is True
    assert kwargs["log_level"] == "info"


def test_serve_quiet_sets_warning_log_level():
    with patch("uvicorn.run") as mock_run:
        run(["serve", "--quiet"])
    assert mock_run.call_args[1]["log_level"] == "warning"
