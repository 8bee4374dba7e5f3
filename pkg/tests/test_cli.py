from __future__ import annotations

import json

import pytest
from typer.testing import CliRunner

import dmodscan.cli
from dmodscan.checks import CheckRegistry
from dmodscan.cli import EXIT_FAILURE, EXIT_NEVER, EXIT_OK, EXIT_USAGE, app
from dmodscan.report.render import load_golden, parse_table_record

from .test_checks import _Fixed

runner = CliRunner()

BROKEN_TRIPLES = "1,2,3;1,4,5;1,7,6;2,4,6;2,5,7;3,4,7"


def test_presets_lists_names():
    result = runner.invoke(app, ["presets"])
    assert result.exit_code == EXIT_OK
    assert "n8d1   (1,8,7)" in result.output


def test_algebras_lists_catalogue():
    result = runner.invoke(app, ["algebras"])
    assert result.exit_code == EXIT_OK
    assert "F(4)" in result.output
    assert "D(2,1;α)" in result.output


def test_export_matches_golden(tmp_path):
    out = tmp_path / "osp12.json"
    result = runner.invoke(
        app, ["export", "--content", "1,1", "--lambda", "1/2", "--format", "json", "--out", str(out), "-q"]
    )
    assert result.exit_code == EXIT_OK
    assert out.read_text(encoding="utf-8") == load_golden("export_osp12.json")
    assert (tmp_path / "run.log").exists()


def test_export_text_to_stdout():
    result = runner.invoke(app, ["export", "-c", "0,4", "-l", "1"])
    assert result.exit_code == EXIT_OK
    assert "D(2,1;α)  dims 9|8" in result.output
    assert "alpha orbit:" in result.output


def test_export_any_lambda_needs_lambda():
    result = runner.invoke(app, ["export", "--content", "1,1", "--degree-bound", "2"])
    assert result.exit_code == EXIT_USAGE


def test_export_open_lambda_exits_never():
    result = runner.invoke(app, ["export", "--content", "4,8", "--lambda", "0"])
    assert result.exit_code == EXIT_NEVER


@pytest.mark.parametrize(
    "args",
    [
        ["critical", "--content", "9,8"],
        ["critical"],
        ["critical", "--content", "1,1", "--degree-bound", "0"],
        ["export", "--content", "1,1", "--lambda", "half"],
        ["verify", "--octonion-triples", "1,2"],
    ],
)
def test_usage_errors(args):
    assert runner.invoke(app, args).exit_code == EXIT_USAGE


def test_critical_any_lambda():
    result = runner.invoke(app, ["critical", "--content", "1,1", "--degree-bound", "2"])
    assert result.exit_code == EXIT_OK
    assert "kind:    AnyLambda" in result.output


def test_critical_json(tmp_path):
    out = tmp_path / "c.json"
    result = runner.invoke(app, ["critical", "-c", "root1", "-f", "json", "-o", str(out), "--degree-bound", "2"])
    assert result.exit_code == EXIT_OK
    rec = json.loads(out.read_text(encoding="utf-8"))
    assert rec["record"] == "closure"
    assert rec["kind"] == "AnyLambda"
    assert rec["algebras"] == ["B(0,1)"]


@pytest.mark.slow
def test_verify_with_broken_octonions_fails():
    result = runner.invoke(app, ["verify", "--skip-slow", "--degree-bound", "2", "--octonion-triples", BROKEN_TRIPLES])
    assert result.exit_code == EXIT_FAILURE
    assert "[FAIL] clifford-relations" in result.output
    assert "first failing property: clifford-relations" in result.output
    assert "Traceback" not in result.output


@pytest.mark.slow
def test_critical_never():
    result = runner.invoke(app, ["critical", "--content", "4,8"])
    assert result.exit_code == EXIT_NEVER
    assert "kind:    Never" in result.output


@pytest.mark.slow
def test_export_n8_d3(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        result = runner.invoke(app, ["export", "-c", "3,8", "-f", "json", "-o", str(out), "-q"])
        assert result.exit_code == EXIT_OK
    rec = json.loads(first.read_text(encoding="utf-8"))
    assert rec["name"] == "D(2,2)"
    assert rec["lambda"] == "-1"
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.slow
def test_table_json_round_trip(tmp_path):
    out = tmp_path / "table.json"
    assert runner.invoke(app, ["table", "-f", "json", "-o", str(out), "-q"]).exit_code == EXIT_OK
    rows = parse_table_record(out.read_text(encoding="utf-8"))
    assert len(rows) == 9
    assert rows[7].algebra == "F(4)"


def test_verify_reports_crashing_check(monkeypatch):
    reg = CheckRegistry()
    reg.register(_Fixed("ok"))
    reg.register(_Fixed("crash", error=ValueError("not a 9|8 algebra")))
    monkeypatch.setattr(dmodscan.cli, "get_global_registry", lambda: reg)
    result = runner.invoke(app, ["verify"])
    assert result.exit_code == EXIT_FAILURE
    assert "[FAIL] crash  ValueError: not a 9|8 algebra" in result.output
    assert "1 passed, 1 failed" in result.output
    assert "first failing property: crash" in result.output


def test_unexpected_error_exits_failure(monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(dmodscan.cli, "find_critical", explode)
    result = runner.invoke(app, ["critical", "--content", "1,1", "--degree-bound", "2"])
    assert result.exit_code == EXIT_FAILURE
    assert "internal error: RuntimeError: boom" in result.output
