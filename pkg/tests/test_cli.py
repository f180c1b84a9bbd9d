"""Tests for the dfq command line."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner, Result

from src.cli.main import cli
from tests.conftest import EXAMPLE_SIDECAR, write_example_log

DF = "df(case, end_time, Log)"
SUCCESSORS_OF_A = "project(u.activity, select(d.activity = 'A', df(case, end_time, Log)))"
CASE_ONE_PAIRS = "select(d.case = 1 & u.case = 1, df(case, end_time, Log))"


@pytest.fixture(autouse=True)
def isolated(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """No configuration file or catalog variable leaks in from the environment."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DFQ_CATALOG_DIR", raising=False)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def invoke(runner: CliRunner, *args: str) -> Result:
    return runner.invoke(cli, list(args))


def csv_rows(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


class TestRun:
    """Tests for dfq run."""

    def test_directly_follows_csv(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", DF, "--catalog-dir", str(catalog_dir), "--format", "csv")
        assert result.exit_code == 0, result.output
        rows = csv_rows(result.stdout)
        assert rows[0] == [
            "d.case",
            "d.activity",
            "d.start_time",
            "d.end_time",
            "u.case",
            "u.activity",
            "u.start_time",
            "u.end_time",
        ]
        assert len(rows) == 13
        assert rows[1] == ["1", "A", "00:20", "00:22", "1", "B", "02:04", "02:08"]

    def test_base_relation(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", "Log", "--catalog-dir", str(catalog_dir), "--format", "csv")
        assert result.exit_code == 0
        assert len(csv_rows(result.stdout)) == 19

    def test_successors(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(
            runner, "run", SUCCESSORS_OF_A, "--catalog-dir", str(catalog_dir), "--format", "csv"
        )
        assert result.exit_code == 0
        assert csv_rows(result.stdout) == [["u.activity"], ["B"], ["C"], ["D"]]

    def test_engines_print_the_same_result(self, runner: CliRunner, catalog_dir: Path) -> None:
        outputs = []
        for engine in ("native", "composite"):
            result = invoke(
                runner,
                "run",
                CASE_ONE_PAIRS,
                "--catalog-dir",
                str(catalog_dir),
                "--format",
                "csv",
                "--engine",
                engine,
            )
            assert result.exit_code == 0, result.output
            outputs.append(result.stdout)
        assert outputs[0] == outputs[1]
        assert len(csv_rows(outputs[0])) == 3

    def test_optimizer_off(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(
            runner, "run", DF, "--catalog-dir", str(catalog_dir), "--format", "csv",
            "--optimize", "off",
        )
        assert result.exit_code == 0
        assert len(csv_rows(result.stdout)) == 13

    def test_json_lines(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(
            runner, "run", SUCCESSORS_OF_A, "--catalog-dir", str(catalog_dir),
            "--format", "json-lines",
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in result.stdout.splitlines()]
        assert records == [{"u.activity": "B"}, {"u.activity": "C"}, {"u.activity": "D"}]

    def test_table(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", SUCCESSORS_OF_A, "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 0
        assert "u.activity" in result.stdout
        assert "3 tuple(s)" in result.stdout

    def test_catalog_from_environment(
        self, runner: CliRunner, catalog_dir: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.setenv("DFQ_CATALOG_DIR", str(catalog_dir))
        result = invoke(runner, "run", "Log", "--format", "csv")
        assert result.exit_code == 0
        assert len(csv_rows(result.stdout)) == 19

    def test_format_from_config_file(self, runner: CliRunner, catalog_dir: Path) -> None:
        config = Path(".dfq")
        config.mkdir()
        (config / "config.yaml").write_text(
            f"catalog_dirs: ['{catalog_dir}']\noutput_format: csv\n", encoding="utf-8"
        )
        result = invoke(runner, "run", SUCCESSORS_OF_A)
        assert result.exit_code == 0, result.output
        assert csv_rows(result.stdout)[0] == ["u.activity"]


class TestExitCodes:
    """Each kind of failure has its own exit status."""

    def test_parse_error(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", "select(case = 1 Log)", "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 1
        assert "parse error" in result.output
        assert "^" in result.output

    def test_schema_error(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", "project(resource, Log)", "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 2
        assert "UnknownAttribute" in result.output

    def test_missing_relation(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "run", "Events", "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 3

    def test_no_catalog(self, runner: CliRunner) -> None:
        result = invoke(runner, "run", "Log")
        assert result.exit_code == 3
        assert "--catalog-dir" in result.output

    def test_unreadable_catalog(self, runner: CliRunner, tmp_path: Path) -> None:
        (tmp_path / "Log.csv").write_text("case,activity\n1\n", encoding="utf-8")
        result = invoke(runner, "run", "Log", "--catalog-dir", str(tmp_path))
        assert result.exit_code == 3

    def test_invalid_config(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "bad.yaml"
        path.write_text("engine: quantum\n", encoding="utf-8")
        result = invoke(runner, "--config", str(path), "rules", "list")
        assert result.exit_code == 3

    def test_invalid_cost_parameters(self, runner: CliRunner) -> None:
        result = invoke(runner, "cost", "--N", "10", "--V", "20")
        assert result.exit_code == 5

    def test_unknown_rule(self, runner: CliRunner) -> None:
        result = invoke(runner, "rules", "show", "E99")
        assert result.exit_code == 1


class TestExplain:
    """Tests for dfq explain."""

    def test_selection_pushed_below_df(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(
            runner, "explain", CASE_ONE_PAIRS, "--catalog-dir", str(catalog_dir),
            "--engine", "composite",
        )
        assert result.exit_code == 0, result.output
        assert "Original plan" in result.stdout
        assert "Chosen plan" in result.stdout
        assert "Estimated cost:" in result.stdout

    def test_json_report(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(
            runner, "explain", CASE_ONE_PAIRS, "--catalog-dir", str(catalog_dir),
            "--engine", "composite", "--json",
        )
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["chosen"] == "df(case, end_time, select(case = 1, Log))"
        assert "P17" in [step["rule"] for step in report["applied_rules"]]
        assert report["est_chosen"]["total"] <= report["est_original"]["total"]

    def test_blocked_rule_reported(self, runner: CliRunner, catalog_dir: Path) -> None:
        query = "select(d.activity = 'A' & u.activity = 'A', df(case, end_time, Log))"
        result = invoke(runner, "explain", query, "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 0, result.output
        assert "Blocked rules:" in result.stdout
        assert "blocked: side condition" in result.stdout


class TestCost:
    """Tests for dfq cost."""

    def test_select_first_in_memory(self, runner: CliRunner) -> None:
        result = invoke(
            runner, "cost", "--N", "10000", "--V", "500", "--select-first", "--in-memory"
        )
        assert result.exit_code == 0
        assert "20" in result.stdout.split()

    def test_select_last_on_disk(self, runner: CliRunner) -> None:
        result = invoke(
            runner, "cost", "--N", "10000", "--V", "500", "--select-last", "--on-disk"
        )
        assert result.exit_code == 0
        assert "80000" in result.stdout

    def test_strategies(self, runner: CliRunner) -> None:
        result = invoke(runner, "cost", "--strategies", "--B", "200")
        assert result.exit_code == 0
        assert "600" in result.stdout

    def test_breakdown(self, runner: CliRunner) -> None:
        result = invoke(runner, "cost", "--N", "10000", "--V", "500", "--M", "200")
        assert result.exit_code == 0
        assert "68780" in result.stdout
        assert "76200" in result.stdout

    def test_sizes_must_agree(self, runner: CliRunner) -> None:
        result = invoke(runner, "cost", "--N", "10000", "--B", "10", "--V", "500")
        assert result.exit_code == 5

    def test_sweep_to_file(self, runner: CliRunner, tmp_path: Path) -> None:
        out = tmp_path / "sweep.csv"
        result = invoke(
            runner, "cost", "--V", "10000", "--M", "1000000", "--sweep", "events_per_case",
            "--start", "2", "--stop", "100", "--out", str(out),
        )
        assert result.exit_code == 0, result.output
        rows = csv_rows(out.read_text(encoding="utf-8"))
        assert rows[0] == ["x", "join1", "result1", "join2", "result2", "minus", "total"]
        assert len(rows) == 100
        assert "72, 73" in result.output

    def test_sweep_needs_range(self, runner: CliRunner) -> None:
        result = invoke(runner, "cost", "--V", "100", "--sweep", "M", "--start", "1")
        assert result.exit_code == 5


class TestValidate:
    """Tests for dfq validate."""

    def test_valid_log(self, runner: CliRunner, catalog_dir: Path) -> None:
        result = invoke(runner, "validate", "--catalog-dir", str(catalog_dir))
        assert result.exit_code == 0
        assert "Relation 'Log' is valid" in result.stdout

    def test_violation(self, runner: CliRunner, tmp_path: Path) -> None:
        directory = tmp_path / "owners"
        directory.mkdir()
        (directory / "Log.csv").write_text("case,time,owner\n1,1,ann\n1,2,bob\n", encoding="utf-8")
        (directory / "Log.meta.yaml").write_text(
            "case_attr: case\ntime_attr: time\nclasses: {owner: case}\n", encoding="utf-8"
        )
        result = invoke(runner, "validate", "Log", "--catalog-dir", str(directory))
        assert result.exit_code == 4
        assert "1 violation(s)" in result.stdout

    def test_missing_declaration(self, runner: CliRunner, tmp_path: Path) -> None:
        write_example_log(tmp_path / "plain")
        result = invoke(runner, "validate", "Log", "--catalog-dir", str(tmp_path / "plain"))
        assert result.exit_code == 3

    def test_totality_contradicted(self, runner: CliRunner, tmp_path: Path) -> None:
        directory = tmp_path / "acts"
        write_example_log(
            directory,
            sidecar=EXAMPLE_SIDECAR
            + "totality:\n  - {left: Log, right: Acts, condition: activity = act}\n",
        )
        (directory / "Acts.csv").write_text("act\nA\nB\nC\nD\n", encoding="utf-8")
        result = invoke(runner, "validate", "--catalog-dir", str(directory), "--check-totality")
        assert result.exit_code == 4
        assert "Totality fact does not hold" in result.stdout


class TestRules:
    """Tests for dfq rules."""

    def test_list(self, runner: CliRunner) -> None:
        result = invoke(runner, "rules", "list")
        assert result.exit_code == 0
        assert "E1" in result.stdout
        assert "P20" in result.stdout

    def test_list_propositions(self, runner: CliRunner) -> None:
        result = invoke(runner, "rules", "list", "--propositions")
        assert result.exit_code == 0
        assert "P17" in result.stdout
        assert "E16" not in result.stdout

    def test_show(self, runner: CliRunner) -> None:
        result = invoke(runner, "rules", "show", "p17")
        assert result.exit_code == 0
        assert "attribute_class" in result.stdout


def test_version(runner: CliRunner) -> None:
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert "0.1.0" in result.output
