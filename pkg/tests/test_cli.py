"""CLI behavior: output formats, overrides, exit codes, reproducibility."""

import json

import pytest
from click.testing import CliRunner

from audiencefit.cli import main

GOLDEN = {
    "fields": [
        {"id": "fa", "lambda": 0.0, "deviation_scale": 0.7071067811865476},
        {"id": "fb", "lambda": 0.0, "deviation_scale": 0.7071067811865476},
    ],
    "analyst": {"field": "fa"},
    "audience": [{"field": "fb"}],
    "criteria": {"epsilon": 1.96},
    "mc": {"replicates": 10_000, "seed": 7},
}


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(GOLDEN))
    return str(path)


@pytest.fixture()
def runner():
    return CliRunner()


class TestEvaluate:
    def test_emits_a_json_report(self, runner, scenario_file):
        result = runner.invoke(main, ["evaluate", scenario_file])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["success"]["potential"] is True
        assert report["seed"] == 7

    def test_two_runs_are_byte_identical(self, runner, scenario_file, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert runner.invoke(main, ["evaluate", scenario_file, "--out", str(out1)]).exit_code == 0
        assert runner.invoke(main, ["evaluate", scenario_file, "--out", str(out2)]).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_override_changes_the_estimate(self, runner, scenario_file):
        base = json.loads(runner.invoke(main, ["evaluate", scenario_file]).output)
        other = json.loads(
            runner.invoke(main, ["evaluate", scenario_file, "--seed", "8"]).output
        )
        assert other["seed"] == 8
        assert base["scenario_digest"] != other["scenario_digest"]

    def test_replicates_override(self, runner, scenario_file):
        report = json.loads(
            runner.invoke(main, ["evaluate", scenario_file, "--replicates", "500"]).output
        )
        assert report["replicates"] == 500

    def test_table_format(self, runner, scenario_file):
        result = runner.invoke(main, ["evaluate", scenario_file, "--format", "table"])
        lines = result.output.strip().split("\n")
        assert lines[0].startswith("index,name,analyst_logit,")
        assert len(lines) == 7

    def test_validation_failure_exits_2_with_json_errors(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(dict(GOLDEN, analyst={"field": "ghost"})))
        result = runner.invoke(main, ["evaluate", str(bad)])
        assert result.exit_code == 2
        errors = json.loads(result.stderr)["errors"]
        assert errors[0]["path"] == "analyst.field"

    def test_malformed_json_exits_2(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        result = runner.invoke(main, ["evaluate", str(bad)])
        assert result.exit_code == 2

    def test_missing_file_is_a_usage_error(self, runner):
        result = runner.invoke(main, ["evaluate", "/nonexistent.json"])
        assert result.exit_code == 2


class TestSweep:
    def test_epsilon_sweep(self, runner, scenario_file):
        result = runner.invoke(
            main, ["sweep", scenario_file, "--param", "epsilon", "--grid", "0.5,1.96,4"]
        )
        assert result.exit_code == 0
        sweep = json.loads(result.output)
        assert sweep["grid"] == [0.5, 1.96, 4.0]
        estimates = [
            r["probability"]["strong_monte_carlo"]["estimate"] for r in sweep["reports"]
        ]
        assert estimates == sorted(estimates)

    def test_sweep_table_format(self, runner, scenario_file):
        result = runner.invoke(
            main,
            [
                "sweep",
                scenario_file,
                "--param",
                "epsilon",
                "--grid",
                "0.5,1.0",
                "--format",
                "table",
            ],
        )
        assert result.exit_code == 0
        assert result.output.startswith("parameter,value,index,")

    def test_bad_grid_exits_2(self, runner, scenario_file):
        result = runner.invoke(
            main, ["sweep", scenario_file, "--param", "epsilon", "--grid", "2,1"]
        )
        assert result.exit_code == 2

    def test_non_numeric_grid_exits_2(self, runner, scenario_file):
        result = runner.invoke(
            main, ["sweep", scenario_file, "--param", "epsilon", "--grid", "a,b"]
        )
        assert result.exit_code == 2


class TestCorrect:
    def test_correct_round_trip(self, runner, tmp_path):
        doc = dict(GOLDEN, correction={"rho": 1.0})
        path = tmp_path / "c.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["correct", str(path)])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["correction"]["rho"] == 1.0
        assert report["correction"]["sup_norm_after"] == 0.0

    def test_correct_without_plan_exits_2(self, runner, scenario_file):
        result = runner.invoke(main, ["correct", scenario_file])
        assert result.exit_code == 2
        assert json.loads(result.stderr)["errors"][0]["path"] == "correction"
