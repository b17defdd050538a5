"""End-to-end scenario runs on reduced ensembles."""

import json

import pytest
import yaml

from bogolyubov.cli.config import parse_config, shipped_scenario_path, shipped_scenarios
from bogolyubov.cli.main import EXIT_OK, main
from bogolyubov.cli.report import REQUIRED_ARTIFACTS, report
from bogolyubov.cli.runner import STAGES, ScenarioRunner

pytestmark = pytest.mark.slow


def reduced(name: str, output, **sweep) -> dict:
    with open(shipped_scenario_path(name)) as f:
        document = yaml.safe_load(f)
    document["grid"]["n_paths"] = 200
    document["grid"].pop("n_law_paths", None)
    document["sweep"]["eps"] = [0.2, 0.1]
    document["sweep"]["probe_points"] = 3
    document["sweep"].update(sweep)
    document["output"] = str(output)
    return document


@pytest.fixture
def linear_run(tmp_path):
    document = reduced("linear_scalar_benchmark", tmp_path / "first", periods=[75.39822368615503])
    return parse_config(document)


class TestScenarioRun:
    """Full runs of the linear benchmark."""

    def test_artifacts_and_summary(self, linear_run):
        """Every stage writes its CSV and the summary lists all stages."""
        result = ScenarioRunner(linear_run).run_scenario()
        for name in REQUIRED_ARTIFACTS:
            assert (result.output_dir / name).is_file()
        summary = json.loads((result.output_dir / "summary.json").read_text())
        assert [stage["check_name"] for stage in summary["stages"]] == list(STAGES)
        assert summary["passed"] == result.passed
        assert summary["constants"]["N"] >= 1.0
        assert summary["constants"]["r"] > 0.0

    def test_reruns_are_byte_identical(self, linear_run, tmp_path):
        """Same seed, same bytes, whatever the thread count."""
        first = ScenarioRunner(linear_run).run_scenario().output_dir
        second = ScenarioRunner(
            linear_run.with_overrides(output=str(tmp_path / "second"), threads=2)
        ).run_scenario().output_dir
        for name in REQUIRED_ARTIFACTS:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_report_is_idempotent(self, linear_run):
        """Rendering a finished run twice gives the same text."""
        output = ScenarioRunner(linear_run).run_scenario().output_dir
        assert report(output) == report(output)

    def test_sweep_writes_convergence_table(self, linear_run):
        """The eps sweep tabulates one row per eps."""
        runner = ScenarioRunner(linear_run)
        table = runner.sweep_epsilon()
        assert [row.eps for row in table.rows] == [0.2, 0.1]
        lines = (runner.output_dir / "convergence.csv").read_text().splitlines()
        assert lines[0] == "epsilon,sup_deviation,deviation_se,sup_beta,noise_floor"
        assert len(lines) == 3


class TestCommandLine:
    """The run command on the control scenario and on every bundled scenario."""

    def test_run_stationary_ou(self, tmp_path, capsys):
        """The OU control passes every stage and prints the report."""
        path = tmp_path / "ou.yaml"
        path.write_text(yaml.safe_dump(reduced("stationary_ou", tmp_path / "ou")))
        code = main(["-q", "run", "--config", str(path)])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Scenario: stationary_ou" in out
        assert "VERDICT: PASS" in out
        summary = json.loads((tmp_path / "ou" / "summary.json").read_text())
        coupled = next(s for s in summary["stages"] if s["check_name"] == "coupled_deviation")
        assert coupled["passed"]

    @pytest.mark.parametrize("name", shipped_scenarios())
    def test_shipped_scenario_exits_ok(self, name, tmp_path, capsys):
        """Each bundled scenario, run as shipped, exits 0 with a passing verdict."""
        code = main(["-q", "run", "--config", name, "--out", str(tmp_path / name)])
        summary = json.loads((tmp_path / name / "summary.json").read_text())
        failed = [s["check_name"] for s in summary["stages"] if not s["passed"]]
        assert code == EXIT_OK, f"{name} failed stages {failed}"
        assert summary["passed"]
        assert capsys.readouterr().out.rstrip().endswith("VERDICT: PASS")
