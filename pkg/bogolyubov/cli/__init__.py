"""Scenario configuration, runner, report rendering and the command-line entry point."""

from bogolyubov.cli.config import ScenarioConfig, load_config, parse_config, shipped_scenarios
from bogolyubov.cli.report import report
from bogolyubov.cli.runner import ConvergenceTable, RunResult, ScenarioRunner

__all__ = [
    "ConvergenceTable",
    "RunResult",
    "ScenarioConfig",
    "ScenarioRunner",
    "load_config",
    "parse_config",
    "report",
    "shipped_scenarios",
]
