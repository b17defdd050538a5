"""Command-line entry point: ``bogolyubov run | sweep | report``.

Exit codes: 0 success, 2 validation failure, 3 numerical failure
(divergence, step size), 4 acceptance failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from bogolyubov.cli.config import ScenarioConfig, load_config, shipped_scenario_path
from bogolyubov.cli.report import render_table, report
from bogolyubov.cli.runner import CONVERGENCE_COLUMNS, ScenarioRunner
from bogolyubov.exceptions import (
    BogolyubovError,
    ConfigError,
    NumericalError,
    RefuseToRunError,
)

logger = logging.getLogger("bogolyubov")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


def exit_code_for(exc: BogolyubovError) -> int:
    """Numerical failures exit 3, every other library error is a validation failure."""
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_VALIDATION


def _eps_list(text: str) -> list[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text}") from exc
    if not values:
        raise argparse.ArgumentTypeError("eps list is empty")
    return values


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bogolyubov",
        description="Numerical checks of averaging on the whole axis for semilinear SDEs.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="Warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    def scenario_options(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--config", required=True, help="Scenario YAML file or the name of a shipped scenario"
        )
        sub.add_argument("--eps", type=_eps_list, default=None, help="Comma-separated eps override")
        sub.add_argument("--seed", type=_seed, default=None, help="Seed override")
        sub.add_argument("--out", default=None, help="Artifact directory override")
        sub.add_argument(
            "--threads", type=int, default=None, help="Worker threads (speed only, never results)"
        )

    scenario_options(commands.add_parser("run", help="Run every stage of a scenario"))
    scenario_options(commands.add_parser("sweep", help="Tabulate deviation and beta against eps"))
    report_parser = commands.add_parser("report", help="Render the artifacts of a finished run")
    report_parser.add_argument("artifacts", help="Artifact directory written by 'run'")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        stream=sys.stderr,
    )


def _load(args: argparse.Namespace) -> ScenarioConfig:
    path = Path(args.config)
    if not path.is_file() and path.suffix == "":
        path = shipped_scenario_path(args.config)
    config = load_config(path)
    if args.threads is not None and args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}", field="threads")
    return config.with_overrides(eps=args.eps, seed=args.seed, output=args.out, threads=args.threads)


def _run(args: argparse.Namespace) -> int:
    config = _load(args)
    runner = ScenarioRunner(config)
    result = runner.run_scenario()
    print(report(runner.output_dir), end="")
    return EXIT_OK if result.passed else EXIT_ACCEPTANCE


def _sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    table = ScenarioRunner(config).sweep_epsilon()
    rows = [
        [repr(r.eps), repr(r.sup_deviation), repr(r.deviation_se), repr(r.sup_beta), repr(r.noise_floor)]
        for r in table.rows
    ]
    print(render_table("Convergence:", CONVERGENCE_COLUMNS, rows))
    verdicts = {"deviation": table.deviation_decreasing, "beta": table.beta_decreasing}
    if all(v is None for v in verdicts.values()):
        print("single eps: no monotonicity verdict")
        return EXIT_OK
    for name, verdict in verdicts.items():
        print(f"{name} decreasing: {'[OK]' if verdict else '[FAIL]'}")
    return EXIT_OK if all(verdicts.values()) else EXIT_ACCEPTANCE


def _report(args: argparse.Namespace) -> int:
    print(report(args.artifacts), end="")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    handlers = {"run": _run, "sweep": _sweep, "report": _report}
    try:
        return handlers[args.command](args)
    except RefuseToRunError as exc:
        logger.error(f"refusing to run: {exc}")
        print(f"error: {exc} [inequality {exc.inequality}]", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigError as exc:
        print(f"error: invalid configuration ({exc.field}): {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BogolyubovError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
