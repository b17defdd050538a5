"""Tests for the command-line entry point."""

import pytest

from bogolyubov.cli.main import (
    EXIT_NUMERICAL,
    EXIT_VALIDATION,
    build_parser,
    exit_code_for,
    main,
)
from bogolyubov.exceptions import (
    CertificateViolationError,
    DivergenceError,
    RefuseToRunError,
    StepSizeError,
)


class TestParser:
    """Tests for build_parser."""

    def test_run_options(self):
        """eps lists are parsed from comma-separated text."""
        args = build_parser().parse_args(
            ["run", "--config", "stationary_ou", "--eps", "0.2,0.1", "--seed", "5", "--threads", "2"]
        )
        assert args.command == "run"
        assert args.eps == [0.2, 0.1]
        assert args.seed == 5
        assert args.threads == 2
        assert args.out is None

    def test_report_positional(self):
        """report takes the artifact directory."""
        args = build_parser().parse_args(["-q", "report", "runs/x"])
        assert args.artifacts == "runs/x"
        assert args.quiet

    @pytest.mark.parametrize(
        "argv",
        [
            ["run"],
            ["run", "--config", "x", "--eps", "a,b"],
            ["run", "--config", "x", "--eps", ","],
            ["run", "--config", "x", "--seed", "-1"],
            ["-v", "-q", "report", "x"],
            [],
        ],
    )
    def test_rejected(self, argv):
        """Malformed command lines exit through argparse."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(argv)


class TestExitCodes:
    """Tests for exit_code_for and main."""

    def test_numerical_errors(self):
        """Divergence and step-size failures exit 3."""
        assert exit_code_for(DivergenceError("boom", path_index=0, time=1.0, value=1e7)) == EXIT_NUMERICAL
        assert exit_code_for(StepSizeError("coarse", step=0.1)) == EXIT_NUMERICAL

    def test_validation_errors(self):
        """Other library errors exit 2."""
        assert exit_code_for(CertificateViolationError("beaten")) == EXIT_VALIDATION
        assert exit_code_for(RefuseToRunError("no", inequality="L < 1")) == EXIT_VALIDATION

    def test_report_on_empty_directory(self, tmp_path, capsys):
        """A missing artifact is a validation failure naming the file."""
        assert main(["-q", "report", str(tmp_path)]) == EXIT_VALIDATION
        assert "averaging.csv" in capsys.readouterr().err

    def test_unknown_scenario(self, capsys):
        """Unknown scenario names are configuration errors."""
        assert main(["-q", "run", "--config", "no_such_scenario"]) == EXIT_VALIDATION
        assert "invalid configuration (config)" in capsys.readouterr().err

    def test_bad_thread_count(self, capsys):
        """--threads below 1 is rejected before any work."""
        assert main(["-q", "sweep", "--config", "stationary_ou", "--threads", "0"]) == EXIT_VALIDATION
        assert "(threads)" in capsys.readouterr().err

    def test_override_validation(self, capsys):
        """Overrides that break the schema are configuration errors."""
        assert main(["-q", "run", "--config", "stationary_ou", "--eps", "0.1,0.2"]) == EXIT_VALIDATION
        assert "sweep" in capsys.readouterr().err
