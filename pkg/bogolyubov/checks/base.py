"""Stage verdicts for scenario runs.

Each runner stage produces a :class:`CheckResult`: a pass/fail verdict, a
score in [0, 1], and evidence items that say which quantity was compared
against which bound. Results carry no timestamps so serialized reports are
reproducible byte for byte.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class Severity(str, Enum):
    """Severity level for evidence items."""

    INFO = "info"  # Measured value, no verdict attached
    WARN = "warn"  # Degraded but not failing (row at noise floor, no claim made)
    ERROR = "error"  # Fails the check


@dataclass
class Evidence:
    """One measured fact behind a verdict.

    Attributes:
        check_name: Name of the specific comparison (e.g. "gap_monotone")
        description: Human-readable statement of the finding
        severity: How serious this finding is
        details: Structured values (measured, bound, standard error, ...)
    """

    check_name: str
    description: str
    severity: Severity = Severity.INFO
    details: Optional[dict[str, Any]] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_name": self.check_name,
            "description": self.description,
            "severity": self.severity.value,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Evidence":
        return cls(
            check_name=data["check_name"],
            description=data["description"],
            severity=Severity(data.get("severity", "info")),
            details=data.get("details"),
        )


@dataclass
class CheckResult:
    """Verdict of one stage.

    Attributes:
        check_name: Stage that produced the result
        passed: Whether every acceptance comparison held
        score: Fraction of comparisons that held, 0.0 to 1.0
        evidence: Evidence items explaining the result
        metadata: Stage constants (N, nu, gamma0, r, ...)
    """

    check_name: str
    passed: bool
    score: float
    evidence: list[Evidence] = field(default_factory=list)
    metadata: Optional[dict[str, Any]] = None

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"Score must be between 0.0 and 1.0, got {self.score}")

    @classmethod
    def from_evidence(
        cls, check_name: str, evidence: list[Evidence], metadata: Optional[dict[str, Any]] = None
    ) -> "CheckResult":
        """Verdict passing when no evidence item is an error; score is the non-error share."""
        graded = [e for e in evidence if e.severity != Severity.INFO]
        failed = sum(1 for e in graded if e.severity == Severity.ERROR)
        score = 1.0 if not graded else 1.0 - failed / len(graded)
        return cls(check_name, failed == 0, score, evidence, metadata)

    @property
    def errors(self) -> list[Evidence]:
        return [e for e in self.evidence if e.severity == Severity.ERROR]

    @property
    def warnings(self) -> list[Evidence]:
        return [e for e in self.evidence if e.severity == Severity.WARN]

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_name": self.check_name,
            "passed": self.passed,
            "score": self.score,
            "evidence": [e.to_dict() for e in self.evidence],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CheckResult":
        return cls(
            check_name=data["check_name"],
            passed=bool(data["passed"]),
            score=float(data["score"]),
            evidence=[Evidence.from_dict(e) for e in data.get("evidence", [])],
            metadata=data.get("metadata"),
        )

    def format_report(self, verbose: bool = False) -> str:
        """Render the verdict as a plain-text block."""
        lines = ["", "=" * 60, f"STAGE: {self.check_name}", "=" * 60]

        status = "PASSED" if self.passed else "FAILED"
        icon = "[OK]" if self.passed else "[FAIL]"
        lines.append("")
        lines.append(f"Result: {icon} {status}")
        lines.append(f"Score:  {self.score:.2f} / 1.00")

        if self.metadata:
            lines.append("")
            lines.append("CONSTANTS:")
            for key in sorted(self.metadata):
                value = self.metadata[key]
                if isinstance(value, (int, float, str, bool)) or value is None:
                    lines.append(f"  {key}: {_format_value(value)}")

        errors = self.errors
        if errors:
            lines.append("")
            lines.append(f"ERRORS ({len(errors)}):")
            for e in errors:
                lines.append(f"  [ERROR] {e.check_name}")
                lines.append(f"          {e.description}")
                if verbose and e.details:
                    for k, v in e.details.items():
                        lines.append(f"          {k}: {_format_value(v)}")

        warnings = self.warnings
        if warnings:
            lines.append("")
            lines.append(f"WARNINGS ({len(warnings)}):")
            for e in warnings:
                lines.append(f"  [WARN]  {e.check_name}")
                lines.append(f"          {e.description}")

        info = [e for e in self.evidence if e.severity == Severity.INFO]
        if info:
            lines.append("")
            lines.append("MEASURED:")
            for e in info:
                lines.append(f"  [{e.check_name}] {e.description}")

        lines.append("")
        lines.append("-" * 60)
        return "\n".join(lines)

    def __str__(self) -> str:
        status = "PASSED" if self.passed else "FAILED"
        return f"CheckResult({self.check_name}: {status}, score={self.score:.2f})"


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_summary(results: list[CheckResult], verbose: bool = False) -> str:
    """Concatenate stage reports with an overall verdict line."""
    blocks = [r.format_report(verbose=verbose) for r in results]
    n_passed = sum(1 for r in results if r.passed)
    blocks.append(f"OVERALL: {n_passed}/{len(results)} stages passed")
    return "\n".join(blocks) + "\n"
