"""Stage verdicts: evidence items, severities and pass/fail results."""

from bogolyubov.checks.base import CheckResult, Evidence, Severity, format_summary

__all__ = ["CheckResult", "Evidence", "Severity", "format_summary"]
