"""Plain-text rendering of a scenario's artifact directory.

Rendering reads only the files :class:`ScenarioRunner` wrote, so running it
twice on the same directory gives the same text.
"""

import csv
import json
from pathlib import Path
from typing import Any, Sequence, Union

from bogolyubov.checks.base import CheckResult, format_summary
from bogolyubov.cli.runner import STAGES, SUMMARY_FILE, artifact_name
from bogolyubov.exceptions import ArtifactMissingError

REQUIRED_ARTIFACTS = tuple(artifact_name(stage) for stage in STAGES) + (SUMMARY_FILE,)
CONSTANT_KEYS = ("N", "nu", "gamma0", "r", "alpha_observed", "burn_in")


def _require_artifacts(directory: Path) -> None:
    for name in REQUIRED_ARTIFACTS:
        path = directory / name
        if not path.is_file():
            raise ArtifactMissingError(f"missing artifact {name} in {directory}", path=str(path))


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        raise ArtifactMissingError(f"artifact {path.name} is empty", path=str(path))
    return rows[0], rows[1:]


def _read_summary(path: Path) -> dict[str, Any]:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise ArtifactMissingError(f"artifact {path.name} does not parse: {exc}", path=str(path)) from exc


def _short(cell: str) -> str:
    try:
        value = float(cell)
    except ValueError:
        return cell
    if cell.lstrip("-").isdigit():
        return cell
    return f"{value:.6g}"


def render_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned text table with a title line."""
    cells = [list(columns)] + [[_short(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = [title]
    for k, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _floor_tolerances(results: Sequence[CheckResult]) -> dict[float, float]:
    """Floor tolerance per eps recorded by the law sweep stage."""
    out = {}
    for result in results:
        if result.check_name != "law_sweep":
            continue
        for e in result.evidence:
            if e.check_name.startswith("beta_eps_") and e.details and "floor_tolerance" in e.details:
                out[float(e.check_name[len("beta_eps_"):])] = float(e.details["floor_tolerance"])
    return out


def _law_rows(rows: list[list[str]], tolerances: dict[float, float]) -> list[list[str]]:
    """Collapse (epsilon, t, beta, floor, n) cells to one sup row per eps.

    The at-floor verdict uses the stage's floor tolerance when the summary
    records one, and the largest mean floor otherwise.
    """
    per_eps: dict[str, list[list[str]]] = {}
    for row in rows:
        per_eps.setdefault(row[0], []).append(row)
    out = []
    for eps, cells in per_eps.items():
        best = max(cells, key=lambda c: float(c[2]))
        floor = max(float(c[3]) for c in cells)
        bound = tolerances.get(float(f"{float(eps):g}"), floor)
        at_floor = "yes" if float(best[2]) <= bound else "no"
        out.append([eps, best[1], best[2], repr(floor), at_floor])
    return out


def report(artifact_dir: Union[str, Path], verbose: bool = False) -> str:
    """Render verdicts, constants and convergence tables of a finished run.

    Raises:
        ArtifactMissingError: Naming the first missing or unparsable artifact.
    """
    directory = Path(artifact_dir)
    _require_artifacts(directory)
    summary = _read_summary(directory / SUMMARY_FILE)
    results = [CheckResult.from_dict(stage) for stage in summary.get("stages", [])]

    constants = summary.get("constants", {})
    lines = [
        f"Scenario: {summary.get('scenario')}",
        f"Schema:   {summary.get('schema')}",
        f"Seed:     {summary.get('seed')}",
        f"eps:      {', '.join(f'{e:g}' for e in summary.get('eps', []))}",
        "",
        "Constants:",
    ]
    for key in CONSTANT_KEYS:
        value = constants.get(key)
        lines.append(f"  {key:<15} {'n/a' if value is None else f'{value:.6g}'}")
    lines.append(format_summary(results, verbose=verbose))

    columns, rows = _read_csv(directory / artifact_name("gap"))
    lines.append(render_table("Rescaled gap N(eps):", columns, rows))
    lines.append("")
    columns, rows = _read_csv(directory / artifact_name("coupled_deviation"))
    lines.append(render_table("Coupled L2 deviation:", columns, rows))
    lines.append("")
    _, rows = _read_csv(directory / artifact_name("law_sweep"))
    lines.append(
        render_table(
            "Law sweep (sup over t):",
            ("epsilon", "t_star", "sup_beta", "noise_floor", "at_floor"),
            _law_rows(rows, _floor_tolerances(results)),
        )
    )
    lines.append("")
    verdict = "PASS" if summary.get("passed") else "FAIL"
    lines.append(f"VERDICT: {verdict}")
    return "\n".join(lines) + "\n"
