"""Heuristic recurrence-comparability probe.

If shifts t_n bring the coefficients back close to themselves, the law of the
bounded solution should come back too: over a compact window,
s_n = max_t beta(law xi(t + t_n), law xi(t)) should be dominated by
c d_n + floor with d_n the Bebutov distance of the shifted coefficients. The
probe fits c on the shifts that satisfy the hypothesis and reports the rest.
Passing is consistency with the inclusion, never a proof of it.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from bogolyubov.coefficients.bebutov import bebutov_distance
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.metrics.beta import beta_distance
from bogolyubov.metrics.law import EmpiricalLaw
from bogolyubov.metrics.sweep import FLOOR_SHUFFLES, marginal_floors
from bogolyubov.sde.ensemble import PathEnsemble

logger = logging.getLogger(__name__)

# Shifts with Bebutov distance above this make no claim on the solution law.
HYPOTHESIS_THRESHOLD = 0.25
# Largest admissible domination constant c.
C_MAX = 10.0
# Sampling noise allowance, in units of the measured floor.
FLOOR_FACTOR = 1.5

EnsembleProvider = Callable[[np.ndarray], PathEnsemble]


@dataclass(frozen=True)
class ProbeRow:
    """One shift t_n: coefficient distance d_n and solution-law distance s_n."""

    shift: float
    coefficient_distance: float
    law_distance: float
    in_hypothesis: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "shift": self.shift,
            "d_n": self.coefficient_distance,
            "s_n": self.law_distance,
            "in_hypothesis": self.in_hypothesis,
        }


@dataclass
class ComparabilityReport:
    """Outcome of a comparability probe.

    Attributes:
        rows: One row per shift
        noise_floor: Largest split-half floor over the window grid
        c: Fitted domination constant over in-hypothesis rows
        passed: Every in-hypothesis row satisfies s_n <= c d_n + 1.5 floor with c <= C_MAX
    """

    rows: list[ProbeRow] = field(default_factory=list)
    noise_floor: float = 0.0
    c: float = 0.0
    passed: bool = True

    @property
    def n_tested(self) -> int:
        return sum(1 for row in self.rows if row.in_hypothesis)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "noise_floor": self.noise_floor,
            "c": self.c,
            "n_tested": self.n_tested,
            "passed": self.passed,
        }


def fit_domination(
    rows: Sequence[ProbeRow], floor: float, floor_factor: float = FLOOR_FACTOR, c_max: float = C_MAX
) -> tuple[float, bool]:
    """Smallest c with s_n <= c d_n + floor_factor floor over in-hypothesis rows."""
    allowance = floor_factor * floor
    c, passed = 0.0, True
    for row in rows:
        if not row.in_hypothesis:
            continue
        excess = row.law_distance - allowance
        if excess <= 0:
            continue
        if row.coefficient_distance <= 0:
            passed = False
            continue
        c = max(c, excess / row.coefficient_distance)
    return c, passed and c <= c_max


def comparability_probe(
    system: CoefficientSystem,
    provider: EnsembleProvider,
    shifts: Sequence[float],
    window: float,
    n_window: int = 11,
    k_max: int = 10,
    grid_step: float = 0.05,
    hypothesis_threshold: float = HYPOTHESIS_THRESHOLD,
    floor_shuffles: int = FLOOR_SHUFFLES,
    seed: int = 0,
    base: Optional[PathEnsemble] = None,
    threads: int = 1,
) -> ComparabilityReport:
    """Compare coefficient shift distances with solution-law shift distances.

    Args:
        system: Coefficients of the equation whose solution the provider samples
        provider: Maps a time grid to an ensemble of the bounded solution on it
        shifts: Shift times t_n, typically near-periods of the coefficients
        window: Length of the compact window [0, window] compared
        n_window: Grid points in the window
        k_max: Bebutov truncation level
        grid_step: Sampling step of the Bebutov distance
        base: Pre-computed ensemble on the window grid, drawn from the provider otherwise

    Raises:
        InvalidArgumentError: If the window or shift list is empty.
    """
    if not window > 0 or n_window < 2:
        raise InvalidArgumentError("window must be positive with >= 2 grid points", argument="window")
    if not shifts:
        raise InvalidArgumentError("shift list is empty", argument="shifts")
    grid = np.linspace(0.0, window, n_window)
    base = base if base is not None else provider(grid)
    floor = float(np.max(marginal_floors(base, floor_shuffles, seed, threads)))

    rows = []
    for shift in shifts:
        d_n = bebutov_distance(system.shift(shift), system, k_max, grid_step).value
        shifted = provider(grid + shift)
        s_n = max(
            beta_distance(
                EmpiricalLaw.from_ensemble(shifted, k), EmpiricalLaw.from_ensemble(base, k), seed=seed
            ).estimate
            for k in range(n_window)
        )
        rows.append(
            ProbeRow(
                shift=float(shift),
                coefficient_distance=d_n,
                law_distance=s_n,
                in_hypothesis=d_n <= hypothesis_threshold,
            )
        )
        logger.debug(f"probe shift {shift:.6g}: d_n={d_n:.4g}, s_n={s_n:.4g}")

    c, passed = fit_domination(rows, floor)
    report = ComparabilityReport(rows=rows, noise_floor=floor, c=c, passed=passed)
    if report.n_tested == 0:
        logger.warning("no shift satisfies the comparability hypothesis; the probe makes no claim")
    logger.info(f"comparability probe: c={c:.4g}, floor={floor:.4g}, passed={passed}")
    return report
