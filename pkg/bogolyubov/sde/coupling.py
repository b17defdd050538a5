"""Coupled rescaled/averaged solutions driven by one Brownian motion.

For linear systems the pair Z = (Y, Y_bar) of rescaled and averaged
solutions solves one linear SDE

    dZ = (blockdiag(A_eps, A_bar) Z + (f_eps, f_bar)) dt + (g_eps, g_bar) dW,

so the mean and covariance of Z, and hence E|Y - Y_bar|^2, follow
deterministic equations. ``coupled_second_moment`` integrates them either for
the exact dynamics or for the Euler-Maruyama recursion the simulator runs.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np
import numpy.typing as npt
from scipy import integrate

from bogolyubov.averaging.contraction import DEFAULT_MEMORY, ContractionReport
from bogolyubov.averaging.system import AveragedSystem
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.types import BrownianTag, EquationTag
from bogolyubov.exceptions import InvalidArgumentError, NumericalError
from bogolyubov.sde.ensemble import SolutionStatistics
from bogolyubov.sde.simulate import StepLayout, averaged_coefficients, bounded_solution

logger = logging.getLogger(__name__)

COUPLING_STREAM = 7


def default_burn_in(*reports: ContractionReport, memory: float = DEFAULT_MEMORY) -> float:
    """Longest memory horizon among the reports, so every equation forgets its start."""
    if not reports:
        raise InvalidArgumentError("need at least one contraction report", argument="reports")
    return max(report.memory_horizon(memory) for report in reports)


def coupled_deviation(
    scenario: CoefficientSystem,
    eps: float,
    t_grid: npt.ArrayLike,
    dt: float,
    n_paths: int,
    seed: int,
    contraction: ContractionReport,
    averaged: Optional[AveragedSystem] = None,
    averaged_contraction: Optional[ContractionReport] = None,
    burn_in: Optional[float] = None,
    stream: int = COUPLING_STREAM,
    threads: int = 1,
) -> SolutionStatistics:
    """Moments of the rescaled bounded solution and its deviation from the averaged one.

    Both equations are started from zero with the same burn-in and step and
    consume the same Brownian increments (same seed and stream).

    Args:
        contraction: Contraction report of the rescaled equation
        averaged: Averaged system; the plain coefficient means when omitted
        averaged_contraction: Report of the averaged equation; ``contraction`` when omitted
        burn_in: Common burn-in; the longer of the two memory horizons by default

    Raises:
        StepSizeError: If dt > 0.1 eps.
        ConsistencyError: If the two ensembles do not share a grid.
    """
    averaged_contraction = averaged_contraction or contraction
    if burn_in is None:
        burn_in = default_burn_in(contraction, averaged_contraction)
    brownian = BrownianTag.shared_with(stream)
    common = dict(
        t_grid=t_grid,
        dt=dt,
        n_paths=n_paths,
        seed=seed,
        burn_in=burn_in,
        stream=stream,
        brownian=brownian,
        threads=threads,
    )
    rescaled = bounded_solution(
        scenario, EquationTag.rescaled(eps), contraction=contraction, **common
    )
    target = averaged if averaged is not None else scenario
    mean_field = bounded_solution(
        target, EquationTag.averaged(), contraction=averaged_contraction, **common
    )
    stats = SolutionStatistics.from_pair(rescaled, mean_field)
    sup, se = stats.sup_deviation
    logger.info(f"coupled deviation eps={eps}: sup E|X_eps - X_bar|^2 = {sup:.6e} (SE {se:.2e})")
    return stats


class OracleMode(str, Enum):
    EM = "em"
    EXACT = "exact"


@dataclass(frozen=True, eq=False)
class SecondMomentCurve:
    """Deterministic E|Y - Y_bar|^2 and E|Y|^2 on a grid.

    Attributes:
        time_grid: Grid of the curve
        deviation: E|Y(t) - Y_bar(t)|^2
        second_moment: E|Y(t)|^2
        mode: Which dynamics were integrated
    """

    time_grid: np.ndarray
    deviation: np.ndarray
    second_moment: np.ndarray
    mode: OracleMode

    @property
    def sup_deviation(self) -> float:
        return float(np.max(self.deviation))

    def to_dict(self) -> dict[str, Any]:
        return {"mode": self.mode.value, "sup_deviation": self.sup_deviation}


def _joint_parts(
    system: CoefficientSystem, eps: float, averaged: Optional[AveragedSystem]
) -> tuple[TrigSeries, TrigSeries, TrigSeries, np.ndarray, np.ndarray, np.ndarray]:
    A, f, g = system.rescale(eps).linear_parts()
    if averaged is None:
        A_bar, f_bar, g_bar = averaged_coefficients(system).linear_parts()
        return A, f, g, A_bar.base, f_bar.base, g_bar.base
    A_bar, f_bar, g_bar = averaged.linear_parts()
    return A, f, g, A_bar, f_bar, g_bar


def _moments(mean: np.ndarray, cov: np.ndarray, d: int) -> tuple[float, float]:
    diff_mean = mean[:d] - mean[d:]
    diff_cov = cov[:d, :d] - cov[:d, d:] - cov[d:, :d] + cov[d:, d:]
    deviation = float(diff_mean @ diff_mean + np.trace(diff_cov))
    second = float(mean[:d] @ mean[:d] + np.trace(cov[:d, :d]))
    return deviation, second


def coupled_second_moment(
    system: CoefficientSystem,
    eps: float,
    t_grid: npt.ArrayLike,
    dt: float,
    burn_in: float,
    mode: OracleMode = OracleMode.EM,
    averaged: Optional[AveragedSystem] = None,
) -> SecondMomentCurve:
    """Deterministic second moments of the coupled pair started from zero burn_in ago.

    ``em`` propagates the mean and covariance through the Euler-Maruyama
    recursion on the same fine step layout as :func:`coupled_deviation`;
    ``exact`` integrates m' = A m + f, C' = A C + C A^T + g g^T with
    ``scipy.integrate.solve_ivp``.

    Raises:
        InvalidArgumentError: If the system is semilinear.
        NumericalError: If the ODE solver fails.
    """
    mode = OracleMode(mode)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    A, f, g, A_bar, f_bar, g_bar = _joint_parts(system, eps, averaged)
    d = A.shape[0]
    layout = StepLayout.for_grid(t_grid, dt, lead_in=burn_in)

    def drift(t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        big = np.zeros((2 * d, 2 * d))
        big[:d, :d] = A(t)
        big[d:, d:] = A_bar
        return big, np.concatenate([f(t), f_bar]), np.concatenate([g(t), g_bar])

    deviation = np.empty(t_grid.shape[0])
    second = np.empty(t_grid.shape[0])

    if mode == OracleMode.EM:
        mean = np.zeros(2 * d)
        cov = np.zeros((2 * d, 2 * d))
        eye = np.eye(2 * d)
        record = 0
        if layout.n_pre == 0:
            deviation[0], second[0] = _moments(mean, cov, d)
            record = 1
        for k in range(layout.n_steps):
            big, shift, noise = drift(layout.t_start + k * layout.h)
            B = eye + layout.h * big
            mean = B @ mean + layout.h * shift
            cov = B @ cov @ B.T + layout.h * np.outer(noise, noise)
            done = k + 1
            if done >= layout.n_pre and (done - layout.n_pre) % layout.stride == 0:
                deviation[record], second[record] = _moments(mean, cov, d)
                record += 1
        return SecondMomentCurve(t_grid, deviation, second, mode)

    n = 2 * d

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        big, shift, noise = drift(t)
        mean, cov = y[:n], y[n:].reshape(n, n)
        dcov = big @ cov + cov @ big.T + np.outer(noise, noise)
        return np.concatenate([big @ mean + shift, dcov.ravel()])

    t_start = float(t_grid[0]) - burn_in
    solution = integrate.solve_ivp(
        rhs,
        (t_start, float(t_grid[-1])),
        np.zeros(n + n * n),
        method="DOP853",
        t_eval=t_grid,
        rtol=1e-10,
        atol=1e-12,
        max_step=0.1 * min(1.0, eps),
    )
    if not solution.success:
        raise NumericalError(f"second-moment ODE failed at eps={eps}: {solution.message}")
    for k in range(t_grid.shape[0]):
        y = solution.y[:, k]
        deviation[k], second[k] = _moments(y[:n], y[n:].reshape(n, n), d)
    return SecondMomentCurve(t_grid, deviation, second, mode)
