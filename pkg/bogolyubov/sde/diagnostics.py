"""Time relabeling between equations and path-regularity diagnostics."""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from bogolyubov.core.types import EquationKind, EquationTag
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.sde.ensemble import PathEnsemble

logger = logging.getLogger(__name__)

MIN_LAGS = 4
DEFAULT_MAX_LAG = 10


def rescale_time(ensemble: PathEnsemble) -> PathEnsemble:
    """Read a rescaled(eps) ensemble as the original equation: t -> t / eps.

    Path values are untouched; only the grid and the tag change.

    Raises:
        InvalidArgumentError: If the ensemble is not tagged rescaled(eps).
    """
    tag = ensemble.tag
    if tag.kind != EquationKind.RESCALED:
        raise InvalidArgumentError(
            f"rescale_time needs a rescaled ensemble, got {tag.label}", argument="ensemble"
        )
    return ensemble.relabel(ensemble.time_grid / tag.eps, EquationTag.original(tag.eps))


def unrescale_time(ensemble: PathEnsemble) -> PathEnsemble:
    """Inverse of :func:`rescale_time`: original(eps) -> rescaled(eps), t -> eps t."""
    tag = ensemble.tag
    if tag.kind != EquationKind.ORIGINAL:
        raise InvalidArgumentError(
            f"unrescale_time needs an original ensemble, got {tag.label}", argument="ensemble"
        )
    return ensemble.relabel(ensemble.time_grid * tag.eps, EquationTag.rescaled(tag.eps))


@dataclass(frozen=True, eq=False)
class ContinuityModulus:
    """Mean squared increments E|X(t + h) - X(t)|^2 averaged over t.

    Attributes:
        lags: Lag lengths h
        values: Modulus at each lag
        standard_errors: Across-path standard errors
        slope: Least-squares slope C of values ~ C h through the origin
        r_squared: Centered coefficient of determination of that fit
    """

    lags: np.ndarray
    values: np.ndarray
    standard_errors: np.ndarray
    slope: float
    r_squared: float

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.lags.tolist(), self.values.tolist(), self.standard_errors.tolist()))

    def to_dict(self) -> dict[str, Any]:
        return {
            "lags": self.lags.tolist(),
            "values": self.values.tolist(),
            "slope": self.slope,
            "r_squared": self.r_squared,
        }


def _through_origin_fit(h: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    slope = float(h @ v / (h @ h))
    residual = float(np.sum((v - slope * h) ** 2))
    total = float(np.sum((v - v.mean()) ** 2))
    if total == 0.0:
        return slope, 1.0 if residual == 0.0 else 0.0
    return slope, 1.0 - residual / total


def continuity_modulus(
    ensemble: PathEnsemble, lag_steps: Optional[Sequence[int]] = None
) -> ContinuityModulus:
    """Empirical continuity modulus of an ensemble with a through-origin linear fit.

    Args:
        ensemble: Paths on a uniform grid
        lag_steps: Lags in grid steps; 1..min(10, n_times - 1) by default

    Raises:
        InvalidArgumentError: If fewer than four distinct lags are available.
    """
    n_times = ensemble.n_times
    if lag_steps is None:
        lag_steps = range(1, min(DEFAULT_MAX_LAG, n_times - 1) + 1)
    lag_steps = sorted({int(k) for k in lag_steps if 0 < int(k) < n_times})
    if len(lag_steps) < MIN_LAGS:
        raise InvalidArgumentError(
            f"continuity modulus needs >= {MIN_LAGS} distinct lags, got {len(lag_steps)}",
            argument="lag_steps",
        )
    step = ensemble.step
    values, errors = [], []
    for k in lag_steps:
        increments = ensemble.paths[:, k:, :] - ensemble.paths[:, :-k, :]
        per_path = np.sum(increments**2, axis=2).mean(axis=1)
        values.append(per_path.mean())
        n = per_path.shape[0]
        errors.append(per_path.std(ddof=1) / np.sqrt(n) if n > 1 else 0.0)

    lags = step * np.asarray(lag_steps, dtype=np.float64)
    values = np.asarray(values)
    slope, r_squared = _through_origin_fit(lags, values)
    logger.debug(f"continuity modulus: slope {slope:.6g}, R^2 {r_squared:.4f}")
    return ContinuityModulus(
        lags=lags,
        values=values,
        standard_errors=np.asarray(errors),
        slope=slope,
        r_squared=r_squared,
    )


@dataclass(frozen=True, eq=False)
class RunningSupMoment:
    """E sup_{t <= s <= t + h} |X(s)|^2 for each window start t."""

    window: float
    starts: np.ndarray
    values: np.ndarray
    standard_errors: np.ndarray

    @property
    def sup(self) -> float:
        return float(np.max(self.values))


def running_sup_moment(ensemble: PathEnsemble, window: float) -> RunningSupMoment:
    """Mean over paths of the running maximum of |X|^2 over windows of length ``window``.

    Raises:
        InvalidArgumentError: If the window is shorter than one grid step or
            longer than the grid.
    """
    step = ensemble.step
    if step == 0.0:
        raise InvalidArgumentError("running sup needs at least two grid points")
    span = int(round(window / step))
    if span < 1 or span >= ensemble.n_times:
        raise InvalidArgumentError(
            f"window {window} must cover 1..{ensemble.n_times - 1} grid steps", argument="window"
        )
    squared = np.sum(ensemble.paths**2, axis=2)
    windows = np.lib.stride_tricks.sliding_window_view(squared, span + 1, axis=1)
    running = windows.max(axis=2)
    n = running.shape[0]
    se = running.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(running.shape[1])
    return RunningSupMoment(
        window=span * step,
        starts=ensemble.time_grid[: running.shape[1]].copy(),
        values=running.mean(axis=0),
        standard_errors=se,
    )
