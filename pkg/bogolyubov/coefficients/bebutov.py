"""Bebutov (compact-open) distance and almost-period search."""

import logging
import math
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.parallel import ordered_map
from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 100.0
# Upper bound on deviation entries materialized per chunk of candidate shifts.
_CHUNK_ENTRIES = 4_000_000


class BebutovDistance(NamedTuple):
    """Truncated Bebutov distance with its truncation bound 2^-k_max."""

    value: float
    truncation_bound: float


def _time_function(obj: Any) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(obj, CoefficientSystem):
        return obj.signature
    if callable(obj):
        return obj
    raise InvalidArgumentError(f"cannot evaluate object of type {type(obj).__name__} in time")


def _sample(fn: Callable[[np.ndarray], Any], t: np.ndarray) -> np.ndarray:
    """Evaluate on a grid; returns shape (n,) or (n, K)."""
    values = np.asarray(fn(t), dtype=np.float64)
    if values.ndim == 0:
        values = np.full(t.shape, float(values))
    if values.ndim > 2:
        values = values.reshape(values.shape[0], -1)
    return values


def _pointwise_norm(diff: np.ndarray, axis: int = -1) -> np.ndarray:
    if diff.ndim == 1:
        return np.abs(diff)
    return np.sqrt(np.sum(diff * diff, axis=axis))


def bebutov_distance(phi1: Any, phi2: Any, k_max: int, grid_step: float) -> BebutovDistance:
    """Return sum_{k=1}^{k_max} 2^-k d_k/(1 + d_k), d_k = max_{|t|<=k} |phi1 - phi2|.

    Both arguments are vectorized callables of time or coefficient systems
    (compared through their signature at probe states).
    """
    if k_max < 1:
        raise InvalidArgumentError(f"k_max must be >= 1, got {k_max}", argument="k_max")
    if not grid_step > 0:
        raise InvalidArgumentError(f"grid_step must be positive, got {grid_step}", argument="grid_step")
    n_points = int(round(2 * k_max / grid_step)) + 1
    t = np.linspace(-float(k_max), float(k_max), n_points)
    deviation = _pointwise_norm(_sample(_time_function(phi1), t) - _sample(_time_function(phi2), t))

    value = 0.0
    for k in range(1, k_max + 1):
        d_k = float(deviation[np.abs(t) <= k + 1e-12].max())
        value += 2.0**-k * d_k / (1.0 + d_k)
    return BebutovDistance(value=value, truncation_bound=2.0**-k_max)


def find_almost_periods(
    phi: Callable[[np.ndarray], Any],
    epsilon: float,
    search_interval: tuple[float, float],
    grid_step: float,
    window: float = DEFAULT_WINDOW,
    threads: int = 1,
) -> list[float]:
    """Grid points tau in [l, L] with sup_{|t|<=window} |phi(t + tau) - phi(t)| < epsilon.

    Candidate shifts and window times share one grid of spacing
    ``grid_step``, so phi is sampled once on [l - W, L + W] and every
    candidate reads a sliding view of that sample.

    Returns:
        Ascending list of epsilon-almost periods (possibly empty).
    """
    lo, hi = (float(v) for v in search_interval)
    if not epsilon > 0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}", argument="epsilon")
    if not lo < hi:
        raise InvalidArgumentError(f"search interval must satisfy l < L, got {search_interval}")
    if not grid_step > 0 or not window > 0:
        raise InvalidArgumentError("grid_step and window must be positive")
    fn = _time_function(phi)

    n_window = int(round(2 * window / grid_step)) + 1
    n_shift = int(math.floor((hi - lo) / grid_step + 1e-9)) + 1
    base = _sample(fn, -window + grid_step * np.arange(n_window))
    shifted = _sample(fn, -window + lo + grid_step * np.arange(n_window + n_shift - 1))
    views = sliding_window_view(shifted, n_window, axis=0)

    width = 1 if base.ndim == 1 else base.shape[1]
    chunk = max(1, _CHUNK_ENTRIES // (n_window * width))
    starts = list(range(0, n_shift, chunk))

    def sup_deviation(start: int) -> np.ndarray:
        block = views[start : start + chunk]
        if base.ndim == 1:
            return np.max(np.abs(block - base), axis=1)
        diff = block - base.T[None, :, :]
        return np.max(np.sqrt(np.sum(diff * diff, axis=1)), axis=1)

    deviations = np.concatenate(ordered_map(sup_deviation, starts, threads))
    hits = np.nonzero(deviations < epsilon)[0]
    taus = [lo + grid_step * int(i) for i in hits]
    if not taus:
        logger.warning(f"no {epsilon}-almost periods on [{lo}, {hi}] at step {grid_step}")
    else:
        logger.debug(f"found {len(taus)} {epsilon}-almost periods on [{lo}, {hi}]")
    return taus


def verify_almost_period(
    phi: Callable[[np.ndarray], Any], tau: float, window: float = DEFAULT_WINDOW, step: float = 1e-3
) -> float:
    """Dense re-check: sup over |t| <= window of |phi(t + tau) - phi(t)|."""
    fn = _time_function(phi)
    t = np.linspace(-window, window, int(round(2 * window / step)) + 1)
    return float(np.max(_pointwise_norm(_sample(fn, t + tau) - _sample(fn, t))))


def almost_period_gap(taus: Sequence[float], search_interval: tuple[float, float]) -> float:
    """Largest gap between consecutive almost periods, the interval ends included.

    A finite value witnesses relative density on the searched interval;
    an empty set gives infinity.
    """
    if not len(taus):
        return math.inf
    lo, hi = search_interval
    points = np.concatenate([[lo], np.sort(np.asarray(taus, dtype=np.float64)), [hi]])
    return float(np.max(np.diff(points)))
