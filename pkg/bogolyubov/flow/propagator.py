"""Cauchy operators G_A(t, tau) of x' = A(t) x.

Two one-step schemes advance a batch of base points at once:

* classical fourth-order Runge-Kutta, with A evaluated at an array of times
  and one ``matmul`` per stage;
* the exponential scheme exp(integral of A over the step), used when A
  carries a Levitan factor. Its step integrals are exact (quadrature for the
  Levitan part), so it stays accurate through the near-resonances where the
  factor oscillates too fast for RK4. It is exact when the values of A
  commute, in particular in one dimension.

Every step is checked by step doubling: one step of size h is compared with
two of size h/2, the two half steps are kept, and a step whose estimate
exceeds ``LOCAL_ERROR_TOL`` is split in two until it passes.
"""

import logging
import math
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.linalg import mat_exp, mat_exp_stack
from bogolyubov.core.types import as_finite_scalar
from bogolyubov.exceptions import InvalidArgumentError, StepSizeError

logger = logging.getLogger(__name__)

LOCAL_ERROR_TOL = 1e-6
# Largest number of times one requested step may be split in two.
MAX_HALVINGS = 12


class StepScheme(str, Enum):
    """One-step scheme for x' = A(t) x."""

    RK4 = "rk4"
    EXPONENTIAL = "exponential"


def scheme_for(A: TrigSeries) -> StepScheme:
    """Exponential steps for operators with a Levitan factor, RK4 otherwise."""
    return StepScheme.EXPONENTIAL if A.levitan is not None else StepScheme.RK4


def _require_step(step: float) -> float:
    step = float(step)
    if not math.isfinite(step) or step <= 0:
        raise InvalidArgumentError(f"step must be positive, got {step}", argument="step")
    return step


def _rk4_step(A: TrigSeries, t: np.ndarray, U: np.ndarray, h: float) -> np.ndarray:
    k1 = A(t) @ U
    a_mid = A(t + 0.5 * h)
    k2 = a_mid @ (U + 0.5 * h * k1)
    k3 = a_mid @ (U + 0.5 * h * k2)
    k4 = A(t + h) @ (U + h * k3)
    return U + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _doubled_step(
    A: TrigSeries, t: np.ndarray, h: float, scheme: StepScheme
) -> tuple[np.ndarray, np.ndarray]:
    """One-step operators from t: (single step of size h, two steps of size h/2)."""
    d = A.shape[0]
    if scheme == StepScheme.EXPONENTIAL:
        first = A.integral(t, 0.5 * h)
        second = A.integral(t + 0.5 * h, 0.5 * h)
        full = mat_exp_stack(first + second)
        half = mat_exp_stack(second) @ mat_exp_stack(first)
        return full, half
    eye = np.broadcast_to(np.eye(d), (t.shape[0], d, d))
    full = _rk4_step(A, t, eye, h)
    half = _rk4_step(A, t + 0.5 * h, _rk4_step(A, t, eye, 0.5 * h), 0.5 * h)
    return full, half


def _error_of(full: np.ndarray, half: np.ndarray) -> float:
    scale = np.maximum(1.0, np.linalg.norm(half, ord=2, axis=(1, 2)))
    return float(np.max(np.linalg.norm(full - half, ord=2, axis=(1, 2)) / scale))


def local_error(A: TrigSeries, t: npt.ArrayLike, h: float) -> float:
    """Step-doubling estimate of the local error of one step of size h from t.

    The estimate belongs to the scheme :func:`scheme_for` picks for A.
    """
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return _error_of(*_doubled_step(A, t, h, scheme_for(A)))


def _advance(A: TrigSeries, t: np.ndarray, h: float, scheme: StepScheme, depth: int = 0) -> np.ndarray:
    """Checked one-step operators over [t, t + h], splitting h until the estimate passes.

    Raises:
        StepSizeError: If the step is still too coarse after MAX_HALVINGS splits.
    """
    full, half = _doubled_step(A, t, h, scheme)
    err = _error_of(full, half)
    if err <= LOCAL_ERROR_TOL:
        return half
    if depth >= MAX_HALVINGS:
        raise StepSizeError(
            f"{scheme.value} local error {err:.3e} at step {h:.3e} exceeds {LOCAL_ERROR_TOL:.0e} "
            f"after {MAX_HALVINGS} halvings",
            step=h,
        )
    first = _advance(A, t, 0.5 * h, scheme, depth + 1)
    return _advance(A, t + 0.5 * h, 0.5 * h, scheme, depth + 1) @ first


def cauchy_operator(A: TrigSeries, t: float, tau: float, step: float) -> np.ndarray:
    """Return G_A(t, tau) = U(t) U(tau)^-1.

    Constant operators use the matrix exponential; otherwise dU/ds = A(s) U is
    integrated from tau to t (backward when t < tau) with checked steps of at
    most ``step``.

    Raises:
        InvalidArgumentError: If step <= 0 or t, tau are not finite.
        StepSizeError: If some step misses the 1e-6 local error target even
            after repeated halving.
    """
    step = _require_step(step)
    t = as_finite_scalar(t, "t")
    tau = as_finite_scalar(tau, "tau")
    d = A.shape[0]
    if t == tau:
        return np.eye(d)
    if A.is_constant:
        return mat_exp(A.base, t - tau)

    scheme = scheme_for(A)
    n = int(math.ceil(abs(t - tau) / step))
    h = (t - tau) / n
    times = np.array([tau])
    U = np.eye(d)[None, :, :]
    for k in range(n):
        U = _advance(A, times + k * h, h, scheme) @ U
    return U[0]


def propagate_from(
    A: TrigSeries, taus: npt.ArrayLike, separations: npt.ArrayLike, step: float
) -> np.ndarray:
    """G_A(tau + s, tau) for every base point tau and separation s.

    Every step along the grid is checked, not only the first one.

    Args:
        A: Operator series
        taus: Base points, shape (m,)
        separations: Strictly increasing non-negative separations, shape (k,)
        step: Largest integration step

    Returns:
        Array of shape (m, k, d, d).

    Raises:
        StepSizeError: If some step misses the local error target even after
            repeated halving.
    """
    step = _require_step(step)
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    separations = np.atleast_1d(np.asarray(separations, dtype=np.float64))
    if np.any(separations < 0) or np.any(np.diff(separations) <= 0):
        raise InvalidArgumentError("separations must be non-negative and strictly increasing")
    m, d = taus.shape[0], A.shape[0]
    out = np.empty((m, separations.shape[0], d, d))

    if A.is_constant:
        for j, s in enumerate(separations):
            out[:, j] = mat_exp(A.base, s)
        return out

    scheme = scheme_for(A)
    U = np.broadcast_to(np.eye(d), (m, d, d)).copy()
    position = 0.0
    for j, s in enumerate(separations):
        gap = s - position
        if gap > 0:
            n = int(math.ceil(gap / step - 1e-9))
            h = gap / n
            for k in range(n):
                U = _advance(A, taus + position + k * h, h, scheme) @ U
            position = s
        out[:, j] = U
    return out


def step_propagators(A: TrigSeries, t_grid: npt.ArrayLike, step: float) -> np.ndarray:
    """One-step propagators G_A(t_{k+1}, t_k) on a grid, shape (K - 1, d, d)."""
    t_grid = np.asarray(t_grid, dtype=np.float64)
    dt = np.diff(t_grid)
    if np.any(dt <= 0):
        raise InvalidArgumentError("t_grid must be strictly increasing", argument="t_grid")
    h = float(dt.mean())
    if np.max(np.abs(dt - h)) > 1e-9 * max(h, 1.0):
        return np.stack(
            [cauchy_operator(A, b, a, step) for a, b in zip(t_grid[:-1], t_grid[1:])]
        )
    return propagate_from(A, t_grid[:-1], [h], step)[:, 0]


def propagator_norms(propagators: np.ndarray) -> np.ndarray:
    """Operator 2-norms over the trailing two axes."""
    return np.linalg.norm(propagators, ord=2, axis=(-2, -1))


def as_operator_series(A: Any) -> TrigSeries:
    """Accept a series or a constant matrix."""
    if isinstance(A, TrigSeries):
        return A
    arr = np.asarray(A, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    return TrigSeries.constant(arr)
