"""Stochastic and deterministic exponential convolutions.

For linear equations the bounded solution is the two-sided convolution

    X(t) = int_{-inf}^t G_A(t, s) f(s) ds + int_{-inf}^t G_A(t, s) g(s) dW(s),

realized here by burn-in: the step recursion

    X_{k+1} = G_A(t_{k+1}, t_k) (X_k + f(t_k) h + g(t_k) dW_k)

starts from 0 and consumes the same Brownian increments as the
Euler-Maruyama kernel, so the two can be compared path by path.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Union

import numpy as np
import numpy.typing as npt
from scipy import optimize, signal

from bogolyubov.coefficients.fields import StateField
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import BrownianTag, EquationTag
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.flow.dichotomy import recurrence_window
from bogolyubov.flow.propagator import as_operator_series, step_propagators
from bogolyubov.sde.ensemble import PathEnsemble
from bogolyubov.sde.noise import PATH_BLOCK, BlockNoise, BrownianSource, block_count
from bogolyubov.sde.simulate import StepLayout, check_fast_step

logger = logging.getLogger(__name__)

Profile = Union[TrigSeries, StateField]

_GAUSS_NODES = 8
# Tail of the truncated convolution integral left below this.
TAIL_TOL = 1e-12
_REFINE_XATOL = 1e-12


def _state_free_profile(profile: Profile, dimension: int, name: str) -> TrigSeries:
    if isinstance(profile, StateField):
        if not profile.is_state_independent:
            raise InvalidArgumentError(
                f"{name} depends on the state; use bounded_solution", argument=name
            )
        profile = profile.offset
    if not isinstance(profile, TrigSeries):
        profile = TrigSeries.constant(np.atleast_1d(np.asarray(profile, dtype=np.float64)))
    if profile.shape != (dimension,):
        raise InvalidArgumentError(
            f"{name} must have shape ({dimension},), got {profile.shape}", argument=name
        )
    return profile


def _default_tag(A: TrigSeries, f: TrigSeries, g: TrigSeries) -> EquationTag:
    if A.is_constant and f.is_constant and g.is_constant:
        return EquationTag.averaged()
    return EquationTag.rescaled(1.0)


def _convolve_block(
    layout: StepLayout,
    phis: np.ndarray,
    f_values: np.ndarray,
    g_values: np.ndarray,
    noise: BlockNoise,
) -> np.ndarray:
    d = phis.shape[1]
    X = np.zeros((PATH_BLOCK, d))
    out = np.empty((PATH_BLOCK, layout.n_records, d))
    sqrt_h = math.sqrt(layout.h)
    record = 0
    if layout.n_pre == 0:
        out[:, 0] = X
        record = 1
    for k in range(layout.n_steps):
        dW = sqrt_h * noise.draw()[:, 0]
        X = (X + f_values[k] * layout.h + g_values[k] * dW[:, None]) @ phis[k].T
        done = k + 1
        if done >= layout.n_pre and (done - layout.n_pre) % layout.stride == 0:
            out[:, record] = X
            record += 1
    return out


def stochastic_convolution_linear(
    A: Any,
    f: Profile,
    g: Profile,
    t_grid: npt.ArrayLike,
    burn_in: float,
    dt: float,
    n_paths: int,
    seed: int,
    stream: int = 0,
    tag: Optional[EquationTag] = None,
    brownian: Optional[BrownianTag] = None,
    threads: int = 1,
) -> PathEnsemble:
    """Bounded solution of dX = (A(t)X + f(t))dt + g(t)dW by direct convolution.

    Uses the fine step layout of :func:`bounded_solution`, so with equal
    (seed, stream, dt, burn_in) both consume identical Brownian increments.

    Args:
        A: Operator series or constant matrix
        f: State-independent drift profile, shape (d,)
        g: State-independent diffusion profile, shape (d,)
        tag: Equation tag of the result; rescaled(1) for time-varying input,
            averaged for constant input when omitted

    Raises:
        InvalidArgumentError: If f or g depends on the state, or burn_in < 0.
    """
    A = as_operator_series(A)
    d = A.shape[0]
    f = _state_free_profile(f, d, "f")
    g = _state_free_profile(g, d, "g")
    if not math.isfinite(burn_in) or burn_in < 0:
        raise InvalidArgumentError(f"burn_in must be >= 0, got {burn_in}", argument="burn_in")
    if n_paths < 1:
        raise InvalidArgumentError(f"n_paths must be >= 1, got {n_paths}", argument="n_paths")
    tag = tag or _default_tag(A, f, g)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    layout = StepLayout.for_grid(t_grid, dt, lead_in=burn_in)
    check_fast_step(tag, layout.h)

    fine = layout.t_start + layout.h * np.arange(layout.n_steps + 1)
    if layout.n_steps > 0:
        phis = step_propagators(A, fine, layout.h)
    else:
        phis = np.empty((0, d, d))
    f_values = f(fine[:-1]).reshape(-1, d)
    g_values = g(fine[:-1]).reshape(-1, d)

    source = BrownianSource(seed, stream)

    def run(block: int) -> np.ndarray:
        return _convolve_block(layout, phis, f_values, g_values, source.block(block))

    blocks = ordered_map(run, range(block_count(n_paths)), threads)
    logger.debug(f"stochastic convolution: {layout.n_steps} steps, {n_paths} paths")
    return PathEnsemble(
        time_grid=t_grid,
        paths=np.concatenate(blocks, axis=0)[:n_paths],
        seed=seed,
        tag=tag,
        brownian=brownian or BrownianTag.fresh(stream),
        metadata={"dt": layout.h, "burn_in": layout.n_pre * layout.h},
    )


@dataclass(frozen=True)
class ConvolutionSup:
    """sup_t |int_{-inf}^t exp(-nu (t - s)) f(s) ds| over a window.

    Attributes:
        value: The supremum
        argmax: Time at which it is attained
        tail_bound: Bound on the neglected integral beyond the burn-in
        window: (t_lo, t_hi) searched
    """

    value: float
    argmax: float
    tail_bound: float
    window: tuple[float, float]


def _scalar_profile(f: Union[TrigSeries, Callable]) -> Callable[[np.ndarray], np.ndarray]:
    def evaluate(t: np.ndarray) -> np.ndarray:
        return np.asarray(f(t), dtype=np.float64).reshape(t.shape[0], -1)[:, 0]

    return evaluate


def exponential_convolution_sup(
    f: Union[TrigSeries, Callable[[np.ndarray], np.ndarray]],
    nu: float,
    window: Optional[tuple[float, float]] = None,
    sup_f: Optional[float] = None,
    panel: Optional[float] = None,
) -> ConvolutionSup:
    """Supremum over a window of the exponentially weighted past integral of f.

    Panel integrals use 8-point Gauss-Legendre; the panel values are chained
    with the exact decay factor exp(-nu H) by a first-order recursive filter.
    The integral is truncated where the tail sup|f| exp(-nu T) / nu falls
    below 1e-12, and the best panel edge is refined by bounded scalar
    minimization.

    Args:
        f: Scalar profile; a TrigSeries or a vectorized callable
        nu: Decay rate, positive
        window: (t_lo, t_hi); one slowest period of f by default
        sup_f: Bound on |f|; taken from the series when omitted
        panel: Panel length; 0.25 over the fastest angular frequency by default

    Raises:
        InvalidArgumentError: If nu <= 0 or no bound on |f| is available.
    """
    if not math.isfinite(nu) or nu <= 0:
        raise InvalidArgumentError(f"nu must be positive, got {nu}", argument="nu")
    is_series = isinstance(f, TrigSeries)
    if sup_f is None:
        if not is_series:
            raise InvalidArgumentError("sup_f is required for callable profiles", argument="sup_f")
        sup_f = f.sup_bound()
    if window is None:
        window = (0.0, recurrence_window(f) if is_series else 1.0)
    t_lo, t_hi = float(window[0]), float(window[1])
    if not t_hi >= t_lo:
        raise InvalidArgumentError(f"window {window} is empty", argument="window")
    if panel is None:
        fastest = max(f.frequencies) if is_series and f.frequencies else 1.0
        panel = min(0.5, 0.25 / fastest)

    evaluate = _scalar_profile(f)
    if sup_f > 0:
        burn_in = max(0.0, math.log(sup_f / (nu * TAIL_TOL)) / nu)
    else:
        burn_in = 0.0
    tail_bound = sup_f * math.exp(-nu * burn_in) / nu

    n_panels = int(math.ceil((t_hi - t_lo + burn_in) / panel)) + 1
    edges = (t_lo - burn_in) + panel * np.arange(n_panels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(_GAUSS_NODES)

    def panel_integral(starts: np.ndarray, length: np.ndarray) -> np.ndarray:
        # int_{a}^{a+len} exp(-nu (a + len - s)) f(s) ds for each panel
        mid = starts + 0.5 * length
        pts = mid[:, None] + (0.5 * length)[:, None] * nodes[None, :]
        vals = evaluate(pts.ravel()).reshape(pts.shape)
        kernel = np.exp(-nu * ((starts + length)[:, None] - pts))
        return (0.5 * length) * np.sum(weights[None, :] * kernel * vals, axis=1)

    contributions = panel_integral(edges[:-1], np.full(n_panels, panel))
    decay = math.exp(-nu * panel)
    values = np.concatenate([[0.0], signal.lfilter([1.0], [1.0, -decay], contributions)])

    inside = np.nonzero((edges >= t_lo - 1e-12) & (edges <= t_hi + 1e-12))[0]
    best = int(inside[np.argmax(np.abs(values[inside]))])

    def magnitude(t: float) -> float:
        j = min(max(best - 1, 0), n_panels - 1)
        length = t - edges[j]
        if length <= 0:
            return abs(values[j])
        piece = panel_integral(np.array([edges[j]]), np.array([length]))[0]
        return abs(math.exp(-nu * length) * values[j] + piece)

    lo = max(t_lo, edges[max(best - 1, 0)])
    hi = min(t_hi, edges[min(best + 1, n_panels)])
    value, argmax = float(abs(values[best])), float(edges[best])
    if hi > lo:
        result = optimize.minimize_scalar(
            lambda t: -magnitude(t),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": _REFINE_XATOL},
        )
        if -result.fun > value:
            value, argmax = float(-result.fun), float(result.x)
    logger.debug(f"exponential convolution sup {value:.10g} at t={argmax:.6g} (nu={nu})")
    return ConvolutionSup(value=value, argmax=argmax, tail_bound=tail_bound, window=(t_lo, t_hi))


def exponential_convolution_bound(A: float, nu: float, l: float, window_sup: float) -> float:
    """Majorant A exp(-nu l)(l + 1/nu) + (1 - exp(-nu l)) window_sup.

    ``A`` bounds |f|, ``window_sup`` bounds the windowed integrals of f over
    lengths up to ``l``.
    """
    if not math.isfinite(nu) or nu <= 0:
        raise InvalidArgumentError(f"nu must be positive, got {nu}", argument="nu")
    if l < 0:
        raise InvalidArgumentError(f"l must be >= 0, got {l}", argument="l")
    decay = math.exp(-nu * l)
    return A * decay * (l + 1.0 / nu) + (1.0 - decay) * window_sup
