"""Window averages of coefficients and averaging-speed probes."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np
import numpy.typing as npt

from bogolyubov.coefficients.fields import StateField
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.types import as_finite_scalar, as_state_vector
from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

_GAUSS_NODES = 8
_MAX_PANELS = 400_000


def _require_window(T: float) -> float:
    T = float(T)
    if not math.isfinite(T) or T <= 0:
        raise InvalidArgumentError(f"averaging window T must be positive, got {T}", argument="T")
    return T


def average_operator(A: TrigSeries, T: float, t: npt.ArrayLike) -> np.ndarray:
    """(1/T) times the integral of A(s) over [t, t + T], in closed form.

    Raises:
        InvalidArgumentError: If T <= 0.
    """
    return A.window_average(t, _require_window(T))


def average_drift(F: StateField, x: npt.ArrayLike, T: float, t: npt.ArrayLike) -> np.ndarray:
    """(1/T) times the integral of F(s, x) over [t, t + T].

    Raises:
        InvalidArgumentError: If T <= 0.
    """
    x = as_state_vector(x, F.dimension)
    return F.window_average(x, _require_window(T), t)


def series_time_scale(series: Sequence[TrigSeries]) -> float:
    """Shortest time scale present in the profiles (inf for constants)."""
    scale = math.inf
    for s in series:
        for f in s.frequencies:
            scale = min(scale, 1.0 / f)
        if s.decay is not None:
            scale = min(scale, 1.0 / (s.decay.rate * s.speed))
        if s.levitan is not None:
            scale = min(scale, 0.05 / s.speed)
    return scale


def gauss_legendre_panels(a: float, b: float, panel: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre quadrature on [a, b]."""
    n_panels = max(1, int(math.ceil((b - a) / panel)))
    if n_panels > _MAX_PANELS:
        logger.warning(f"quadrature on [{a}, {b}] capped at {_MAX_PANELS} panels")
        n_panels = _MAX_PANELS
    nodes, weights = np.polynomial.legendre.leggauss(_GAUSS_NODES)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    points = (centers[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return points, w


def average_diffusion_gap(
    G: StateField,
    G_bar: Union[StateField, Callable[[np.ndarray], Any]],
    x: npt.ArrayLike,
    T: float,
    t: float,
) -> float:
    """(1/T) times the integral of |G(s, x) - G_bar(x)|^2 over [t, t + T].

    Composite Gauss-Legendre with panels resolving the fastest time scale of
    G. Persistent oscillation in G gives a positive limit (inadmissible);
    admissible diffusions give a gap that decays in T.
    """
    T = _require_window(T)
    t = as_finite_scalar(t, "t")
    x = as_state_vector(x, G.dimension)
    if isinstance(G_bar, StateField):
        target = G_bar(0.0, x)
    else:
        target = np.asarray(G_bar(x), dtype=np.float64)

    scale = series_time_scale(G.series)
    if math.isinf(scale):
        diff = G(t, x) - target
        return float(diff @ diff)
    points, weights = gauss_legendre_panels(t, t + T, min(T, 0.5 * scale))
    diff = G(points, x) - target
    return float(weights @ np.sum(diff * diff, axis=1)) / T


@dataclass(frozen=True)
class IntegralConvergenceRow:
    """sup over |s| <= l and sampled t of |integral of f(s/eps) - mean over [t, t + s]|."""

    eps: float
    sup_integral: float
    uniform_bound: float


def integral_convergence(
    series: TrigSeries,
    eps_list: Sequence[float],
    l: float,
    n_phases: int = 64,
    n_lengths: int = 201,
    seed: int = 0,
) -> list[IntegralConvergenceRow]:
    """Tabulate how fast f(t/eps) integrally converges to its mean.

    The uniform bound column is the certified sup |f - mean|; together with
    a vanishing sup_integral column it witnesses the stronger, bounded form
    of convergence. No particular bound is assumed.
    """
    if l <= 0:
        raise InvalidArgumentError(f"l must be positive, got {l}", argument="l")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 1e3, size=n_phases)
    lengths = np.linspace(-l, l, n_lengths)
    mean = series.mean()
    rows = []
    for eps in eps_list:
        fast = series.rescale(eps)
        worst = 0.0
        for s in lengths:
            integral = fast.integral(phases, np.full_like(phases, s)) - s * mean
            norms = np.sqrt(np.sum(integral.reshape(n_phases, -1) ** 2, axis=1))
            worst = max(worst, float(norms.max()))
        rows.append(
            IntegralConvergenceRow(
                eps=float(eps), sup_integral=worst, uniform_bound=series.oscillation_bound()
            )
        )
        logger.debug(f"integral convergence eps={eps}: sup {worst:.3e}")
    return rows


def operator_average_deviation(
    A: TrigSeries, T: float, phases: np.ndarray, A_bar: Optional[np.ndarray] = None
) -> float:
    """max over phases of ||average_operator(A, T, t) - A_bar|| (2-norm)."""
    A_bar = A.mean() if A_bar is None else A_bar
    averages = average_operator(A, T, phases)
    return float(np.max(np.linalg.norm(averages - A_bar, ord=2, axis=(1, 2))))
