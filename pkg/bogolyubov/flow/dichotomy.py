"""Exponential dichotomy constants (N, nu) fitted to sampled propagator norms.

For a fixed rate nu the smallest admissible constant is

    log N(nu) = max(0, max_k (log|G_k| + nu s_k))

over samples (s_k, G_k). The achievable rates are capped by the decay seen
at the longest sampled separation, nu_cap = min_tau -log|G(tau + T, tau)| / T,
so the fit never claims a rate the samples cannot confirm. Within (0, nu_cap]
the largest rate whose constant stays within ten times the best constant is
chosen.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt

from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.parallel import ordered_map
from bogolyubov.exceptions import InvalidArgumentError, NotUniformlyStableError
from bogolyubov.flow.propagator import as_operator_series, propagate_from, propagator_norms

logger = logging.getLogger(__name__)

MIN_RATE = 1e-8
N_RATES = 200
CONSTANT_SLACK = 10.0
DOMINATION_RTOL = 1e-9
# Between-sample slack allowed when a certificate is moved to a shifted operator.
TRANSPORT_RTOL = 0.05


def fast_step(eps: float) -> float:
    """Default integration step min(1e-2, 0.1 eps) for operators oscillating at rate 1/eps."""
    return min(1e-2, 0.1 * float(eps))


def recurrence_window(A: TrigSeries) -> float:
    """Length of one slowest oscillation of A (1 when A has no harmonics)."""
    if not A.frequencies:
        return 1.0
    return 2.0 * math.pi / min(A.frequencies)


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """Base points tau and separations s at which G(tau + s, tau) is sampled.

    Attributes:
        base_points: Base points, shape (m,)
        separations: Strictly increasing positive separations, shape (k,)
        step: Integration step of the propagator
    """

    base_points: np.ndarray
    separations: np.ndarray
    step: float = 1e-2

    def __post_init__(self):
        base = np.atleast_1d(np.asarray(self.base_points, dtype=np.float64))
        seps = np.atleast_1d(np.asarray(self.separations, dtype=np.float64))
        if base.size == 0 or not np.all(np.isfinite(base)):
            raise InvalidArgumentError(
                "sampling plan needs finite base points", argument="base_points"
            )
        if seps.size == 0 or np.any(seps <= 0) or np.any(np.diff(seps) <= 0):
            raise InvalidArgumentError(
                "separations must be positive and strictly increasing", argument="separations"
            )
        if not math.isfinite(self.step) or self.step <= 0:
            raise InvalidArgumentError(f"step must be positive, got {self.step}", argument="step")
        object.__setattr__(self, "base_points", base)
        object.__setattr__(self, "separations", seps)

    @classmethod
    def covering(
        cls,
        window: float,
        T_max: float = 20.0,
        n_base: int = 16,
        n_separations: int = 200,
        step: float = 1e-2,
        start: float = 0.0,
    ) -> "SamplingPlan":
        """Base points evenly over [start, start + window), separations evenly over (0, T_max]."""
        base = start + window * np.arange(n_base) / n_base
        seps = np.linspace(0.0, T_max, n_separations + 1)[1:]
        return cls(base_points=base, separations=seps, step=step)

    @classmethod
    def for_series(
        cls,
        A: TrigSeries,
        T_max: float = 20.0,
        n_base: int = 16,
        n_separations: int = 200,
        step: Optional[float] = None,
    ) -> "SamplingPlan":
        """Plan whose base points cover one recurrence window of A."""
        if step is None:
            step = fast_step(1.0 / A.speed) if A.frequencies else 1e-2
        return cls.covering(recurrence_window(A), T_max, n_base, n_separations, step)

    @property
    def T_max(self) -> float:
        return float(self.separations[-1])

    def shifted(self, tau: float) -> "SamplingPlan":
        return SamplingPlan(self.base_points + tau, self.separations, self.step)


@dataclass(frozen=True)
class DichotomyCertificate:
    """Fitted constants with |G(t, tau)| <= N exp(-nu (t - tau)) on every sample.

    Attributes:
        N: Constant, at least 1
        nu: Decay rate, positive
        residual: max over samples of log|G| - (log N - nu s); non-positive
        separation_range: (0, T_max) sampled
        base_range: (min tau, max tau) sampled
        rate_cap: Largest rate the longest separation supports
    """

    N: float
    nu: float
    residual: float
    separation_range: tuple[float, float]
    base_range: tuple[float, float]
    rate_cap: float

    def bound(self, separations: npt.ArrayLike) -> np.ndarray:
        return self.N * np.exp(-self.nu * np.asarray(separations, dtype=np.float64))

    def worst_ratio(self, norms: np.ndarray, separations: npt.ArrayLike) -> float:
        """max |G| / (N exp(-nu s)) over samples shaped (m, k) against separations (k,)."""
        return float(np.max(norms / self.bound(separations)[None, :]))

    def dominates(self, norms: np.ndarray, separations: npt.ArrayLike) -> bool:
        return self.worst_ratio(norms, separations) <= 1.0 + DOMINATION_RTOL

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "nu": self.nu,
            "residual": self.residual,
            "separation_range": list(self.separation_range),
            "base_range": list(self.base_range),
            "rate_cap": self.rate_cap,
        }


def sample_norms(A: TrigSeries, plan: SamplingPlan) -> np.ndarray:
    """|G_A(tau + s, tau)| for the plan, shape (m, k)."""
    return propagator_norms(propagate_from(A, plan.base_points, plan.separations, plan.step))


def fit_from_norms(norms: np.ndarray, plan: SamplingPlan) -> DichotomyCertificate:
    """Fit (N, nu) to precomputed propagator norms of shape (m, k)."""
    seps = plan.separations
    with np.errstate(divide="ignore"):
        log_norms = np.log(norms)
    rate_cap = float(np.min(-log_norms[:, -1]) / seps[-1])
    if not rate_cap > MIN_RATE:
        raise NotUniformlyStableError(
            f"propagator does not decay over separation {seps[-1]:.4g}: "
            f"largest supported rate {rate_cap:.3e}",
            rate_cap=rate_cap,
        )

    envelope = np.max(log_norms, axis=0)
    rates = np.linspace(0.0, rate_cap, N_RATES + 1)[1:]
    log_N = np.maximum(0.0, np.max(envelope[None, :] + rates[:, None] * seps[None, :], axis=1))
    admissible = np.nonzero(log_N <= np.min(log_N) + math.log(CONSTANT_SLACK))[0]
    best = int(admissible[-1])
    nu, log_n = float(rates[best]), float(log_N[best])
    residual = float(np.max(log_norms - (log_n - nu * seps[None, :])))
    return DichotomyCertificate(
        N=math.exp(log_n),
        nu=nu,
        residual=min(residual, 0.0),
        separation_range=(0.0, float(seps[-1])),
        base_range=(float(plan.base_points.min()), float(plan.base_points.max())),
        rate_cap=rate_cap,
    )


def fit_dichotomy(A: Any, plan: Optional[SamplingPlan] = None) -> DichotomyCertificate:
    """Fit the dichotomy constants (N, nu) of x' = A(t) x on a sampling plan.

    Raises:
        NotUniformlyStableError: If the sampled propagator does not decay.
    """
    A = as_operator_series(A)
    plan = plan or SamplingPlan.for_series(A)
    norms = sample_norms(A, plan)
    cert = fit_from_norms(norms, plan)
    logger.debug(f"dichotomy fit: N={cert.N:.6g}, nu={cert.nu:.6g} (cap {cert.rate_cap:.6g})")
    return cert


@dataclass
class DichotomySweepRow:
    eps: float
    certificate: Optional[DichotomyCertificate]
    error: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.certificate is not None


@dataclass
class DichotomySweep:
    """Dichotomy fits of A(t / eps) along an eps sweep.

    ``alpha_observed`` is the largest swept eps whose fit succeeded; it is an
    observation, not the existence constant of the averaging theorem.
    """

    rows: list[DichotomySweepRow] = field(default_factory=list)

    @property
    def successes(self) -> list[DichotomySweepRow]:
        return [row for row in self.rows if row.succeeded]

    @property
    def alpha_observed(self) -> Optional[float]:
        eps = [row.eps for row in self.successes]
        return max(eps) if eps else None

    @property
    def uniform_N(self) -> Optional[float]:
        values = [row.certificate.N for row in self.successes]
        return max(values) if values else None

    @property
    def uniform_nu(self) -> Optional[float]:
        values = [row.certificate.nu for row in self.successes]
        return min(values) if values else None

    @property
    def nu_spread(self) -> float:
        """(max nu - min nu) / max nu over successful fits."""
        values = [row.certificate.nu for row in self.successes]
        if not values:
            return math.inf
        return (max(values) - min(values)) / max(values)


def sweep_dichotomy(
    A: TrigSeries,
    eps_list: Sequence[float],
    T_max: float = 20.0,
    n_base: int = 16,
    n_separations: int = 200,
    threads: int = 1,
) -> DichotomySweep:
    """Fit the dichotomy of A_eps(t) = A(t / eps) for every eps; failures are recorded."""

    def fit_one(eps: float) -> DichotomySweepRow:
        fast = A.rescale(eps)
        plan = SamplingPlan.for_series(fast, T_max, n_base, n_separations, step=fast_step(eps))
        try:
            return DichotomySweepRow(eps=float(eps), certificate=fit_dichotomy(fast, plan))
        except NotUniformlyStableError as exc:
            logger.warning(f"dichotomy fit failed at eps={eps}: {exc}")
            return DichotomySweepRow(eps=float(eps), certificate=None, error=str(exc))

    return DichotomySweep(rows=ordered_map(fit_one, eps_list, threads))


@dataclass(frozen=True)
class TransportRow:
    tau: float
    worst_ratio: float
    rtol: float

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0 + self.rtol


def check_transport(
    cert: DichotomyCertificate,
    A: TrigSeries,
    shifts: Sequence[float],
    plan: SamplingPlan,
    rtol: float = TRANSPORT_RTOL,
) -> list[TransportRow]:
    """Check that a fitted certificate still dominates the propagators of shifted operators.

    Shifted base points fall between the sampled ones, so domination is
    checked up to ``rtol`` of the certified bound.
    """
    rows = []
    for tau in shifts:
        norms = sample_norms(A.shift(tau), plan)
        ratio = cert.worst_ratio(norms, plan.separations)
        rows.append(TransportRow(tau=float(tau), worst_ratio=ratio, rtol=rtol))
    return rows
