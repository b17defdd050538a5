"""Closed-form recurrent time profiles.

A :class:`TrigSeries` is an array-valued function of time

    h(t) = B + sum_k [C_k cos(w_k u) + S_k sin(w_k u)] + D exp(-r |u|) + V sin(lev(u)),
    u = speed * t + phase,

where ``lev`` is the Levitan example. Shifts and rescalings only touch
``phase`` and ``speed``, so they compose exactly, and window averages of the
trigonometric and decaying parts have closed forms.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional

import numpy as np
import numpy.typing as npt
from scipy import integrate

from bogolyubov.coefficients.levitan import levitan_sine, levitan_sine_mean
from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Adaptive quadrature tolerance for the Levitan part of window integrals.
QUAD_TOL = 1e-9


def _frozen_array(values: Any, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} has non-finite entries", argument=name)
    arr.setflags(write=False)
    return arr


def coefficient_norm(values: np.ndarray) -> float:
    """Operator 2-norm for matrices, Euclidean norm otherwise."""
    if values.ndim == 2:
        return float(np.linalg.norm(values, 2))
    return float(np.linalg.norm(values))


@dataclass(frozen=True, eq=False)
class Harmonic:
    """One harmonic C cos(w u) + S sin(w u).

    Attributes:
        frequency: Angular frequency w > 0 (rad per unit of u)
        cos_coef: Coefficient of the cosine
        sin_coef: Coefficient of the sine
    """

    frequency: float
    cos_coef: np.ndarray
    sin_coef: np.ndarray

    def __post_init__(self):
        if not math.isfinite(self.frequency) or self.frequency <= 0:
            raise InvalidArgumentError(
                f"harmonic frequency must be positive, got {self.frequency}", argument="frequency"
            )
        object.__setattr__(self, "cos_coef", _frozen_array(self.cos_coef, "cos_coef"))
        object.__setattr__(self, "sin_coef", _frozen_array(self.sin_coef, "sin_coef"))
        if self.cos_coef.shape != self.sin_coef.shape:
            raise InvalidArgumentError("cos and sin coefficients differ in shape")


@dataclass(frozen=True, eq=False)
class DecayTerm:
    """Transient term D exp(-rate |u|); bounded by |D| and not recurrent."""

    coef: np.ndarray
    rate: float

    def __post_init__(self):
        if not math.isfinite(self.rate) or self.rate <= 0:
            raise InvalidArgumentError(f"decay rate must be positive, got {self.rate}")
        object.__setattr__(self, "coef", _frozen_array(self.coef, "decay"))


def _expand(factor: np.ndarray, ndim: int) -> np.ndarray:
    return factor.reshape(factor.shape + (1,) * ndim)


@dataclass(frozen=True, eq=False)
class TrigSeries:
    """Array-valued closed-form time profile (see module docstring).

    ``TrigSeries`` with matrix coefficients is the time-varying operator
    A(t); with vector coefficients it is a drift offset or a modulation
    profile.
    """

    base: np.ndarray
    harmonics: tuple[Harmonic, ...] = ()
    decay: Optional[DecayTerm] = None
    levitan: Optional[np.ndarray] = None
    speed: float = 1.0
    phase: float = 0.0
    _mean: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        base = _frozen_array(self.base, "base")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "harmonics", tuple(self.harmonics))
        for harmonic in self.harmonics:
            if harmonic.cos_coef.shape != base.shape:
                raise InvalidArgumentError(
                    f"harmonic at frequency {harmonic.frequency} has shape "
                    f"{harmonic.cos_coef.shape}, expected {base.shape}"
                )
        if self.decay is not None and self.decay.coef.shape != base.shape:
            raise InvalidArgumentError("decay coefficient shape differs from base")
        if self.levitan is not None:
            lev = _frozen_array(self.levitan, "levitan")
            if lev.shape != base.shape:
                raise InvalidArgumentError("levitan coefficient shape differs from base")
            object.__setattr__(self, "levitan", lev)
        if not math.isfinite(self.speed) or self.speed <= 0:
            raise InvalidArgumentError(f"speed must be positive, got {self.speed}")
        if not math.isfinite(self.phase):
            raise InvalidArgumentError("phase must be finite")

        mean = base.copy()
        if self.levitan is not None:
            mean = mean + self.levitan * levitan_sine_mean()
        mean.setflags(write=False)
        object.__setattr__(self, "_mean", mean)

    @classmethod
    def constant(cls, value: Any) -> "TrigSeries":
        return cls(base=np.asarray(value, dtype=np.float64))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.base.shape

    @property
    def is_constant(self) -> bool:
        return not self.harmonics and self.decay is None and self.levitan is None

    @property
    def frequencies(self) -> tuple[float, ...]:
        """Angular frequencies in units of t (speed included)."""
        return tuple(h.frequency * self.speed for h in self.harmonics)

    def phase_of(self, t: npt.ArrayLike) -> np.ndarray:
        return self.speed * np.asarray(t, dtype=np.float64) + self.phase

    def __call__(self, t: npt.ArrayLike) -> np.ndarray:
        """Evaluate at scalar t (shape ``self.shape``) or at a 1-D array of times."""
        t_arr = np.asarray(t, dtype=np.float64)
        scalar = t_arr.ndim == 0
        u = self.phase_of(np.atleast_1d(t_arr))
        ndim = self.base.ndim
        out = np.broadcast_to(self.base, u.shape + self.base.shape).copy()
        for harmonic in self.harmonics:
            wu = harmonic.frequency * u
            out += _expand(np.cos(wu), ndim) * harmonic.cos_coef
            out += _expand(np.sin(wu), ndim) * harmonic.sin_coef
        if self.decay is not None:
            out += _expand(np.exp(-self.decay.rate * np.abs(u)), ndim) * self.decay.coef
        if self.levitan is not None:
            out += _expand(np.asarray(levitan_sine(u)), ndim) * self.levitan
        return out[0] if scalar else out

    def mean(self) -> np.ndarray:
        """Uniform time mean: the harmonic-free base plus the Levitan mean."""
        return self._mean.copy()

    def sup_bound(self) -> float:
        """Certified bound on sup_t |h(t)|."""
        bound = coefficient_norm(self.base)
        for harmonic in self.harmonics:
            bound += coefficient_norm(harmonic.cos_coef) + coefficient_norm(harmonic.sin_coef)
        if self.decay is not None:
            bound += coefficient_norm(self.decay.coef)
        if self.levitan is not None:
            bound += coefficient_norm(self.levitan)
        return bound

    def oscillation_bound(self) -> float:
        """Certified bound on sup_t |h(t) - mean|."""
        bound = 0.0
        for harmonic in self.harmonics:
            bound += coefficient_norm(harmonic.cos_coef) + coefficient_norm(harmonic.sin_coef)
        if self.decay is not None:
            bound += coefficient_norm(self.decay.coef)
        if self.levitan is not None:
            bound += coefficient_norm(self.levitan) * (1.0 + abs(levitan_sine_mean()))
        return bound

    def shift(self, tau: float) -> "TrigSeries":
        """The translate t -> h(t + tau)."""
        return replace(self, phase=self.phase + self.speed * float(tau))

    def rescale(self, eps: float) -> "TrigSeries":
        """The fast profile t -> h(t / eps)."""
        if not math.isfinite(eps) or eps <= 0:
            raise InvalidArgumentError(f"eps must be positive, got {eps}", argument="eps")
        return replace(self, speed=self.speed / float(eps))

    def as_constant(self) -> "TrigSeries":
        """Constant profile equal to the time mean."""
        return TrigSeries(base=self._mean)

    def integral(self, t: npt.ArrayLike, s: npt.ArrayLike) -> np.ndarray:
        """Return the integral of h over [t, t + s]; ``s`` may be negative.

        Trigonometric and decaying parts are integrated with exact
        antiderivatives; the Levitan part by adaptive quadrature.
        """
        t_arr = np.asarray(t, dtype=np.float64)
        s_arr = np.asarray(s, dtype=np.float64)
        t_b, s_b = np.broadcast_arrays(t_arr, s_arr)
        scalar = t_b.ndim == 0
        t_b = np.atleast_1d(t_b)
        s_b = np.atleast_1d(s_b)
        u0 = self.phase_of(t_b)
        u1 = u0 + self.speed * s_b
        ndim = self.base.ndim

        out = _expand(s_b, ndim) * self.base
        for harmonic in self.harmonics:
            w = harmonic.frequency
            cos_part = (np.sin(w * u1) - np.sin(w * u0)) / (w * self.speed)
            sin_part = (np.cos(w * u0) - np.cos(w * u1)) / (w * self.speed)
            out = out + _expand(cos_part, ndim) * harmonic.cos_coef
            out = out + _expand(sin_part, ndim) * harmonic.sin_coef
        if self.decay is not None:
            rate = self.decay.rate
            decay_part = (_decay_antiderivative(u1, rate) - _decay_antiderivative(u0, rate)) / self.speed
            out = out + _expand(decay_part, ndim) * self.decay.coef
        if self.levitan is not None:
            lev_part = _levitan_integrals(u0, u1) / self.speed
            out = out + _expand(lev_part, ndim) * self.levitan
        return out[0] if scalar else out

    def window_average(self, t: npt.ArrayLike, T: float) -> np.ndarray:
        """Return (1/T) * integral of h over [t, t + T].

        Raises:
            InvalidArgumentError: If T is not positive.
        """
        if not math.isfinite(T) or T <= 0:
            raise InvalidArgumentError(f"averaging window must be positive, got {T}", argument="T")
        return self.integral(t, T) / T


def _decay_antiderivative(u: np.ndarray, rate: float) -> np.ndarray:
    # d/du of sign(u)(1 - exp(-rate|u|))/rate is exp(-rate|u|)
    return np.sign(u) * (-np.expm1(-rate * np.abs(u))) / rate


def _levitan_integrals(u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    """Integrals of the Levitan factor over [u0_i, u1_i], one adaptive vector quadrature.

    Every window is mapped onto [0, 1]; breakpoints split the longest window
    into panels of at most 2*pi so each panel holds a bounded number of
    near-resonances.
    """
    length = u1 - u0
    longest = float(np.max(np.abs(length))) if length.size else 0.0
    if longest == 0.0:
        return np.zeros_like(u0)
    n_panels = max(1, int(math.ceil(longest / (2.0 * np.pi))))
    points = np.arange(1, n_panels) / n_panels if n_panels > 1 else None

    def integrand(x: float) -> np.ndarray:
        return np.asarray(levitan_sine(u0 + x * length)) * length

    value, _ = integrate.quad_vec(
        integrand, 0.0, 1.0, epsabs=QUAD_TOL * n_panels, epsrel=QUAD_TOL, norm="max", points=points
    )
    return np.asarray(value, dtype=np.float64)
