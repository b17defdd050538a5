"""Semilinear state fields F(t, x) and G(t, x).

A field is an affine part plus saturating nonlinear terms::

    field(t, x) = c0(t) + C1(t) x + sum_j a_j(t) * n_j(x)

with every time factor a :class:`TrigSeries` and ``n_j`` one of the catalog
nonlinearities applied componentwise. The time dependence separates from the
state dependence, so time averages act on the profiles alone.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np
import numpy.typing as npt

from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.exceptions import InvalidArgumentError


class Nonlinearity(str, Enum):
    """Catalog of componentwise saturating state factors, all 1-Lipschitz and zero at 0."""

    TANH = "tanh"
    SIN = "sin"
    BOUNDED_QUADRATIC = "bounded_quadratic"  # x / (1 + x^2)

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self is Nonlinearity.TANH:
            return np.tanh(x)
        if self is Nonlinearity.SIN:
            return np.sin(x)
        return x / (1.0 + x * x)

    @property
    def lipschitz(self) -> float:
        return 1.0


@dataclass(frozen=True)
class Certificate:
    """Certified bound M on |field(t, 0)| and Lipschitz constant L in x."""

    M: float
    L: float

    def __post_init__(self):
        if not (np.isfinite(self.M) and np.isfinite(self.L)) or self.M < 0 or self.L < 0:
            raise InvalidArgumentError(
                f"certificate constants must be finite and non-negative, got M={self.M}, L={self.L}"
            )


@dataclass(frozen=True, eq=False)
class NonlinearTerm:
    """Term ``profile(t) * kind(x)``; ``profile`` is a vector-valued series."""

    kind: Nonlinearity
    profile: TrigSeries

    def shift(self, tau: float) -> "NonlinearTerm":
        return replace(self, profile=self.profile.shift(tau))

    def rescale(self, eps: float) -> "NonlinearTerm":
        return replace(self, profile=self.profile.rescale(eps))


@dataclass(frozen=True, eq=False)
class StateField:
    """Drift or diffusion field with its (M, L) certificate.

    Attributes:
        offset: State-independent part c0(t), shape (d,)
        certificate: Certified (M, L)
        linear: Optional linear part C1(t), shape (d, d)
        terms: Nonlinear terms
    """

    offset: TrigSeries
    certificate: Certificate
    linear: Optional[TrigSeries] = None
    terms: tuple[NonlinearTerm, ...] = ()

    def __post_init__(self):
        if len(self.offset.shape) != 1:
            raise InvalidArgumentError(f"field offset must be a vector, got shape {self.offset.shape}")
        d = self.offset.shape[0]
        if self.linear is not None and self.linear.shape != (d, d):
            raise InvalidArgumentError(f"linear part must be {d}x{d}, got {self.linear.shape}")
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if term.profile.shape != (d,):
                raise InvalidArgumentError(
                    f"{term.kind.value} profile must have shape ({d},), got {term.profile.shape}"
                )

    @classmethod
    def constant(cls, value: npt.ArrayLike, M: Optional[float] = None, L: float = 0.0) -> "StateField":
        """Time- and state-independent field; M defaults to |value|."""
        offset = TrigSeries.constant(np.atleast_1d(np.asarray(value, dtype=np.float64)))
        bound = float(np.linalg.norm(offset.base)) if M is None else M
        return cls(offset=offset, certificate=Certificate(M=bound, L=L))

    @property
    def dimension(self) -> int:
        return self.offset.shape[0]

    @property
    def M(self) -> float:
        return self.certificate.M

    @property
    def L(self) -> float:
        return self.certificate.L

    @property
    def is_state_independent(self) -> bool:
        return self.linear is None and not self.terms

    @property
    def series(self) -> tuple[TrigSeries, ...]:
        """Every time profile in the field."""
        out = [self.offset]
        if self.linear is not None:
            out.append(self.linear)
        out.extend(term.profile for term in self.terms)
        return tuple(out)

    def __call__(self, t: npt.ArrayLike, x: npt.ArrayLike) -> np.ndarray:
        """Evaluate at (t, x).

        ``t`` is a scalar or shape (n,); ``x`` is shape (d,) or (n, d). With an
        array ``t`` the i-th time pairs with the i-th state.
        """
        x = np.asarray(x, dtype=np.float64)
        out = self.offset(t) + np.zeros_like(x)
        if self.linear is not None:
            c1 = self.linear(t)
            if c1.ndim == 2:
                out = out + x @ c1.T
            elif x.ndim == 1:
                out = out + np.einsum("nij,j->ni", c1, x)
            else:
                out = out + np.einsum("nij,nj->ni", c1, x)
        for term in self.terms:
            out = out + term.profile(t) * term.kind.apply(x)
        return out

    def shift(self, tau: float) -> "StateField":
        return replace(
            self,
            offset=self.offset.shift(tau),
            linear=None if self.linear is None else self.linear.shift(tau),
            terms=tuple(term.shift(tau) for term in self.terms),
        )

    def rescale(self, eps: float) -> "StateField":
        return replace(
            self,
            offset=self.offset.rescale(eps),
            linear=None if self.linear is None else self.linear.rescale(eps),
            terms=tuple(term.rescale(eps) for term in self.terms),
        )

    def averaged(self) -> "StateField":
        """Time-averaged field: every profile replaced by its mean, same certificate."""
        return replace(
            self,
            offset=self.offset.as_constant(),
            linear=None if self.linear is None else self.linear.as_constant(),
            terms=tuple(replace(term, profile=term.profile.as_constant()) for term in self.terms),
        )

    def window_average(self, x: npt.ArrayLike, T: float, t: npt.ArrayLike) -> np.ndarray:
        """(1/T) times the integral of field(s, x) over s in [t, t + T], exact per profile."""
        x = np.asarray(x, dtype=np.float64)
        out = self.offset.window_average(t, T)
        if self.linear is not None:
            c1 = self.linear.window_average(t, T)
            out = out + (c1 @ x if c1.ndim == 2 else np.einsum("nij,j->ni", c1, x))
        for term in self.terms:
            out = out + term.profile.window_average(t, T) * term.kind.apply(x)
        return out

    def analytic_bounds(self) -> Certificate:
        """(M, L) majorants implied by the closed-form coefficients."""
        lipschitz = 0.0 if self.linear is None else self.linear.sup_bound()
        for term in self.terms:
            lipschitz += term.profile.sup_bound() * term.kind.lipschitz
        return Certificate(M=self.offset.sup_bound(), L=lipschitz)
