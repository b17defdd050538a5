"""Coefficient systems (A(t), F(t, x), G(t, x)) and time shifts."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Callable

import numpy as np
import numpy.typing as npt

from bogolyubov.coefficients.fields import StateField
from bogolyubov.coefficients.recurrence import RecurrenceClass
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.types import as_finite_scalar, as_state_vector
from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoefficientSystem:
    """The triple (A, F, G) driving dX = (A(t)X + F(t, X))dt + G(t, X)dW.

    Attributes:
        A: Time-varying operator (matrix-valued series)
        F: Drift field
        G: Diffusion field (one Brownian channel, so G(t, x) is a vector)
        recurrence: Declared recurrence class shared by all three parts
        eps0: Largest admissible time scale
        name: Scenario name used in logs and artifacts
    """

    A: TrigSeries
    F: StateField
    G: StateField
    recurrence: RecurrenceClass
    eps0: float = 1.0
    name: str = "system"

    def __post_init__(self):
        d = self.F.dimension
        if self.A.shape != (d, d):
            raise InvalidArgumentError(f"A must be {d}x{d}, got {self.A.shape}", argument="A")
        if self.G.dimension != d:
            raise InvalidArgumentError(
                f"G has dimension {self.G.dimension}, F has {d}", argument="G"
            )
        if not math.isfinite(self.eps0) or self.eps0 <= 0:
            raise InvalidArgumentError(f"eps0 must be positive, got {self.eps0}", argument="eps0")

    def check_recurrence(self) -> list[str]:
        """Reasons the coefficients fall outside the declared class (empty when consistent)."""
        series = self.series
        frequencies = sorted({f for s in series for f in s.frequencies})
        return self.recurrence.conflicts(
            frequencies,
            has_levitan=any(s.levitan is not None for s in series),
            has_decay=any(s.decay is not None for s in series),
        )

    @property
    def dimension(self) -> int:
        return self.F.dimension

    @property
    def series(self) -> tuple[TrigSeries, ...]:
        return (self.A,) + self.F.series + self.G.series

    @property
    def M(self) -> float:
        """System-level bound max(M_F, M_G)."""
        return max(self.F.M, self.G.M)

    @property
    def L(self) -> float:
        """System-level Lipschitz constant max(L_F, L_G)."""
        return max(self.F.L, self.G.L)

    @property
    def is_linear(self) -> bool:
        """True when F and G do not depend on the state."""
        return self.F.is_state_independent and self.G.is_state_independent

    @property
    def is_autonomous(self) -> bool:
        return all(s.is_constant for s in self.series)

    def linear_parts(self) -> tuple[TrigSeries, TrigSeries, TrigSeries]:
        """Return (A, f, g) for a linear system.

        Raises:
            InvalidArgumentError: If F or G depends on the state.
        """
        if not self.is_linear:
            raise InvalidArgumentError(
                f"system {self.name} has state-dependent F or G; use bounded_solution"
            )
        return self.A, self.F.offset, self.G.offset

    def evaluate(self, t: float, x: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = as_finite_scalar(t, "t")
        x = as_state_vector(x, self.dimension)
        return self.A(t), self.F(t, x), self.G(t, x)

    def shift(self, tau: float) -> "CoefficientSystem":
        tau = as_finite_scalar(tau, "tau")
        return replace(self, A=self.A.shift(tau), F=self.F.shift(tau), G=self.G.shift(tau))

    def rescale(self, eps: float) -> "CoefficientSystem":
        """Coefficients of the fast-time equation: A(t/eps), F(t/eps, x), G(t/eps, x)."""
        return replace(self, A=self.A.rescale(eps), F=self.F.rescale(eps), G=self.G.rescale(eps))

    def probe_states(self) -> np.ndarray:
        """States at which the coefficient signature is sampled: 0 and +-e_i."""
        d = self.dimension
        eye = np.eye(d)
        return np.vstack([np.zeros((1, d)), eye, -eye])

    def signature(self, t: npt.ArrayLike) -> np.ndarray:
        """Flattened (A(t), F(t, p), G(t, p)) over the probe states p; shape (n, K)."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        n = t_arr.shape[0]
        parts = [self.A(t_arr).reshape(n, -1)]
        for p in self.probe_states():
            states = np.broadcast_to(p, (n, self.dimension))
            parts.append(self.F(t_arr, states))
            parts.append(self.G(t_arr, states))
        return np.hstack(parts)


def evaluate(
    system: CoefficientSystem, t: float, x: npt.ArrayLike
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (A(t), F(t, x), G(t, x))."""
    return system.evaluate(t, x)


@dataclass(frozen=True)
class ShiftedFunction:
    """Translate of a plain callable; shifts accumulate into one offset."""

    fn: Callable[[np.ndarray], Any]
    tau: float = 0.0

    def __call__(self, t: npt.ArrayLike) -> Any:
        return self.fn(np.asarray(t, dtype=np.float64) + self.tau)

    def shift(self, tau: float) -> "ShiftedFunction":
        return ShiftedFunction(self.fn, self.tau + float(tau))


def shift(obj: Any, tau: float) -> Any:
    """Return the translate t -> obj(t + tau).

    Series, fields and systems shift by phase bookkeeping; plain callables are
    wrapped in :class:`ShiftedFunction`.
    """
    tau = as_finite_scalar(tau, "tau")
    if hasattr(obj, "shift"):
        return obj.shift(tau)
    if callable(obj):
        return ShiftedFunction(obj, tau)
    raise InvalidArgumentError(f"cannot shift object of type {type(obj).__name__}")
