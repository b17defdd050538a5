"""Value types shared by every module.

States live in R^d and operators are dense d x d float64 arrays; the helpers
here coerce user input into those shapes and reject non-finite entries.
Equation and Brownian tags travel with every path ensemble.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np

from bogolyubov.exceptions import InvalidArgumentError

# Above this norm a simulated path counts as diverged.
DIVERGENCE_BOUND = 1e6


class EquationKind(str, Enum):
    """Which of the three equations a path ensemble realizes."""

    ORIGINAL = "original"  # dX = eps(A(t)X + F)dt + sqrt(eps) G dW
    RESCALED = "rescaled"  # dX = (A(t/eps)X + F(t/eps, X))dt + G(t/eps, X) dW
    AVERAGED = "averaged"  # dX = (A_bar X + F_bar(X))dt + G_bar(X) dW


@dataclass(frozen=True)
class EquationTag:
    """Equation kind plus its time scale.

    Attributes:
        kind: Which equation is simulated
        eps: Time scale, required for original/rescaled, absent for averaged
    """

    kind: EquationKind
    eps: Optional[float] = None

    def __post_init__(self):
        if self.kind == EquationKind.AVERAGED:
            if self.eps is not None:
                raise InvalidArgumentError("averaged tag carries no eps", argument="eps")
            return
        if self.eps is None or not np.isfinite(self.eps) or self.eps <= 0:
            raise InvalidArgumentError(
                f"{self.kind.value} tag needs a positive finite eps, got {self.eps}",
                argument="eps",
            )

    @classmethod
    def original(cls, eps: float) -> "EquationTag":
        return cls(EquationKind.ORIGINAL, float(eps))

    @classmethod
    def rescaled(cls, eps: float) -> "EquationTag":
        return cls(EquationKind.RESCALED, float(eps))

    @classmethod
    def averaged(cls) -> "EquationTag":
        return cls(EquationKind.AVERAGED)

    @property
    def label(self) -> str:
        if self.eps is None:
            return self.kind.value
        return f"{self.kind.value}({self.eps!r})"

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "eps": self.eps}


@dataclass(frozen=True)
class BrownianTag:
    """Identifies the Brownian stream an ensemble consumed.

    Two ensembles with equal shared tags and equal seeds were driven by the
    same increments path for path.
    """

    stream: int = 0
    shared: bool = False

    @classmethod
    def fresh(cls, stream: int = 0) -> "BrownianTag":
        return cls(stream=stream, shared=False)

    @classmethod
    def shared_with(cls, stream: int) -> "BrownianTag":
        return cls(stream=stream, shared=True)

    @property
    def label(self) -> str:
        return f"shared({self.stream})" if self.shared else "fresh"


def _require_finite(values: np.ndarray, name: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError(f"{name} has non-finite entries", argument=name)
    return values


def as_state_vector(x: Any, dimension: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a finite float64 vector of length ``dimension``."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be a vector, got shape {arr.shape}", argument=name)
    if dimension is not None and arr.shape[0] != dimension:
        raise InvalidArgumentError(
            f"{name} has dimension {arr.shape[0]}, expected {dimension}", argument=name
        )
    return _require_finite(arr, name)


def as_operator(a: Any, dimension: Optional[int] = None, name: str = "A") -> np.ndarray:
    """Coerce ``a`` to a finite square float64 matrix; scalars become 1 x 1."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {arr.shape}", argument=name)
    if dimension is not None and arr.shape[0] != dimension:
        raise InvalidArgumentError(
            f"{name} is {arr.shape[0]}x{arr.shape[0]}, expected {dimension}x{dimension}",
            argument=name,
        )
    return _require_finite(arr, name)


def as_finite_scalar(value: Any, name: str) -> float:
    """Coerce ``value`` to a finite float."""
    out = float(value)
    if not np.isfinite(out):
        raise InvalidArgumentError(f"{name} must be finite, got {value}", argument=name)
    return out


def uniform_step(grid: np.ndarray, name: str = "t_grid", rtol: float = 1e-9) -> float:
    """Return the spacing of a strictly increasing uniform grid."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2:
        raise InvalidArgumentError(f"{name} needs at least two points", argument=name)
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise InvalidArgumentError(f"{name} must be strictly increasing", argument=name)
    h = float(steps.mean())
    if np.max(np.abs(steps - h)) > rtol * max(h, 1.0):
        raise InvalidArgumentError(f"{name} must be uniform", argument=name)
    return h
