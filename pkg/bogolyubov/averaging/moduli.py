"""Decay moduli: non-increasing majorants of sampled averaging errors."""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt

from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Envelope must shrink at least this much over the T grid to count as vanishing.
VANISHING_RATIO = 0.01


@dataclass(frozen=True, eq=False)
class DecayModulus:
    """Step-function majorant of sampled averaging errors.

    Attributes:
        T: Strictly increasing window lengths
        values: Sampled errors at each T
        envelope: Smallest non-increasing majorant of ``values``
        vanishing: True when the envelope fell by the vanishing ratio
    """

    T: np.ndarray
    values: np.ndarray
    envelope: np.ndarray
    vanishing: bool

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.T.tolist(), self.values.tolist()))

    def __call__(self, T: npt.ArrayLike) -> np.ndarray | float:
        """Envelope value at T; constant before the first and after the last sample."""
        T_arr = np.asarray(T, dtype=np.float64)
        index = np.clip(np.searchsorted(self.T, T_arr, side="right") - 1, 0, len(self.T) - 1)
        out = self.envelope[index]
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {
            "T": self.T.tolist(),
            "values": self.values.tolist(),
            "envelope": self.envelope.tolist(),
            "vanishing": self.vanishing,
        }


def fit_decay_modulus(samples: Sequence[tuple[float, float]]) -> DecayModulus:
    """Fit the running-maximum-from-the-right envelope of (T, value) samples.

    Raises:
        InvalidArgumentError: On fewer than two samples, a T grid that is not
            strictly increasing, or negative / non-finite values.
    """
    if len(samples) < 2:
        raise InvalidArgumentError(f"need at least 2 samples, got {len(samples)}")
    arr = np.asarray(samples, dtype=np.float64)
    T, values = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("decay modulus samples must be finite")
    if np.any(np.diff(T) <= 0):
        raise InvalidArgumentError(f"T grid must be strictly increasing, got {T.tolist()}")
    if np.any(values < 0):
        raise InvalidArgumentError("decay modulus samples must be non-negative")

    envelope = np.maximum.accumulate(values[::-1])[::-1]
    vanishing = bool(envelope[-1] <= VANISHING_RATIO * envelope[0])
    for arr_ in (T, values, envelope):
        arr_.setflags(write=False)
    return DecayModulus(T=T, values=values, envelope=envelope, vanishing=vanishing)


@dataclass(frozen=True)
class LemmaProfileRow:
    """sup_{0<=tau<=l} tau*psi(tau/eps) with its analytic majorant."""

    eps: float
    value: float
    majorant: float


def lemma_profile(
    psi: Callable[[np.ndarray], np.ndarray],
    l: float,
    eps_list: Sequence[float],
    n_grid: int = 20001,
    kappa: float = 0.5,
) -> list[LemmaProfileRow]:
    """Evaluate sup_{0<=tau<=l} tau*psi(tau/eps) along an eps sweep.

    For psi decreasing and vanishing at infinity the value tends to zero; the
    majorant eps^kappa psi(0) + l psi(eps^(kappa-1)) splits [0, l] at
    eps^kappa.
    """
    if l <= 0 or not 0 < kappa < 1:
        raise InvalidArgumentError("need l > 0 and 0 < kappa < 1")
    tau = np.linspace(0.0, l, n_grid)
    psi0 = float(psi(np.asarray(0.0)))
    rows = []
    for eps in eps_list:
        value = float(np.max(tau * psi(tau / eps)))
        majorant = eps**kappa * psi0 + l * float(psi(np.asarray(eps ** (kappa - 1.0))))
        rows.append(LemmaProfileRow(eps=float(eps), value=value, majorant=majorant))
    return rows
