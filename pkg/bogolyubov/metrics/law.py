"""Empirical laws of one marginal of a path ensemble."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import numpy.typing as npt

from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.sde.ensemble import PathEnsemble


@dataclass(frozen=True)
class LawSource:
    """Where an empirical law came from."""

    equation: str = "unknown"
    t: Optional[float] = None
    eps: Optional[float] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict[str, Any]:
        return {"equation": self.equation, "t": self.t, "eps": self.eps, "seed": self.seed}


@dataclass(frozen=True, eq=False)
class EmpiricalLaw:
    """Uniform measure on finitely many samples in R^d.

    Attributes:
        samples: Sample points, shape (n, d), n >= 2
        source: Provenance of the samples
    """

    samples: np.ndarray
    source: LawSource = field(default_factory=LawSource)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim == 1:
            samples = samples[:, None]
        if samples.ndim != 2 or samples.shape[0] < 2:
            raise InvalidArgumentError(
                f"an empirical law needs >= 2 samples of shape (n, d), got {samples.shape}",
                argument="samples",
            )
        if not np.all(np.isfinite(samples)):
            raise InvalidArgumentError("empirical law has non-finite samples", argument="samples")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @classmethod
    def from_ensemble(cls, ensemble: PathEnsemble, index: int) -> "EmpiricalLaw":
        """Law of X(t_index) across the paths of ``ensemble``."""
        return cls(
            samples=ensemble.marginal(index),
            source=LawSource(
                equation=ensemble.tag.label,
                t=float(ensemble.time_grid[index]),
                eps=ensemble.tag.eps,
                seed=ensemble.seed,
            ),
        )

    def split_half(self, rng: np.random.Generator) -> tuple["EmpiricalLaw", "EmpiricalLaw"]:
        """Two disjoint halves of a random shuffle of the samples."""
        if self.n_samples < 4:
            raise InvalidArgumentError("split_half needs at least 4 samples")
        order = rng.permutation(self.n_samples)
        half = self.n_samples // 2
        return (
            EmpiricalLaw(self.samples[order[:half]], self.source),
            EmpiricalLaw(self.samples[order[half : 2 * half]], self.source),
        )


def as_law(value: Any) -> EmpiricalLaw:
    """Accept an EmpiricalLaw or an array of samples."""
    if isinstance(value, EmpiricalLaw):
        return value
    return EmpiricalLaw(np.asarray(value, dtype=np.float64))


def pooled_support(
    first: npt.ArrayLike, second: npt.ArrayLike
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sorted distinct points of two 1-D samples with their multiplicities in each."""
    a = np.asarray(first, dtype=np.float64).ravel()
    b = np.asarray(second, dtype=np.float64).ravel()
    support, inverse = np.unique(np.concatenate([a, b]), return_inverse=True)
    counts_a = np.bincount(inverse[: a.shape[0]], minlength=support.shape[0])
    counts_b = np.bincount(inverse[a.shape[0] :], minlength=support.shape[0])
    return support, counts_a, counts_b
