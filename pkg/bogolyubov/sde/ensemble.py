"""Path ensembles, their moment statistics and on-disk formats."""

import csv
import logging
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional

import numpy as np

from bogolyubov.core.types import BrownianTag, EquationTag, uniform_step
from bogolyubov.exceptions import ConsistencyError, InvalidArgumentError

logger = logging.getLogger(__name__)

BINARY_MAGIC = b"BGLYB1"
_HEADER = struct.Struct("<6sQQQQ")
GRID_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """Sample paths of one equation on a shared uniform time grid.

    Attributes:
        time_grid: Strictly increasing uniform times, shape (n_times,)
        paths: Path values, shape (n_paths, n_times, d)
        seed: Seed the Brownian increments were keyed by
        tag: Which equation the paths realize
        brownian: Which Brownian stream drove them
        metadata: Free-form run facts (burn-in, bias bound, ...)
    """

    time_grid: np.ndarray
    paths: np.ndarray
    seed: int
    tag: EquationTag
    brownian: BrownianTag = field(default_factory=BrownianTag)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.time_grid, dtype=np.float64)
        paths = np.asarray(self.paths, dtype=np.float64)
        if paths.ndim != 3 or paths.shape[1] != grid.shape[0]:
            raise InvalidArgumentError(
                f"paths must be (n_paths, {grid.shape[0]}, d), got {paths.shape}", argument="paths"
            )
        if grid.shape[0] > 1:
            uniform_step(grid, rtol=GRID_RTOL)
        if not np.all(np.isfinite(paths)):
            raise InvalidArgumentError("ensemble holds non-finite values", argument="paths")
        grid.setflags(write=False)
        paths.setflags(write=False)
        object.__setattr__(self, "time_grid", grid)
        object.__setattr__(self, "paths", paths)

    @property
    def n_paths(self) -> int:
        return self.paths.shape[0]

    @property
    def n_times(self) -> int:
        return self.paths.shape[1]

    @property
    def dimension(self) -> int:
        return self.paths.shape[2]

    @property
    def step(self) -> float:
        return uniform_step(self.time_grid, rtol=GRID_RTOL) if self.n_times > 1 else 0.0

    def marginal(self, index: int) -> np.ndarray:
        """Samples of X(t_index), shape (n_paths, d)."""
        return self.paths[:, index, :]

    def relabel(self, time_grid: np.ndarray, tag: EquationTag) -> "PathEnsemble":
        """Same values on a new grid and tag."""
        return replace(self, time_grid=np.asarray(time_grid, dtype=np.float64), tag=tag)

    def statistics(self) -> "SolutionStatistics":
        return SolutionStatistics.from_ensemble(self)

    def to_csv(self, path: Path) -> Path:
        """Write rows (path_id, t, x_1..x_d); floats are written with repr."""
        path = Path(path)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["path_id", "t"] + [f"x_{i + 1}" for i in range(self.dimension)])
            for p in range(self.n_paths):
                for k, t in enumerate(self.time_grid.tolist()):
                    writer.writerow([p, repr(t)] + [repr(v) for v in self.paths[p, k].tolist()])
        return path

    def to_binary(self, path: Path) -> Path:
        """Write the BGLYB1 dump: header (d, n_paths, n_times, seed), grid, then paths."""
        path = Path(path)
        with open(path, "wb") as f:
            f.write(_HEADER.pack(BINARY_MAGIC, self.dimension, self.n_paths, self.n_times, self.seed))
            f.write(self.time_grid.astype("<f8").tobytes())
            f.write(np.ascontiguousarray(self.paths, dtype="<f8").tobytes())
        return path

    @classmethod
    def from_binary(
        cls, path: Path, tag: EquationTag, brownian: Optional[BrownianTag] = None
    ) -> "PathEnsemble":
        """Read a BGLYB1 dump; the equation tag is not stored and must be supplied."""
        raw = Path(path).read_bytes()
        magic, d, n_paths, n_times, seed = _HEADER.unpack_from(raw)
        if magic != BINARY_MAGIC:
            raise InvalidArgumentError(f"{path} is not a BGLYB1 dump (magic {magic!r})")
        body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
        expected = n_times + n_paths * n_times * d
        if body.shape[0] != expected:
            raise InvalidArgumentError(f"{path}: expected {expected} doubles, found {body.shape[0]}")
        grid = body[:n_times].astype(np.float64)
        paths = body[n_times:].astype(np.float64).reshape(n_paths, n_times, d)
        return cls(
            time_grid=grid,
            paths=paths,
            seed=seed,
            tag=tag,
            brownian=brownian or BrownianTag(),
        )


def _standard_error(samples: np.ndarray) -> np.ndarray:
    n = samples.shape[0]
    if n < 2:
        return np.zeros(samples.shape[1:])
    return np.std(samples, axis=0, ddof=1) / np.sqrt(n)


@dataclass(frozen=True, eq=False)
class SolutionStatistics:
    """Per-time moments of an ensemble, or of the difference of two coupled ensembles.

    Attributes:
        time_grid: Grid the moments live on
        mean: Per-time mean, shape (n_times, d)
        second_moment: Per-time E|X(t)|^2
        second_moment_se: Standard errors from the across-path variance
        deviation: Per-time E|X1(t) - X2(t)|^2 for coupled pairs
        deviation_se: Standard errors of ``deviation``
    """

    time_grid: np.ndarray
    n_paths: int
    mean: np.ndarray
    second_moment: np.ndarray
    second_moment_se: np.ndarray
    deviation: Optional[np.ndarray] = None
    deviation_se: Optional[np.ndarray] = None

    @classmethod
    def from_ensemble(cls, ensemble: PathEnsemble) -> "SolutionStatistics":
        squared = np.sum(ensemble.paths**2, axis=2)
        return cls(
            time_grid=ensemble.time_grid,
            n_paths=ensemble.n_paths,
            mean=ensemble.paths.mean(axis=0),
            second_moment=squared.mean(axis=0),
            second_moment_se=_standard_error(squared),
        )

    @classmethod
    def from_pair(cls, first: PathEnsemble, second: PathEnsemble) -> "SolutionStatistics":
        """Statistics of ``first`` plus the deviation moments of ``first - second``.

        Raises:
            ConsistencyError: If the two ensembles do not share grid and path count.
        """
        if first.paths.shape != second.paths.shape:
            raise ConsistencyError(
                f"coupled ensembles differ in shape: {first.paths.shape} vs {second.paths.shape}"
            )
        if not np.array_equal(first.time_grid, second.time_grid):
            raise ConsistencyError("coupled ensembles live on different time grids")
        base = cls.from_ensemble(first)
        squared = np.sum((first.paths - second.paths) ** 2, axis=2)
        return replace(base, deviation=squared.mean(axis=0), deviation_se=_standard_error(squared))

    @property
    def sup_second_moment(self) -> tuple[float, float]:
        """(max over the grid of E|X|^2, its standard error)."""
        k = int(np.argmax(self.second_moment))
        return float(self.second_moment[k]), float(self.second_moment_se[k])

    @property
    def sup_deviation(self) -> tuple[float, float]:
        """(max over the grid of E|X1 - X2|^2, its standard error)."""
        if self.deviation is None:
            raise InvalidArgumentError("statistics carry no coupled deviation")
        k = int(np.argmax(self.deviation))
        return float(self.deviation[k]), float(self.deviation_se[k])

    def to_dict(self) -> dict[str, Any]:
        out = {
            "n_paths": self.n_paths,
            "sup_second_moment": self.sup_second_moment[0],
            "sup_second_moment_se": self.sup_second_moment[1],
        }
        if self.deviation is not None:
            out["sup_deviation"], out["sup_deviation_se"] = self.sup_deviation
        return out
