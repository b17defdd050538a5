"""Distributional convergence sweeps and law periodicity profiles."""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import numpy.typing as npt

from bogolyubov.averaging.contraction import ContractionReport
from bogolyubov.averaging.system import AveragedSystem
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import BrownianTag, EquationTag
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.metrics.beta import BetaEstimate, beta_distance
from bogolyubov.metrics.law import EmpiricalLaw
from bogolyubov.sde.coupling import default_burn_in
from bogolyubov.sde.diagnostics import rescale_time
from bogolyubov.sde.ensemble import PathEnsemble
from bogolyubov.sde.simulate import bounded_solution

logger = logging.getLogger(__name__)

LAW_SWEEP_COLUMNS = ("epsilon", "t", "beta", "noise_floor", "n_samples")
FLOOR_SHUFFLES = 5
# Shuffle standard deviations added to the floor when a sup over t is compared to it.
FLOOR_SPREAD_FACTOR = 2.0
RESCALED_STREAM = 1
AVERAGED_STREAM = 2


@dataclass(frozen=True)
class NoiseFloor:
    """Split-half self-distances of one law over random shuffles.

    Attributes:
        mean: Average self-distance, the reported noise floor
        spread: Sample standard deviation over the shuffles (0 for one shuffle)
    """

    mean: float
    spread: float

    @property
    def tolerance(self) -> float:
        """Largest beta still attributed to sampling noise."""
        return self.mean + FLOOR_SPREAD_FACTOR * self.spread


def noise_floor_estimate(
    law: EmpiricalLaw, n_shuffles: int = FLOOR_SHUFFLES, seed: int = 0
) -> NoiseFloor:
    """Split-half self-distances of a law, with their mean and spread."""
    if n_shuffles < 1:
        raise InvalidArgumentError(f"n_shuffles must be >= 1, got {n_shuffles}", argument="n_shuffles")
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(n_shuffles):
        first, second = law.split_half(rng)
        values.append(beta_distance(first, second, seed=seed).estimate)
    spread = float(np.std(values, ddof=1)) if n_shuffles > 1 else 0.0
    return NoiseFloor(mean=float(np.mean(values)), spread=spread)


def noise_floor(law: EmpiricalLaw, n_shuffles: int = FLOOR_SHUFFLES, seed: int = 0) -> float:
    """Split-half self-distance of a law, averaged over random shuffles."""
    return noise_floor_estimate(law, n_shuffles, seed).mean


def marginal_noise_floors(
    ensemble: PathEnsemble, n_shuffles: int = FLOOR_SHUFFLES, seed: int = 0, threads: int = 1
) -> list[NoiseFloor]:
    """Noise floor estimate of every marginal of an ensemble."""
    return ordered_map(
        lambda k: noise_floor_estimate(EmpiricalLaw.from_ensemble(ensemble, k), n_shuffles, seed),
        range(ensemble.n_times),
        threads,
    )


def marginal_floors(
    ensemble: PathEnsemble, n_shuffles: int = FLOOR_SHUFFLES, seed: int = 0, threads: int = 1
) -> np.ndarray:
    """Noise floor of every marginal of an ensemble."""
    return np.asarray([f.mean for f in marginal_noise_floors(ensemble, n_shuffles, seed, threads)])


@dataclass(frozen=True)
class LawSweepCell:
    eps: float
    t: float
    beta: float
    noise_floor: float
    n_samples: int
    floor_spread: float = 0.0

    @property
    def floor_tolerance(self) -> float:
        return self.noise_floor + FLOOR_SPREAD_FACTOR * self.floor_spread


@dataclass(frozen=True)
class LawSweepRow:
    """Per-eps summary: sup over t of beta, against the noise floors of the row.

    ``noise_floor`` is the largest mean floor over t. ``floor_tolerance`` adds
    the shuffle spread, since the sup over t of noisy betas sits above a
    single mean floor even for identical laws.
    """

    eps: float
    sup_beta: float
    t_star: float
    noise_floor: float
    floor_tolerance: float

    @property
    def at_floor(self) -> bool:
        return self.sup_beta <= self.floor_tolerance


@dataclass
class LawSweepTable:
    """Beta distances between rescaled and averaged laws on an eps x t grid."""

    cells: list[LawSweepCell] = field(default_factory=list)

    def rows(self) -> list[LawSweepRow]:
        out = []
        for eps in sorted({c.eps for c in self.cells}, reverse=True):
            cells = [c for c in self.cells if c.eps == eps]
            best = max(cells, key=lambda c: c.beta)
            out.append(
                LawSweepRow(
                    eps=eps,
                    sup_beta=best.beta,
                    t_star=best.t,
                    noise_floor=max(c.noise_floor for c in cells),
                    floor_tolerance=max(c.floor_tolerance for c in cells),
                )
            )
        return out

    def is_decreasing(self) -> bool:
        """Each row below the previous one, or already at its noise floor."""
        rows = self.rows()
        return all(b.sup_beta < a.sup_beta or b.at_floor for a, b in zip(rows, rows[1:]))

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(LAW_SWEEP_COLUMNS)
            for c in self.cells:
                writer.writerow([repr(c.eps), repr(c.t), repr(c.beta), repr(c.noise_floor), c.n_samples])
        return path

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": [
                {
                    "eps": r.eps,
                    "sup_beta": r.sup_beta,
                    "t_star": r.t_star,
                    "noise_floor": r.noise_floor,
                    "floor_tolerance": r.floor_tolerance,
                    "at_floor": r.at_floor,
                }
                for r in self.rows()
            ],
            "decreasing": self.is_decreasing(),
        }


def _require_decreasing(eps_list: Sequence[float]) -> list[float]:
    eps = [float(e) for e in eps_list]
    if not eps:
        raise InvalidArgumentError("eps_list is empty", argument="eps_list")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise InvalidArgumentError(f"eps_list must be strictly decreasing, got {eps}", argument="eps_list")
    return eps


def law_convergence_sweep(
    scenario: CoefficientSystem,
    eps_list: Sequence[float],
    t_grid: npt.ArrayLike,
    n_paths: int,
    seed: int,
    contraction: ContractionReport,
    averaged: Optional[AveragedSystem] = None,
    averaged_contraction: Optional[ContractionReport] = None,
    dt_factor: float = 0.1,
    burn_in: Optional[float] = None,
    floor_shuffles: int = FLOOR_SHUFFLES,
    threads: int = 1,
) -> LawSweepTable:
    """sup_t beta(law of the original solution at t/eps, law of the averaged solution at t).

    The original law at time t/eps is read off the rescaled solution at t.
    The rescaled and averaged ensembles use independent Brownian streams; the
    averaged ensemble and its per-time noise floors are computed once and
    reused for every eps.

    Raises:
        InvalidArgumentError: If eps_list is empty or not strictly decreasing.
        RefuseToRunError: If the contraction inequality fails.
    """
    eps_list = _require_decreasing(eps_list)
    contraction.require()
    averaged_contraction = averaged_contraction or contraction
    if burn_in is None:
        burn_in = default_burn_in(contraction, averaged_contraction)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))

    reference = bounded_solution(
        averaged if averaged is not None else scenario,
        EquationTag.averaged(),
        t_grid,
        dt=dt_factor * eps_list[-1],
        n_paths=n_paths,
        seed=seed,
        contraction=averaged_contraction,
        burn_in=burn_in,
        stream=AVERAGED_STREAM,
        brownian=BrownianTag.fresh(AVERAGED_STREAM),
        threads=threads,
    )
    floors = marginal_noise_floors(reference, floor_shuffles, seed, threads)
    tolerance = max(f.tolerance for f in floors)

    table = LawSweepTable()
    for eps in eps_list:
        ensemble = bounded_solution(
            scenario,
            EquationTag.rescaled(eps),
            t_grid,
            dt=dt_factor * eps,
            n_paths=n_paths,
            seed=seed,
            contraction=contraction,
            burn_in=burn_in,
            stream=RESCALED_STREAM,
            brownian=BrownianTag.fresh(RESCALED_STREAM),
            threads=threads,
        )
        original = rescale_time(ensemble)

        def cell(k: int, original=original, eps=eps) -> LawSweepCell:
            estimate = beta_distance(
                EmpiricalLaw.from_ensemble(original, k),
                EmpiricalLaw.from_ensemble(reference, k),
                seed=seed,
            )
            return LawSweepCell(
                eps=eps,
                t=float(t_grid[k]),
                beta=estimate.estimate,
                noise_floor=floors[k].mean,
                n_samples=n_paths,
                floor_spread=floors[k].spread,
            )

        cells = ordered_map(cell, range(t_grid.shape[0]), threads)
        table.cells.extend(cells)
        best = max(c.beta for c in cells)
        logger.info(f"law sweep eps={eps}: sup beta {best:.4g} (floor tolerance {tolerance:.4g})")
        if best <= tolerance:
            logger.warning(f"law sweep eps={eps} is at the noise floor")
    return table


@dataclass(frozen=True)
class PeriodicityRow:
    t: float
    beta: BetaEstimate
    noise_floor: float

    @property
    def at_floor(self) -> bool:
        return self.beta.estimate <= self.noise_floor


@dataclass
class PeriodicityProfile:
    """Beta between marginals one lag apart, against the noise floor."""

    lag: float
    rows: list[PeriodicityRow] = field(default_factory=list)

    @property
    def all_at_floor(self) -> bool:
        return all(row.at_floor for row in self.rows)

    @property
    def worst_excess(self) -> float:
        return max((row.beta.estimate - row.noise_floor for row in self.rows), default=0.0)


def periodicity_profile(
    ensemble: PathEnsemble,
    lag_steps: int,
    floor_shuffles: int = FLOOR_SHUFFLES,
    seed: int = 0,
    threads: int = 1,
) -> PeriodicityProfile:
    """beta(law X(t_k), law X(t_{k + lag})) for every k with a partner on the grid.

    Raises:
        InvalidArgumentError: If the lag does not fit on the grid.
    """
    if not 0 < lag_steps < ensemble.n_times:
        raise InvalidArgumentError(
            f"lag of {lag_steps} steps does not fit a grid of {ensemble.n_times}",
            argument="lag_steps",
        )

    def row(k: int) -> PeriodicityRow:
        here = EmpiricalLaw.from_ensemble(ensemble, k)
        there = EmpiricalLaw.from_ensemble(ensemble, k + lag_steps)
        floor = noise_floor(here, floor_shuffles, seed)
        return PeriodicityRow(
            t=float(ensemble.time_grid[k]), beta=beta_distance(here, there, seed=seed), noise_floor=floor
        )

    rows = ordered_map(row, range(ensemble.n_times - lag_steps), threads)
    return PeriodicityProfile(lag=lag_steps * ensemble.step, rows=rows)
