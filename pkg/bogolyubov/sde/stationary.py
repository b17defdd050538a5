"""Samples of the stationary solution of the averaged equation."""

import logging
from enum import Enum
from typing import Optional

import numpy as np
import numpy.typing as npt

from bogolyubov.averaging.contraction import ContractionReport, verify_contraction
from bogolyubov.averaging.system import AveragedSystem
from bogolyubov.core.linalg import (
    hurwitz_check,
    lyapunov_stationary_cov,
    mat_exp,
    psd_sqrt,
    stationary_mean,
)
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import BrownianTag, EquationTag, uniform_step
from bogolyubov.exceptions import HurwitzError, InvalidArgumentError
from bogolyubov.flow.dichotomy import SamplingPlan, fit_dichotomy
from bogolyubov.flow.propagator import as_operator_series
from bogolyubov.sde.ensemble import PathEnsemble
from bogolyubov.sde.noise import PATH_BLOCK, BrownianSource, block_count
from bogolyubov.sde.simulate import bounded_solution

logger = logging.getLogger(__name__)


class StationaryMode(str, Enum):
    EXACT_GAUSSIAN = "exact_gaussian"
    LONG_RUN = "long_run"


def averaged_contraction(avg: AveragedSystem) -> ContractionReport:
    """Contraction report of the averaged equation from a fitted dichotomy of A_bar."""
    plan = SamplingPlan.covering(1.0, T_max=20.0, n_base=1)
    cert = fit_dichotomy(as_operator_series(avg.A_bar), plan)
    return verify_contraction(cert, max(avg.F_bar.M, avg.G_bar.M), max(avg.F_bar.L, avg.G_bar.L))


def _exact_gaussian(
    avg: AveragedSystem, t_grid: np.ndarray, n_paths: int, seed: int, stream: int, threads: int
) -> tuple[np.ndarray, dict]:
    if not avg.is_linear:
        raise InvalidArgumentError(
            "exact_gaussian sampling needs a linear averaged system; use mode=long_run",
            argument="mode",
        )
    A_bar, f_bar, g_bar = avg.linear_parts()
    report = hurwitz_check(A_bar)
    if not report.is_hurwitz:
        raise HurwitzError(
            f"hurwitz_check failed for A_bar: spectral abscissa {report.spectral_abscissa:.6g}",
            spectral_abscissa=report.spectral_abscissa,
        )
    d = A_bar.shape[0]
    mean = stationary_mean(A_bar, f_bar)
    P = lyapunov_stationary_cov(A_bar, g_bar)
    root_P = psd_sqrt(P)
    if t_grid.shape[0] > 1:
        Phi = mat_exp(A_bar, uniform_step(t_grid))
        root_Q = psd_sqrt(P - Phi @ P @ Phi.T)
    else:
        Phi = root_Q = np.zeros((d, d))

    source = BrownianSource(seed, stream)

    def run(block: int) -> np.ndarray:
        noise = source.block(block, width=d)
        out = np.empty((PATH_BLOCK, t_grid.shape[0], d))
        X = mean + noise.draw() @ root_P.T
        out[:, 0] = X
        for k in range(1, t_grid.shape[0]):
            X = mean + (X - mean) @ Phi.T + noise.draw() @ root_Q.T
            out[:, k] = X
        return out

    paths = np.concatenate(ordered_map(run, range(block_count(n_paths)), threads), axis=0)
    logger.debug(f"exact stationary sampler: mean {mean.tolist()}, trace(P)={np.trace(P):.6g}")
    return paths[:n_paths], {"mean": mean.tolist(), "covariance": P.tolist()}


def sample_averaged_stationary(
    avg: AveragedSystem,
    t_grid: npt.ArrayLike,
    n_paths: int,
    seed: int,
    mode: StationaryMode = StationaryMode.EXACT_GAUSSIAN,
    dt: float = 1e-2,
    burn_in: Optional[float] = None,
    contraction: Optional[ContractionReport] = None,
    stream: int = 0,
    threads: int = 1,
) -> PathEnsemble:
    """Paths of the stationary solution of the averaged equation on ``t_grid``.

    ``exact_gaussian`` draws X(t_0) from N(-A_bar^{-1} f_bar, P) with P the
    Lyapunov covariance and advances by the exact transition
    X_{k+1} = m + e^{A_bar h}(X_k - m) + eta_k, cov(eta_k) = P - e^{A_bar h} P e^{A_bar^T h}.
    ``long_run`` runs Euler-Maruyama from a burn-in like :func:`bounded_solution`.

    Raises:
        InvalidArgumentError: For exact_gaussian on a semilinear system.
        HurwitzError: If A_bar is not Hurwitz.
    """
    mode = StationaryMode(mode)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    if n_paths < 1:
        raise InvalidArgumentError(f"n_paths must be >= 1, got {n_paths}", argument="n_paths")
    tag = EquationTag.averaged()

    if mode == StationaryMode.LONG_RUN:
        contraction = contraction or averaged_contraction(avg)
        ensemble = bounded_solution(
            avg,
            tag,
            t_grid,
            dt=dt,
            n_paths=n_paths,
            seed=seed,
            contraction=contraction,
            burn_in=burn_in,
            stream=stream,
            threads=threads,
        )
        ensemble.metadata["mode"] = mode.value
        return ensemble

    paths, facts = _exact_gaussian(avg, t_grid, n_paths, seed, stream, threads)
    return PathEnsemble(
        time_grid=t_grid,
        paths=paths,
        seed=seed,
        tag=tag,
        brownian=BrownianTag.fresh(stream),
        metadata={"mode": mode.value, **facts},
    )
