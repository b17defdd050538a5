"""Euler-Maruyama simulation of the original, rescaled and averaged equations.

All three equations share one kernel

    X_{k+1} = X_k + a (A(t_k) X_k + F(t_k, X_k)) h + b G(t_k, X_k) dW_k

with (a, b) = (eps, sqrt(eps)) for the original equation and (1, 1) for the
rescaled and averaged ones. The driving Brownian motion is one-dimensional,
so G(t, X) is a vector multiplying a scalar increment.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import numpy.typing as npt

from bogolyubov.averaging.contraction import ContractionReport
from bogolyubov.averaging.system import AveragedSystem
from bogolyubov.coefficients.recurrence import RecurrenceClass
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import (
    DIVERGENCE_BOUND,
    BrownianTag,
    EquationKind,
    EquationTag,
    as_state_vector,
    uniform_step,
)
from bogolyubov.exceptions import (
    DivergenceError,
    InvalidArgumentError,
    PreconditionError,
    StepSizeError,
)
from bogolyubov.sde.ensemble import PathEnsemble
from bogolyubov.sde.noise import PATH_BLOCK, BlockNoise, BrownianSource, block_count

logger = logging.getLogger(__name__)

Scenario = Union[CoefficientSystem, AveragedSystem]

# dt <= FAST_SCALE_FACTOR * eps resolves coefficients oscillating at rate 1/eps.
FAST_SCALE_FACTOR = 0.1
_STEP_RTOL = 1e-9


@dataclass(frozen=True)
class Equation:
    """A coefficient system with the drift/diffusion scales of one equation kind."""

    system: CoefficientSystem
    tag: EquationTag
    drift_scale: float = 1.0
    noise_scale: float = 1.0

    def drift(self, t: float, X: np.ndarray) -> np.ndarray:
        return self.drift_scale * (X @ self.system.A(t).T + self.system.F(t, X))

    def diffusion(self, t: float, X: np.ndarray) -> np.ndarray:
        return self.noise_scale * self.system.G(t, X)


def averaged_coefficients(system: CoefficientSystem) -> CoefficientSystem:
    """Time-averaged counterpart of a coefficient system (no moduli fitted)."""
    return CoefficientSystem(
        A=system.A.as_constant(),
        F=system.F.averaged(),
        G=system.G.averaged(),
        recurrence=RecurrenceClass.stationary(),
        eps0=system.eps0,
        name=f"{system.name}_averaged",
    )


def equation_for(scenario: Scenario, tag: EquationTag) -> Equation:
    """Resolve the coefficients and scales of the equation named by ``tag``.

    Raises:
        InvalidArgumentError: If an averaged system is paired with a non-averaged tag.
    """
    if isinstance(scenario, AveragedSystem):
        if tag.kind != EquationKind.AVERAGED:
            raise InvalidArgumentError(
                f"averaged system cannot realize the {tag.label} equation", argument="tag"
            )
        return Equation(scenario.as_system(), tag)
    if tag.kind == EquationKind.AVERAGED:
        return Equation(averaged_coefficients(scenario), tag)
    if tag.kind == EquationKind.RESCALED:
        return Equation(scenario.rescale(tag.eps), tag)
    return Equation(scenario, tag, drift_scale=tag.eps, noise_scale=math.sqrt(tag.eps))


def check_fast_step(tag: EquationTag, dt: float) -> None:
    """Rescaled equations need dt <= 0.1 eps.

    Raises:
        StepSizeError: If dt is too coarse for the fast time scale.
    """
    if tag.kind == EquationKind.RESCALED:
        limit = FAST_SCALE_FACTOR * tag.eps
        if dt > limit * (1.0 + _STEP_RTOL):
            raise StepSizeError(
                f"dt={dt:.6g} exceeds {FAST_SCALE_FACTOR} * eps = {limit:.6g} for {tag.label}",
                step=dt,
            )


@dataclass(frozen=True)
class StepLayout:
    """Fine EM steps behind a recording grid.

    ``n_pre`` unrecorded steps run from ``t_start``; the first record is taken
    after them and every ``stride`` steps thereafter.
    """

    t_start: float
    h: float
    n_pre: int
    stride: int
    n_records: int

    @property
    def n_steps(self) -> int:
        return self.n_pre + self.stride * (self.n_records - 1)

    @classmethod
    def for_grid(cls, t_grid: np.ndarray, dt: float, lead_in: float = 0.0) -> "StepLayout":
        """Layout with step <= dt hitting every grid point after at least ``lead_in``."""
        if not math.isfinite(dt) or dt <= 0:
            raise InvalidArgumentError(f"dt must be positive, got {dt}", argument="dt")
        if t_grid.shape[0] == 1:
            h = dt
            stride = 1
        else:
            spacing = uniform_step(t_grid)
            stride = max(1, int(math.ceil(spacing / dt - _STEP_RTOL)))
            h = spacing / stride
        n_pre = int(math.ceil(lead_in / h - _STEP_RTOL)) if lead_in > 0 else 0
        return cls(
            t_start=float(t_grid[0]) - n_pre * h,
            h=h,
            n_pre=n_pre,
            stride=stride,
            n_records=t_grid.shape[0],
        )


def _run_block(
    equation: Equation,
    layout: StepLayout,
    x0: np.ndarray,
    noise: BlockNoise,
    block: int,
    n_active: int,
) -> np.ndarray:
    d = x0.shape[0]
    X = np.broadcast_to(x0, (PATH_BLOCK, d)).copy()
    out = np.empty((PATH_BLOCK, layout.n_records, d))
    sqrt_h = math.sqrt(layout.h)
    record = 0
    if layout.n_pre == 0:
        out[:, 0] = X
        record = 1
    for k in range(layout.n_steps):
        t = layout.t_start + k * layout.h
        dW = sqrt_h * noise.draw()[:, 0]
        X = X + equation.drift(t, X) * layout.h + equation.diffusion(t, X) * dW[:, None]

        active = X[:n_active]
        bad = ~np.isfinite(active) | (np.abs(active) > DIVERGENCE_BOUND)
        if bad.any():
            lane, _ = np.argwhere(bad)[0]
            value = float(np.linalg.norm(active[lane]))
            raise DivergenceError(
                f"path {block * PATH_BLOCK + lane} left |X| <= {DIVERGENCE_BOUND:.0e} at "
                f"t={t + layout.h:.6g} (|X|={value:.3e}) in the {equation.tag.label} equation",
                path_index=int(block * PATH_BLOCK + lane),
                time=t + layout.h,
                value=value,
            )

        done = k + 1
        if done >= layout.n_pre and (done - layout.n_pre) % layout.stride == 0:
            out[:, record] = X
            record += 1
    return out


def integrate(
    equation: Equation,
    layout: StepLayout,
    x0: np.ndarray,
    n_paths: int,
    seed: int,
    stream: int = 0,
    threads: int = 1,
) -> np.ndarray:
    """Run the EM kernel over all path blocks; returns (n_paths, n_records, d)."""
    if n_paths < 1:
        raise InvalidArgumentError(f"n_paths must be >= 1, got {n_paths}", argument="n_paths")
    source = BrownianSource(seed, stream)
    n_blocks = block_count(n_paths)

    def run(block: int) -> np.ndarray:
        n_active = min(PATH_BLOCK, n_paths - block * PATH_BLOCK)
        return _run_block(equation, layout, x0, source.block(block), block, n_active)

    blocks = ordered_map(run, range(n_blocks), threads)
    return np.concatenate(blocks, axis=0)[:n_paths]


def simulate_em(
    scenario: Scenario,
    tag: EquationTag,
    x0: npt.ArrayLike,
    t0: float,
    t1: float,
    dt: float,
    n_paths: int,
    seed: int,
    record_stride: int = 1,
    stream: int = 0,
    brownian: Optional[BrownianTag] = None,
    threads: int = 1,
) -> PathEnsemble:
    """Euler-Maruyama paths of the equation named by ``tag`` on [t0, t1].

    The step is shrunk to divide [t0, t1] evenly; every ``record_stride``-th
    step is recorded.

    Raises:
        InvalidArgumentError: If t1 <= t0, dt <= 0 or x0 has the wrong dimension.
        StepSizeError: If dt > 0.1 eps for a rescaled equation.
        DivergenceError: If a path leaves |X| <= 1e6.
    """
    if not t1 > t0:
        raise InvalidArgumentError(f"need t1 > t0, got [{t0}, {t1}]", argument="t1")
    if not math.isfinite(dt) or dt <= 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}", argument="dt")
    if record_stride < 1:
        raise InvalidArgumentError("record_stride must be >= 1", argument="record_stride")
    equation = equation_for(scenario, tag)
    x0 = as_state_vector(x0, equation.system.dimension, name="x0")

    n_steps = int(math.ceil((t1 - t0) / dt - _STEP_RTOL))
    n_steps = record_stride * int(math.ceil(n_steps / record_stride))
    h = (t1 - t0) / n_steps
    check_fast_step(tag, h)
    n_records = n_steps // record_stride + 1
    layout = StepLayout(t_start=t0, h=h, n_pre=0, stride=record_stride, n_records=n_records)
    grid = t0 + (h * record_stride) * np.arange(n_records)

    logger.debug(f"EM {tag.label}: {n_paths} paths x {n_steps} steps of {h:.3e}")
    paths = integrate(equation, layout, x0, n_paths, seed, stream, threads)
    return PathEnsemble(
        time_grid=grid,
        paths=paths,
        seed=seed,
        tag=tag,
        brownian=brownian or BrownianTag.fresh(stream),
        metadata={"dt": h, "x0": x0.tolist()},
    )


def bounded_solution(
    scenario: Scenario,
    tag: EquationTag,
    t_grid: npt.ArrayLike,
    dt: float,
    n_paths: int,
    seed: int,
    contraction: ContractionReport,
    burn_in: Optional[float] = None,
    stream: int = 0,
    brownian: Optional[BrownianTag] = None,
    threads: int = 1,
) -> PathEnsemble:
    """The unique bounded solution on ``t_grid``, realized by burn-in from zero.

    Integration starts from X = 0 at t_grid[0] - burn_in; only the t_grid
    portion is returned. The certified truncation bias N exp(-nu burn_in) r is
    stored in the metadata.

    Args:
        contraction: Contraction report of the simulated equation
        burn_in: Burn-in length; defaults to the 1% memory horizon ln(100 N)/nu

    Raises:
        RefuseToRunError: If the bounded-solution contraction inequality fails.
        PreconditionError: If burn_in is shorter than the memory horizon.
        StepSizeError: If dt > 0.1 eps for a rescaled equation.
    """
    contraction.require()
    horizon = contraction.memory_horizon()
    burn_in = horizon if burn_in is None else float(burn_in)
    if burn_in < horizon * (1.0 - _STEP_RTOL):
        raise PreconditionError(
            f"burn_in={burn_in:.6g} is shorter than the memory horizon "
            f"ln(100 N)/nu = {horizon:.6g}"
        )
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    equation = equation_for(scenario, tag)
    layout = StepLayout.for_grid(t_grid, dt, lead_in=burn_in)
    check_fast_step(tag, layout.h)

    x0 = np.zeros(equation.system.dimension)
    paths = integrate(equation, layout, x0, n_paths, seed, stream, threads)
    actual_burn_in = layout.n_pre * layout.h
    bias = contraction.truncation_bias(actual_burn_in)
    logger.debug(
        f"bounded solution {tag.label}: burn-in {actual_burn_in:.4g}, bias bound {bias:.3e}"
    )
    return PathEnsemble(
        time_grid=t_grid,
        paths=paths,
        seed=seed,
        tag=tag,
        brownian=brownian or BrownianTag.fresh(stream),
        metadata={
            "dt": layout.h,
            "burn_in": actual_burn_in,
            "bias_bound": bias,
            "radius": contraction.radius,
        },
    )
