"""The averaged system (A_bar, F_bar, G_bar) and its fitted decay moduli."""

import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from bogolyubov.averaging.engine import average_diffusion_gap, operator_average_deviation
from bogolyubov.averaging.moduli import DecayModulus, fit_decay_modulus
from bogolyubov.coefficients.certificates import CERTIFICATE_RTOL, check_field
from bogolyubov.coefficients.fields import StateField
from bogolyubov.coefficients.recurrence import RecurrenceClass
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.linalg import hurwitz_check
from bogolyubov.exceptions import CertificateViolationError, InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_T_GRID = (1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0)


@dataclass(frozen=True, eq=False)
class AveragedSystem:
    """Constant-coefficient system obtained by long-window time averages.

    Attributes:
        A_bar: Mean of A(t)
        F_bar: Averaged drift (profiles replaced by their means)
        G_bar: Averaged diffusion
        moduli: Fitted (omega, omega1, omega2) for A, F, G
        source: Name of the system that was averaged
    """

    A_bar: np.ndarray
    F_bar: StateField
    G_bar: StateField
    moduli: tuple[DecayModulus, DecayModulus, DecayModulus]
    source: str = "system"

    @property
    def dimension(self) -> int:
        return self.F_bar.dimension

    @property
    def is_linear(self) -> bool:
        return self.F_bar.is_state_independent and self.G_bar.is_state_independent

    @property
    def is_hurwitz(self) -> bool:
        return hurwitz_check(self.A_bar).is_hurwitz

    def linear_parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (A_bar, f_bar, g_bar) as plain arrays.

        Raises:
            InvalidArgumentError: If the averaged fields depend on the state.
        """
        if not self.is_linear:
            raise InvalidArgumentError(f"averaged {self.source} is semilinear")
        return self.A_bar.copy(), self.F_bar.offset.mean(), self.G_bar.offset.mean()

    def as_system(self) -> CoefficientSystem:
        """The averaged equation as an autonomous coefficient system."""
        return CoefficientSystem(
            A=TrigSeries.constant(self.A_bar),
            F=self.F_bar,
            G=self.G_bar,
            recurrence=RecurrenceClass.stationary(),
            name=f"{self.source}_averaged",
        )

    def to_dict(self) -> dict[str, Any]:
        omega, omega1, omega2 = self.moduli
        return {
            "source": self.source,
            "A_bar": self.A_bar.tolist(),
            "omega": omega.to_dict(),
            "omega1": omega1.to_dict(),
            "omega2": omega2.to_dict(),
        }


def _profile_residuals(field_: StateField, phases: np.ndarray, T: float) -> list:
    """Window averages minus means of each profile, computed once per T."""
    offset = field_.offset.window_average(phases, T) - field_.offset.mean()
    linear = None
    if field_.linear is not None:
        linear = field_.linear.window_average(phases, T) - field_.linear.mean()
    terms = [
        (term.kind, term.profile.window_average(phases, T) - term.profile.mean())
        for term in field_.terms
    ]
    return [offset, linear, terms]


def _drift_residual(residuals: list, x: np.ndarray) -> np.ndarray:
    offset, linear, terms = residuals
    out = offset.copy()
    if linear is not None:
        out = out + np.einsum("nij,j->ni", linear, x)
    for kind, profile in terms:
        out = out + profile * kind.apply(x)
    return np.linalg.norm(out, axis=1)


def _assert_inherited_certificates(
    system: CoefficientSystem, F_bar: StateField, G_bar: StateField, seed: int
) -> None:
    rng = np.random.default_rng(seed)
    n = 256
    t = np.zeros(n)
    x1 = rng.standard_normal((n, system.dimension)) * 10.0
    x2 = x1 + rng.standard_normal((n, system.dimension))
    for name, averaged, original in (("F_bar", F_bar, system.F), ("G_bar", G_bar, system.G)):
        if averaged.M > original.M or averaged.L > original.L:
            raise CertificateViolationError(
                f"{name} certificate exceeds that of the original field",
                witness={"field": name},
            )
        check = check_field(averaged, name, t, x1, x2)
        if not check.passed:
            raise CertificateViolationError(
                f"{name} breaks its inherited certificate (worst ratio "
                f"{max(check.worst_M_ratio, check.worst_L_ratio):.6g} > 1 + {CERTIFICATE_RTOL})",
                witness={"field": name, **check.witness_L},
            )


def average_system(
    system: CoefficientSystem,
    T_grid: Sequence[float] = DEFAULT_T_GRID,
    n_phases: int = 32,
    seed: int = 0,
) -> AveragedSystem:
    """Average the coefficients and fit omega, omega1, omega2 on a T grid.

    omega(T) samples ||(1/T) int A - A_bar||, omega1(T) samples
    |(1/T) int F(s, x) ds - F_bar(x)| / (1 + |x|) and omega2(T) samples the
    diffusion gap divided by (1 + |x|^2), each maximized over random phases
    and the probe states of the system.
    """
    rng = np.random.default_rng(seed)
    # t = 0 keeps transients (decaying terms) inside the sampled windows.
    phases = np.concatenate([[0.0], rng.uniform(-1e3, 1e3, size=n_phases - 1)])
    states = np.vstack([system.probe_states(), 3.0 * rng.standard_normal((4, system.dimension))])

    A_bar = system.A.mean()
    F_bar = system.F.averaged()
    G_bar = system.G.averaged()
    _assert_inherited_certificates(system, F_bar, G_bar, seed)

    omega, omega1, omega2 = [], [], []
    for T in T_grid:
        omega.append((T, operator_average_deviation(system.A, T, phases, A_bar)))

        f_res = _profile_residuals(system.F, phases, T)
        worst_f = max(
            float(_drift_residual(f_res, x).max()) / (1.0 + np.linalg.norm(x)) for x in states
        )
        omega1.append((T, worst_f))

        worst_g = 0.0
        if not all(s.is_constant for s in system.G.series):
            worst_g = max(
                _diffusion_gap_over_phases(system.G, G_bar, x, T, phases) / (1.0 + float(x @ x))
                for x in states
            )
        omega2.append((T, worst_g))
        logger.debug(f"T={T}: omega={omega[-1][1]:.3e} omega1={worst_f:.3e} omega2={worst_g:.3e}")

    moduli = (fit_decay_modulus(omega), fit_decay_modulus(omega1), fit_decay_modulus(omega2))
    for label, modulus in zip(("omega", "omega1", "omega2"), moduli):
        if not modulus.vanishing and modulus.envelope[0] > 0:
            logger.warning(f"{system.name}: {label} does not vanish on the T grid")

    return AveragedSystem(A_bar=A_bar, F_bar=F_bar, G_bar=G_bar, moduli=moduli, source=system.name)


def _diffusion_gap_over_phases(
    G: StateField, G_bar: StateField, x: np.ndarray, T: float, phases: np.ndarray
) -> float:
    return max(average_diffusion_gap(G, G_bar, x, T, float(t)) for t in phases)
