"""Monte Carlo verification of the (M, L) certificates of a coefficient system."""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from bogolyubov.coefficients.fields import StateField
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.exceptions import CertificateViolationError, InvalidArgumentError

logger = logging.getLogger(__name__)

CERTIFICATE_RTOL = 1e-9


def _ratio(value: np.ndarray, bound: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = value / bound
    ratio = np.where(bound > 0, ratio, np.where(value > 0, np.inf, 0.0))
    return ratio


@dataclass
class FieldCheck:
    """Worst sampled ratios of one field against its certificate.

    Attributes:
        name: Field name ("F" or "G")
        certified_M: Certified bound at x = 0
        certified_L: Certified Lipschitz constant
        worst_M_ratio: max |field(t, 0)| / M over samples
        worst_L_ratio: max |field(t, x1) - field(t, x2)| / (L |x1 - x2|)
        witness_M: Sample attaining worst_M_ratio
        witness_L: Sample attaining worst_L_ratio
    """

    name: str
    certified_M: float
    certified_L: float
    worst_M_ratio: float
    worst_L_ratio: float
    witness_M: dict[str, Any] = field(default_factory=dict)
    witness_L: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        limit = 1.0 + CERTIFICATE_RTOL
        return self.worst_M_ratio <= limit and self.worst_L_ratio <= limit


@dataclass
class CertificateReport:
    """Result of :func:`verify_certificates`."""

    checks: list[FieldCheck]
    sample_count: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def worst_ratio(self) -> float:
        return max(max(c.worst_M_ratio, c.worst_L_ratio) for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "M": c.certified_M,
                    "L": c.certified_L,
                    "worst_M_ratio": c.worst_M_ratio,
                    "worst_L_ratio": c.worst_L_ratio,
                }
                for c in self.checks
            ],
        }


def draw_samples(
    rng: np.random.Generator, count: int, dimension: int, time_range: float, state_scale: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random (t, x1, x2) over wide magnitudes; half the pairs are close together."""
    t = rng.uniform(-time_range, time_range, size=count)
    magnitude = 10.0 ** rng.uniform(-2.0, np.log10(state_scale), size=(count, 1))
    x1 = rng.standard_normal((count, dimension)) * magnitude
    x2 = rng.standard_normal((count, dimension)) * magnitude
    close = np.arange(count) % 2 == 1
    x2[close] = x1[close] + 1e-3 * rng.standard_normal((int(close.sum()), dimension))
    return t, x1, x2


def check_field(
    field_: StateField, name: str, t: np.ndarray, x1: np.ndarray, x2: np.ndarray
) -> FieldCheck:
    """Compare one field against its certificate on given samples."""
    zero = np.zeros_like(x1)
    at_zero = np.linalg.norm(field_(t, zero), axis=1)
    m_ratio = _ratio(at_zero, np.full_like(at_zero, field_.M))

    diff = np.linalg.norm(field_(t, x1) - field_(t, x2), axis=1)
    gap = np.linalg.norm(x1 - x2, axis=1)
    l_ratio = _ratio(diff, field_.L * gap)
    l_ratio = np.where(gap > 0, l_ratio, 0.0)

    i_m = int(np.argmax(m_ratio))
    i_l = int(np.argmax(l_ratio))
    return FieldCheck(
        name=name,
        certified_M=field_.M,
        certified_L=field_.L,
        worst_M_ratio=float(m_ratio[i_m]),
        worst_L_ratio=float(l_ratio[i_l]),
        witness_M={"t": float(t[i_m]), "value": float(at_zero[i_m])},
        witness_L={
            "t": float(t[i_l]),
            "x1": x1[i_l].tolist(),
            "x2": x2[i_l].tolist(),
            "ratio": float(l_ratio[i_l]),
        },
    )


def verify_certificates(
    system: CoefficientSystem,
    sample_count: int,
    seed: int,
    time_range: float = 1e3,
    state_scale: float = 10.0,
    raise_on_violation: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> CertificateReport:
    """Monte Carlo check of |F(t,0)|, |G(t,0)| <= M and the Lipschitz bound L.

    Raises:
        InvalidArgumentError: If sample_count < 1.
        CertificateViolationError: If a sample beats a certificate by more
            than 1e-9 relative; the error names the witness (t, x1, x2).
    """
    if sample_count < 1:
        raise InvalidArgumentError(f"sample_count must be >= 1, got {sample_count}")
    rng = rng or np.random.default_rng(seed)
    t, x1, x2 = draw_samples(rng, sample_count, system.dimension, time_range, state_scale)
    checks = [check_field(system.F, "F", t, x1, x2), check_field(system.G, "G", t, x1, x2)]
    report = CertificateReport(checks=checks, sample_count=sample_count, seed=seed)

    for check in checks:
        logger.debug(
            f"{system.name}.{check.name}: worst M ratio {check.worst_M_ratio:.4f}, "
            f"worst L ratio {check.worst_L_ratio:.4f}"
        )
        if check.passed or not raise_on_violation:
            continue
        if check.worst_M_ratio > 1.0 + CERTIFICATE_RTOL:
            witness = {"field": check.name, "kind": "M", **check.witness_M, "ratio": check.worst_M_ratio}
            raise CertificateViolationError(
                f"{check.name}(t, 0) exceeds M={check.certified_M} by ratio "
                f"{check.worst_M_ratio:.6g} at t={witness['t']}",
                witness=witness,
            )
        witness = {"field": check.name, "kind": "L", **check.witness_L}
        raise CertificateViolationError(
            f"{check.name} breaks Lipschitz constant L={check.certified_L} with ratio "
            f"{check.worst_L_ratio:.6g} at t={witness['t']}, x1={witness['x1']}, x2={witness['x2']}",
            witness=witness,
        )
    return report
