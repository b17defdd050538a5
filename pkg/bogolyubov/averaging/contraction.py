"""Contraction inequalities and the invariant-ball radius."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Optional

from bogolyubov.exceptions import InvalidArgumentError, RefuseToRunError

logger = logging.getLogger(__name__)

BOUNDED_SOLUTION = "L < nu/(N*sqrt(2+nu))"
STRONG_COMPATIBILITY = "L < nu/(2*N*sqrt(1+nu))"
AVERAGING = "L < nu/(sqrt(3)*N*sqrt(2+nu))"

# Memory left by the zero initial state after burn-in.
DEFAULT_MEMORY = 0.01


@dataclass(frozen=True)
class InequalityCheck:
    """One strict inequality L < bound."""

    name: str
    bound: float
    lipschitz: float

    @property
    def passed(self) -> bool:
        return self.lipschitz < self.bound

    @property
    def margin(self) -> float:
        return self.bound - self.lipschitz


@dataclass(frozen=True)
class ContractionReport:
    """Smallness conditions for a dichotomy certificate and (M, L).

    Attributes:
        N: Dichotomy constant
        nu: Dichotomy exponent
        M: Bound of F, G at x = 0
        L: Lipschitz constant of F, G
        inequalities: The three inequality checks, weakest first
        radius: r = N M sqrt(2+nu) / (nu - N L sqrt(2+nu)), None when undefined
    """

    N: float
    nu: float
    M: float
    L: float
    inequalities: tuple[InequalityCheck, ...]
    radius: Optional[float]

    def check(self, name: str) -> InequalityCheck:
        for inequality in self.inequalities:
            if inequality.name == name:
                return inequality
        raise KeyError(name)

    @property
    def has_bounded_solution(self) -> bool:
        return self.check(BOUNDED_SOLUTION).passed

    @property
    def all_passed(self) -> bool:
        return all(i.passed for i in self.inequalities)

    def require(self, name: str = BOUNDED_SOLUTION) -> None:
        """Raise RefuseToRunError unless the named inequality holds."""
        inequality = self.check(name)
        if not inequality.passed:
            raise RefuseToRunError(
                f"contraction inequality {name} fails: L={inequality.lipschitz:.6g} "
                f">= {inequality.bound:.6g} (N={self.N:.6g}, nu={self.nu:.6g})",
                inequality=name,
            )

    def memory_horizon(self, memory: float = DEFAULT_MEMORY) -> float:
        """Burn-in T_b with N exp(-nu T_b) = memory, i.e. ln(N/memory)/nu."""
        return math.log(self.N / memory) / self.nu

    def truncation_bias(self, burn_in: float) -> float:
        """Certified bias N exp(-nu burn_in) r of a zero start burn_in ago."""
        if self.radius is None:
            return math.inf
        return self.N * math.exp(-self.nu * burn_in) * self.radius

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.N,
            "nu": self.nu,
            "M": self.M,
            "L": self.L,
            "radius": self.radius,
            "inequalities": [
                {"name": i.name, "bound": i.bound, "L": i.lipschitz, "passed": i.passed}
                for i in self.inequalities
            ],
        }


def verify_contraction(cert: Any, M: float, L: float) -> ContractionReport:
    """Evaluate the three contraction inequalities and the radius r.

    Args:
        cert: Anything carrying dichotomy constants ``N`` and ``nu``
        M: Bound of F, G at x = 0
        L: Lipschitz constant of F, G

    Raises:
        InvalidArgumentError: If N < 1, nu <= 0, M < 0 or L < 0.
    """
    N, nu = float(cert.N), float(cert.nu)
    M, L = float(M), float(L)
    if not (math.isfinite(N) and N >= 1.0):
        raise InvalidArgumentError(f"N must be >= 1, got {N}", argument="N")
    if not (math.isfinite(nu) and nu > 0.0):
        raise InvalidArgumentError(f"nu must be positive, got {nu}", argument="nu")
    if not (math.isfinite(M) and M >= 0.0) or not (math.isfinite(L) and L >= 0.0):
        raise InvalidArgumentError(f"M and L must be non-negative, got M={M}, L={L}")

    root2 = math.sqrt(2.0 + nu)
    inequalities = (
        InequalityCheck(BOUNDED_SOLUTION, nu / (N * root2), L),
        InequalityCheck(STRONG_COMPATIBILITY, nu / (2.0 * N * math.sqrt(1.0 + nu)), L),
        InequalityCheck(AVERAGING, nu / (math.sqrt(3.0) * N * root2), L),
    )
    denominator = nu - N * L * root2
    radius = N * M * root2 / denominator if inequalities[0].passed and denominator > 0 else None
    report = ContractionReport(N=N, nu=nu, M=M, L=L, inequalities=inequalities, radius=radius)
    for inequality in inequalities:
        logger.debug(
            f"{inequality.name}: L={L:.6g} vs {inequality.bound:.6g} -> "
            f"{'pass' if inequality.passed else 'fail'}"
        )
    return report
