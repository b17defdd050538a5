"""Averaged systems, decay moduli and contraction conditions."""

from bogolyubov.averaging.contraction import (
    AVERAGING,
    BOUNDED_SOLUTION,
    STRONG_COMPATIBILITY,
    ContractionReport,
    InequalityCheck,
    verify_contraction,
)
from bogolyubov.averaging.engine import (
    IntegralConvergenceRow,
    average_diffusion_gap,
    average_drift,
    average_operator,
    integral_convergence,
)
from bogolyubov.averaging.moduli import (
    DecayModulus,
    LemmaProfileRow,
    fit_decay_modulus,
    lemma_profile,
)
from bogolyubov.averaging.system import AveragedSystem, average_system

__all__ = [
    "AVERAGING",
    "AveragedSystem",
    "BOUNDED_SOLUTION",
    "ContractionReport",
    "DecayModulus",
    "InequalityCheck",
    "IntegralConvergenceRow",
    "LemmaProfileRow",
    "STRONG_COMPATIBILITY",
    "average_diffusion_gap",
    "average_drift",
    "average_operator",
    "average_system",
    "fit_decay_modulus",
    "integral_convergence",
    "lemma_profile",
    "verify_contraction",
]
