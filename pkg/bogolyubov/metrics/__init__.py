"""Bounded-Lipschitz distances between empirical laws and the sweeps built on them."""

from bogolyubov.metrics.beta import BetaEstimate, BetaMethod, beta_distance
from bogolyubov.metrics.comparability import (
    ComparabilityReport,
    ProbeRow,
    comparability_probe,
    fit_domination,
)
from bogolyubov.metrics.law import EmpiricalLaw, LawSource
from bogolyubov.metrics.sweep import (
    LawSweepCell,
    LawSweepRow,
    LawSweepTable,
    NoiseFloor,
    PeriodicityProfile,
    law_convergence_sweep,
    marginal_noise_floors,
    noise_floor,
    noise_floor_estimate,
    periodicity_profile,
)

__all__ = [
    "BetaEstimate",
    "BetaMethod",
    "ComparabilityReport",
    "EmpiricalLaw",
    "LawSource",
    "LawSweepCell",
    "LawSweepRow",
    "LawSweepTable",
    "NoiseFloor",
    "PeriodicityProfile",
    "ProbeRow",
    "beta_distance",
    "comparability_probe",
    "fit_domination",
    "law_convergence_sweep",
    "marginal_noise_floors",
    "noise_floor",
    "noise_floor_estimate",
    "periodicity_profile",
]
