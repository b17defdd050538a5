"""Path simulation: Euler-Maruyama, bounded solutions, convolutions and couplings."""

from bogolyubov.sde.convolution import (
    ConvolutionSup,
    exponential_convolution_bound,
    exponential_convolution_sup,
    stochastic_convolution_linear,
)
from bogolyubov.sde.coupling import (
    OracleMode,
    SecondMomentCurve,
    coupled_deviation,
    coupled_second_moment,
    default_burn_in,
)
from bogolyubov.sde.diagnostics import (
    ContinuityModulus,
    RunningSupMoment,
    continuity_modulus,
    rescale_time,
    running_sup_moment,
    unrescale_time,
)
from bogolyubov.sde.ensemble import PathEnsemble, SolutionStatistics
from bogolyubov.sde.simulate import bounded_solution, equation_for, simulate_em
from bogolyubov.sde.stationary import StationaryMode, sample_averaged_stationary

__all__ = [
    "ContinuityModulus",
    "ConvolutionSup",
    "OracleMode",
    "PathEnsemble",
    "RunningSupMoment",
    "SecondMomentCurve",
    "SolutionStatistics",
    "StationaryMode",
    "bounded_solution",
    "continuity_modulus",
    "coupled_deviation",
    "coupled_second_moment",
    "default_burn_in",
    "equation_for",
    "exponential_convolution_bound",
    "exponential_convolution_sup",
    "rescale_time",
    "running_sup_moment",
    "sample_averaged_stationary",
    "simulate_em",
    "stochastic_convolution_linear",
    "unrescale_time",
]
