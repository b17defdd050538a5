"""bogolyubov: numerical checks of averaging on the whole axis for semilinear SDEs
with recurrent coefficients."""

__version__ = "0.1.0"

# Coefficients
from bogolyubov.coefficients import (
    CoefficientSystem,
    Harmonic,
    RecurrenceClass,
    StateField,
    TrigSeries,
    bebutov_distance,
    find_almost_periods,
    verify_certificates,
)

# Averaging and linear flows
from bogolyubov.averaging import AveragedSystem, average_system, verify_contraction
from bogolyubov.flow import fit_dichotomy, rescaled_gap, sweep_dichotomy

# Simulation and laws
from bogolyubov.core import BrownianTag, EquationTag
from bogolyubov.metrics import beta_distance, comparability_probe, law_convergence_sweep
from bogolyubov.sde import (
    PathEnsemble,
    bounded_solution,
    coupled_deviation,
    sample_averaged_stationary,
    simulate_em,
    stochastic_convolution_linear,
)

# Exceptions
from bogolyubov.exceptions import (
    BogolyubovError,
    CertificateViolationError,
    ConfigError,
    DivergenceError,
    HurwitzError,
    InvalidArgumentError,
    NotUniformlyStableError,
    NumericalError,
    PreconditionError,
    RefuseToRunError,
)

__all__ = [
    "__version__",
    "AveragedSystem",
    "BogolyubovError",
    "BrownianTag",
    "CertificateViolationError",
    "CoefficientSystem",
    "ConfigError",
    "DivergenceError",
    "EquationTag",
    "Harmonic",
    "HurwitzError",
    "InvalidArgumentError",
    "NotUniformlyStableError",
    "NumericalError",
    "PathEnsemble",
    "PreconditionError",
    "RecurrenceClass",
    "RefuseToRunError",
    "StateField",
    "TrigSeries",
    "average_system",
    "bebutov_distance",
    "beta_distance",
    "bounded_solution",
    "comparability_probe",
    "coupled_deviation",
    "find_almost_periods",
    "fit_dichotomy",
    "law_convergence_sweep",
    "rescaled_gap",
    "sample_averaged_stationary",
    "simulate_em",
    "stochastic_convolution_linear",
    "sweep_dichotomy",
    "verify_certificates",
    "verify_contraction",
]
