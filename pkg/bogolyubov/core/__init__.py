"""Core value types and dense linear algebra."""

from bogolyubov.core.linalg import (
    HurwitzReport,
    hurwitz_check,
    lyapunov_stationary_cov,
    mat_exp,
    mat_exp_stack,
    operator_norm,
    psd_sqrt,
    stationary_mean,
)
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import (
    DIVERGENCE_BOUND,
    BrownianTag,
    EquationKind,
    EquationTag,
    as_finite_scalar,
    as_operator,
    as_state_vector,
    uniform_step,
)

__all__ = [
    "DIVERGENCE_BOUND",
    "BrownianTag",
    "EquationKind",
    "EquationTag",
    "HurwitzReport",
    "as_finite_scalar",
    "as_operator",
    "as_state_vector",
    "hurwitz_check",
    "lyapunov_stationary_cov",
    "mat_exp",
    "mat_exp_stack",
    "operator_norm",
    "ordered_map",
    "psd_sqrt",
    "stationary_mean",
    "uniform_step",
]
