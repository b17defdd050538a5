"""
Shared pytest fixtures for bogolyubov tests.

The coefficient systems here are the small analytic benchmarks whose bounded
solutions, averages and dichotomy constants are known in closed form.
"""

import numpy as np
import pytest

from bogolyubov.coefficients import (
    Certificate,
    CoefficientSystem,
    NonlinearTerm,
    Nonlinearity,
    RecurrenceClass,
    StateField,
)
from tests.builders import SQRT2, linear_field, make_linear_scalar, make_ou, scalar_operator, scalar_series


@pytest.fixture
def linear_scalar() -> CoefficientSystem:
    """a(t) = -1 + 0.5 cos t, f(t) = cos(sqrt(2) t), g = 1."""
    return make_linear_scalar()


@pytest.fixture
def ou_system() -> CoefficientSystem:
    """dX = -X dt + dW; averaged and rescaled equations coincide."""
    return make_ou()


@pytest.fixture
def semilinear_scalar() -> CoefficientSystem:
    """a = -1, F(t, x) = cos(sqrt(2) t) tanh(x), G = 0.5 with certificate (M=0.5, L=1)."""
    F = StateField(
        offset=scalar_series(0.0),
        certificate=Certificate(M=0.5, L=1.0),
        terms=(NonlinearTerm(Nonlinearity.TANH, scalar_series(0.0, {SQRT2: 1.0})),),
    )
    return CoefficientSystem(
        A=scalar_operator(-1.0),
        F=F,
        G=linear_field(scalar_series(0.5)),
        recurrence=RecurrenceClass.quasi_periodic(SQRT2),
        name="semilinear_scalar",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
