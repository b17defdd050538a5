"""Tests for state fields, coefficient systems and recurrence classes."""

import math

import numpy as np
import pytest

from bogolyubov.coefficients import (
    Certificate,
    CoefficientSystem,
    NonlinearTerm,
    Nonlinearity,
    RecurrenceClass,
    RecurrenceTag,
    ShiftedFunction,
    StateField,
    TrigSeries,
    evaluate,
    integer_relation,
    shift,
)
from bogolyubov.exceptions import InvalidArgumentError
from tests.builders import SQRT2, linear_field, scalar_operator, scalar_series


# =============================================================================
# Fields
# =============================================================================


class TestNonlinearity:
    """Tests for the catalog nonlinearities."""

    @pytest.mark.parametrize("kind", list(Nonlinearity))
    def test_zero_at_origin(self, kind):
        """Every catalog nonlinearity vanishes at 0."""
        assert kind.apply(np.array([0.0]))[0] == 0.0

    def test_bounded_quadratic(self):
        """x / (1 + x^2) at x = 1 is 1/2."""
        assert Nonlinearity.BOUNDED_QUADRATIC.apply(np.array([1.0]))[0] == pytest.approx(0.5)

    @pytest.mark.parametrize("kind", list(Nonlinearity))
    def test_one_lipschitz(self, kind):
        """Sampled difference quotients stay below 1."""
        x = np.linspace(-5.0, 5.0, 2001)
        slopes = np.abs(np.diff(kind.apply(x))) / np.diff(x)
        assert slopes.max() <= kind.lipschitz + 1e-12


class TestStateField:
    """Tests for StateField."""

    def test_tanh_modulated_value(self, semilinear_scalar):
        """cos(sqrt(2) * 0) * tanh(0.5)."""
        assert semilinear_scalar.F(0.0, np.array([0.5]))[0] == pytest.approx(0.46211715726, abs=1e-10)

    def test_batch_evaluation(self, semilinear_scalar):
        """Paired (t_i, x_i) evaluation matches one-by-one calls."""
        t = np.array([0.0, 1.0, 2.0])
        x = np.array([[0.5], [-1.0], [3.0]])
        batch = semilinear_scalar.F(t, x)
        for k in range(3):
            np.testing.assert_allclose(batch[k], semilinear_scalar.F(t[k], x[k]))

    def test_linear_part(self):
        """A linear part acts as a matrix product."""
        field = StateField(
            offset=TrigSeries.constant([1.0, 0.0]),
            certificate=Certificate(M=1.0, L=2.0),
            linear=TrigSeries.constant([[0.0, 2.0], [0.0, 0.0]]),
        )
        np.testing.assert_allclose(field(0.0, np.array([0.0, 1.0])), [3.0, 0.0])

    def test_constant_default_certificate(self):
        """StateField.constant sets M = |value| and L = 0."""
        field = StateField.constant([3.0, 4.0])
        assert field.M == 5.0
        assert field.L == 0.0
        assert field.is_state_independent

    def test_analytic_bounds(self, semilinear_scalar):
        """Closed-form majorants of cos(sqrt(2) t) tanh(x)."""
        bounds = semilinear_scalar.F.analytic_bounds()
        assert bounds.M == 0.0
        assert bounds.L == pytest.approx(1.0)

    def test_averaged_kills_zero_mean_profiles(self, semilinear_scalar):
        """The time average of cos(sqrt(2) t) tanh(x) vanishes."""
        averaged = semilinear_scalar.F.averaged()
        assert averaged(5.0, np.array([2.0]))[0] == pytest.approx(0.0, abs=1e-15)
        assert averaged.certificate == semilinear_scalar.F.certificate

    def test_window_average_approaches_average(self, semilinear_scalar):
        """Long windows approach the averaged field."""
        x = np.array([1.5])
        value = semilinear_scalar.F.window_average(x, 1000.0, 0.0)
        assert abs(value[0]) <= 2.0 / (SQRT2 * 1000.0)

    def test_profile_shape_checked(self):
        """Term profiles must match the field dimension."""
        with pytest.raises(InvalidArgumentError):
            StateField(
                offset=TrigSeries.constant([0.0, 0.0]),
                certificate=Certificate(M=0.0, L=1.0),
                terms=(NonlinearTerm(Nonlinearity.SIN, TrigSeries.constant([1.0])),),
            )

    def test_negative_certificate_rejected(self):
        """Certificate constants are non-negative."""
        with pytest.raises(InvalidArgumentError):
            Certificate(M=-1.0, L=0.0)


# =============================================================================
# Systems
# =============================================================================


class TestCoefficientSystem:
    """Tests for CoefficientSystem."""

    def test_evaluate(self, linear_scalar):
        """evaluate returns (A(t), F(t, x), G(t, x))."""
        a, f, g = evaluate(linear_scalar, 0.0, [0.0])
        assert a[0, 0] == pytest.approx(-0.5)
        assert f[0] == pytest.approx(1.0)
        assert g[0] == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        """A must be d x d for the field dimension d."""
        with pytest.raises(InvalidArgumentError):
            CoefficientSystem(
                A=TrigSeries.constant(-np.eye(2)),
                F=StateField.constant([0.0]),
                G=StateField.constant([1.0]),
                recurrence=RecurrenceClass.stationary(),
            )

    def test_linear_flags(self, linear_scalar, semilinear_scalar, ou_system):
        """Linearity and autonomy are read off the coefficients."""
        assert linear_scalar.is_linear
        assert not linear_scalar.is_autonomous
        assert not semilinear_scalar.is_linear
        assert ou_system.is_autonomous

    def test_linear_parts_rejects_semilinear(self, semilinear_scalar):
        """linear_parts needs state-independent F and G."""
        with pytest.raises(InvalidArgumentError):
            semilinear_scalar.linear_parts()

    def test_system_constants(self, semilinear_scalar):
        """M and L are the maxima over F and G."""
        assert semilinear_scalar.M == 0.5
        assert semilinear_scalar.L == 1.0

    def test_periodic_shift(self):
        """A 2*pi-periodic system is invariant under a 2*pi shift."""
        system = CoefficientSystem(
            A=scalar_operator(-1.0, {1.0: 0.5}),
            F=linear_field(scalar_series(0.0, {2.0: 1.0})),
            G=linear_field(scalar_series(1.0)),
            recurrence=RecurrenceClass.periodic(2 * math.pi),
        )
        t = np.linspace(-3.0, 3.0, 61)
        np.testing.assert_allclose(
            system.shift(2 * math.pi).signature(t), system.signature(t), atol=1e-12
        )

    def test_rescale_speeds_up(self, linear_scalar):
        """The rescaled operator at t equals the original at t / eps."""
        np.testing.assert_allclose(linear_scalar.rescale(0.1).A(0.2), linear_scalar.A(2.0), rtol=1e-12)

    def test_signature_width(self, linear_scalar):
        """Signature stacks A and (F, G) at 0 and +-e_i."""
        assert linear_scalar.signature(np.array([0.0, 1.0])).shape == (2, 1 + 3 * 2)

    def test_consistent_recurrence(self, linear_scalar):
        """The benchmark fits its declared quasi-periodic class."""
        assert linear_scalar.check_recurrence() == []

    def test_stationary_conflict(self, linear_scalar):
        """Harmonics contradict a stationary claim."""
        system = CoefficientSystem(
            A=linear_scalar.A,
            F=linear_scalar.F,
            G=linear_scalar.G,
            recurrence=RecurrenceClass.stationary(),
        )
        assert system.check_recurrence()


class TestShift:
    """Tests for the module-level shift helper."""

    def test_plain_callable(self):
        """Plain callables are wrapped and shifts accumulate."""
        shifted = shift(np.cos, 1.0)
        assert isinstance(shifted, ShiftedFunction)
        assert shifted.shift(0.5)(0.0) == pytest.approx(math.cos(1.5))

    def test_series_delegates(self):
        """Series shift by phase bookkeeping."""
        series = scalar_series(0.0, {1.0: 1.0})
        assert shift(series, 1.0)(0.0)[0] == pytest.approx(math.cos(1.0))

    def test_unshiftable(self):
        """Non-callables are rejected."""
        with pytest.raises(InvalidArgumentError):
            shift(3.0, 1.0)


# =============================================================================
# Recurrence classes
# =============================================================================


class TestRecurrenceClass:
    """Tests for RecurrenceClass."""

    def test_rational_relation(self):
        """2 and 3 are rationally dependent."""
        assert integer_relation(2.0, 3.0) == (2, 3)

    def test_irrational_ratio(self):
        """1 and sqrt(2) admit no small integer relation."""
        assert integer_relation(1.0, SQRT2) is None

    def test_dependent_basis_rejected(self):
        """A quasi-periodic basis must be rationally independent."""
        with pytest.raises(InvalidArgumentError):
            RecurrenceClass.quasi_periodic(1.0, 2.0)

    def test_periodic_needs_period(self):
        """A periodic class needs a positive period."""
        with pytest.raises(InvalidArgumentError):
            RecurrenceClass(RecurrenceTag.PERIODIC)

    def test_periodic_conflicts(self):
        """Frequencies off the 2*pi/p lattice are reported."""
        periodic = RecurrenceClass.periodic(2 * math.pi)
        assert periodic.conflicts([1.0, 3.0], has_levitan=False, has_decay=False) == []
        assert len(periodic.conflicts([1.5], has_levitan=False, has_decay=False)) == 1

    def test_levitan_not_bohr(self):
        """Levitan terms are not Bohr almost periodic."""
        bohr = RecurrenceClass(RecurrenceTag.BOHR_ALMOST_PERIODIC)
        assert bohr.conflicts([], has_levitan=True, has_decay=False)
        assert RecurrenceClass.levitan().conflicts([], has_levitan=True, has_decay=False) == []

    def test_decay_is_not_a_conflict(self):
        """Transients never falsify a class claim."""
        assert RecurrenceClass.stationary().conflicts([], has_levitan=False, has_decay=True) == []

    def test_to_dict(self):
        """Serialized form lists the frequency basis."""
        data = RecurrenceClass.quasi_periodic(1.0, SQRT2).to_dict()
        assert data == {"tag": "quasi_periodic", "period": None, "frequencies": [1.0, SQRT2]}
