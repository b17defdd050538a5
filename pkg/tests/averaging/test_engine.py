"""Tests for window averages, decay moduli and the averaged system."""

import math

import numpy as np
import pytest

from bogolyubov.averaging import (
    average_diffusion_gap,
    average_drift,
    average_operator,
    average_system,
    fit_decay_modulus,
    integral_convergence,
    lemma_profile,
)
from bogolyubov.coefficients import Certificate, StateField
from bogolyubov.exceptions import InvalidArgumentError
from tests.builders import linear_field, scalar_operator, scalar_series


# =============================================================================
# Window averages
# =============================================================================


class TestWindowAverages:
    """Tests for average_operator, average_drift and average_diffusion_gap."""

    def test_operator_full_period(self):
        """Averaging over whole periods returns the constant part."""
        A = scalar_operator(-1.0, {1.0: 0.5})
        assert average_operator(A, 4 * math.pi, 1.234)[0, 0] == pytest.approx(-1.0, abs=1e-12)

    def test_operator_error_bound(self):
        """|average - A_0| <= 2 |A_1| / T on every phase."""
        A = scalar_operator(-1.0, {1.0: 0.5})
        phases = np.linspace(-100.0, 100.0, 41)
        for T in (0.5, 5.0, 50.0):
            errors = np.abs(average_operator(A, T, phases)[:, 0, 0] + 1.0)
            assert errors.max() <= 2 * 0.5 / T + 1e-12

    def test_non_positive_window(self):
        """T <= 0 raises InvalidArgumentError."""
        with pytest.raises(InvalidArgumentError):
            average_operator(scalar_operator(-1.0), -1.0, 0.0)

    def test_drift_average(self, semilinear_scalar):
        """The drift average over sqrt(2)-periods vanishes."""
        period = 2 * math.pi / math.sqrt(2.0)
        value = average_drift(semilinear_scalar.F, [0.8], 5 * period, 0.0)
        assert value[0] == pytest.approx(0.0, abs=1e-12)

    def test_drift_wrong_dimension(self, semilinear_scalar):
        """The state must match the field dimension."""
        with pytest.raises(InvalidArgumentError):
            average_drift(semilinear_scalar.F, [0.8, 0.1], 1.0, 0.0)

    def test_oscillating_diffusion_gap_persists(self):
        """G = 1 + 0.5 cos t keeps a mean-square gap of 1/8 to its average."""
        G = linear_field(scalar_series(1.0, {1.0: 0.5}))
        gap = average_diffusion_gap(G, G.averaged(), [0.0], 20 * math.pi, 0.0)
        assert gap == pytest.approx(0.125, rel=1e-8)

    def test_constant_diffusion_gap(self):
        """A constant diffusion has zero gap to itself."""
        G = StateField.constant([0.7])
        assert average_diffusion_gap(G, G, [1.0], 10.0, 0.0) == 0.0

    def test_callable_target(self):
        """The averaged diffusion may be a plain callable of x."""
        G = StateField.constant([0.7])
        gap = average_diffusion_gap(G, lambda x: np.array([0.5]), [1.0], 10.0, 0.0)
        assert gap == pytest.approx(0.04)


# =============================================================================
# Convergence probes
# =============================================================================


class TestConvergenceProbes:
    """Tests for integral_convergence and lemma_profile."""

    def test_integral_convergence_scales_with_eps(self):
        """Integrals of cos(t/eps) are bounded by 2 eps."""
        rows = integral_convergence(scalar_series(0.0, {1.0: 1.0}), [0.1, 0.01], l=2.0, n_lengths=41)
        for row in rows:
            assert row.sup_integral <= 2 * row.eps + 1e-12
            assert row.uniform_bound == pytest.approx(1.0)
        assert rows[1].sup_integral < rows[0].sup_integral

    def test_lemma_profile_below_majorant(self):
        """sup tau psi(tau/eps) stays below its majorant and shrinks."""
        rows = lemma_profile(lambda u: 1.0 / (1.0 + u), 1.0, [0.1, 0.01, 0.001])
        for row in rows:
            assert row.value <= row.majorant + 1e-12
        values = [row.value for row in rows]
        assert values == sorted(values, reverse=True)

    def test_lemma_profile_kappa_range(self):
        """kappa must lie in (0, 1)."""
        with pytest.raises(InvalidArgumentError):
            lemma_profile(lambda u: 1.0 / (1.0 + u), 1.0, [0.1], kappa=1.5)


# =============================================================================
# Decay moduli
# =============================================================================


class TestDecayModulus:
    """Tests for fit_decay_modulus."""

    def test_inverse_samples(self):
        """1/T samples are their own envelope and vanish."""
        modulus = fit_decay_modulus([(1.0, 1.0), (10.0, 0.1), (100.0, 0.01)])
        np.testing.assert_allclose(modulus.envelope, [1.0, 0.1, 0.01])
        assert modulus.vanishing

    def test_envelope_is_non_increasing_majorant(self):
        """A bump is carried back to earlier T."""
        modulus = fit_decay_modulus([(1.0, 0.1), (2.0, 0.5), (3.0, 0.05)])
        np.testing.assert_allclose(modulus.envelope, [0.5, 0.5, 0.05])
        assert not modulus.vanishing

    def test_step_evaluation(self):
        """The modulus is a right-continuous step function."""
        modulus = fit_decay_modulus([(1.0, 1.0), (10.0, 0.1), (100.0, 0.01)])
        assert modulus(0.5) == 1.0
        assert modulus(5.0) == 1.0
        assert modulus(10.0) == pytest.approx(0.1)
        assert modulus(1e6) == pytest.approx(0.01)

    def test_samples_round_trip(self):
        """samples lists the (T, value) pairs."""
        modulus = fit_decay_modulus([(1.0, 1.0), (2.0, 0.5)])
        assert modulus.samples == [(1.0, 1.0), (2.0, 0.5)]

    @pytest.mark.parametrize(
        "samples",
        [
            [(1.0, 1.0)],
            [(2.0, 1.0), (1.0, 0.5)],
            [(1.0, -1.0), (2.0, 0.5)],
            [(1.0, float("nan")), (2.0, 0.5)],
        ],
    )
    def test_invalid_samples(self, samples):
        """Short, unordered, negative or non-finite samples are rejected."""
        with pytest.raises(InvalidArgumentError):
            fit_decay_modulus(samples)


# =============================================================================
# Averaged system
# =============================================================================


class TestAverageSystem:
    """Tests for average_system."""

    def test_linear_benchmark(self, linear_scalar):
        """Means of a, f and g and vanishing moduli."""
        averaged = average_system(linear_scalar, seed=1)
        A_bar, f_bar, g_bar = averaged.linear_parts()
        np.testing.assert_allclose(A_bar, [[-1.0]])
        np.testing.assert_allclose(f_bar, [0.0], atol=1e-15)
        np.testing.assert_allclose(g_bar, [1.0])
        assert averaged.is_hurwitz
        assert all(m.vanishing for m in averaged.moduli)

    def test_omega_bounded_by_inverse_window(self, linear_scalar):
        """omega(T) <= 2 * 0.5 / T for a(t) = -1 + 0.5 cos t."""
        omega = average_system(linear_scalar, seed=1).moduli[0]
        for T, value in omega.samples:
            assert value <= 1.0 / T + 1e-12

    def test_semilinear_inherits_certificate(self, semilinear_scalar):
        """F_bar keeps the certificate of F."""
        averaged = average_system(semilinear_scalar, seed=2)
        assert averaged.F_bar.certificate == Certificate(M=0.5, L=1.0)
        assert not averaged.is_linear

    def test_semilinear_has_no_linear_parts(self, semilinear_scalar):
        """linear_parts refuses a semilinear average."""
        with pytest.raises(InvalidArgumentError):
            average_system(semilinear_scalar, seed=2).linear_parts()

    def test_as_system_is_autonomous(self, linear_scalar):
        """The averaged equation is a stationary coefficient system."""
        system = average_system(linear_scalar).as_system()
        assert system.is_autonomous
        assert system.check_recurrence() == []

    def test_to_dict(self, linear_scalar):
        """Serialized averages carry all three moduli."""
        data = average_system(linear_scalar).to_dict()
        assert set(data) == {"source", "A_bar", "omega", "omega1", "omega2"}
        assert data["A_bar"] == [[-1.0]]
