"""Tests for stochastic and deterministic exponential convolutions."""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from bogolyubov.averaging import verify_contraction
from bogolyubov.core import EquationKind, EquationTag
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.sde import (
    bounded_solution,
    exponential_convolution_bound,
    exponential_convolution_sup,
    stochastic_convolution_linear,
)
from tests.builders import SQRT2, scalar_series


class TestStochasticConvolution:
    """Tests for stochastic_convolution_linear."""

    def test_deterministic_amplitude(self):
        """x' = -x + cos(sqrt(2) t) has a bounded solution of amplitude 1/sqrt(3)."""
        period = 2 * math.pi / SQRT2
        t_grid = np.linspace(0.0, period, 201)
        ensemble = stochastic_convolution_linear(
            [[-1.0]], scalar_series(0.0, {SQRT2: 1.0}), [0.0], t_grid, burn_in=30.0, dt=1e-3, n_paths=1, seed=0
        )
        assert np.abs(ensemble.paths[0, :, 0]).max() == pytest.approx(1.0 / math.sqrt(3.0), abs=5e-3)

    def test_default_tags(self):
        """Constant inputs give the averaged tag, time-varying ones rescaled(1)."""
        constant = stochastic_convolution_linear([[-1.0]], [0.0], [1.0], [0.0, 1.0], 5.0, 0.1, 2, seed=0)
        varying = stochastic_convolution_linear(
            [[-1.0]], scalar_series(0.0, {1.0: 1.0}), [1.0], [0.0, 1.0], 5.0, 0.1, 2, seed=0
        )
        assert constant.tag.kind == EquationKind.AVERAGED
        assert varying.tag == EquationTag.rescaled(1.0)

    def test_matches_em_path_by_path(self, ou_system):
        """With shared increments the convolution and EM paths agree to O(dt)."""
        contraction = verify_contraction(SimpleNamespace(N=1.0, nu=1.0), M=1.0, L=0.0)
        t_grid = np.linspace(0.0, 2.0, 5)
        em = bounded_solution(
            ou_system, EquationTag.averaged(), t_grid, 0.01, 256, seed=5, contraction=contraction, burn_in=6.0
        )
        conv = stochastic_convolution_linear([[-1.0]], [0.0], [1.0], t_grid, 6.0, 0.01, 256, seed=5)
        assert float(np.mean((em.paths - conv.paths) ** 2)) < 1e-3

    def test_state_dependent_profile_rejected(self, semilinear_scalar):
        """Semilinear drifts need the EM bounded solution."""
        with pytest.raises(InvalidArgumentError):
            stochastic_convolution_linear([[-1.0]], semilinear_scalar.F, [1.0], [0.0, 1.0], 5.0, 0.1, 2, seed=0)

    def test_negative_burn_in(self):
        """burn_in must be non-negative."""
        with pytest.raises(InvalidArgumentError):
            stochastic_convolution_linear([[-1.0]], [0.0], [1.0], [0.0, 1.0], -1.0, 0.1, 2, seed=0)


class TestExponentialConvolutionSup:
    """Tests for exponential_convolution_sup."""

    @pytest.mark.parametrize("eps", [0.5, 0.1, 0.01])
    def test_cosine_amplitude(self, eps):
        """sup |int exp(-nu (t - s)) cos(s / eps) ds| = 1 / sqrt(nu^2 + eps^-2)."""
        result = exponential_convolution_sup(scalar_series(0.0, {1.0 / eps: 1.0}), nu=1.0)
        assert result.value == pytest.approx(1.0 / math.sqrt(1.0 + eps**-2), abs=1e-6)
        assert result.tail_bound <= 2e-12

    def test_constant_profile(self):
        """The convolution of the constant 1 is 1 / nu."""
        result = exponential_convolution_sup(lambda t: np.ones_like(t), nu=2.0, window=(0.0, 1.0), sup_f=1.0)
        assert result.value == pytest.approx(0.5, abs=1e-9)

    def test_callable_needs_bound(self):
        """Callables must supply sup |f|."""
        with pytest.raises(InvalidArgumentError):
            exponential_convolution_sup(np.cos, nu=1.0)

    def test_positive_rate(self):
        """nu must be positive."""
        with pytest.raises(InvalidArgumentError):
            exponential_convolution_sup(scalar_series(0.0, {1.0: 1.0}), nu=0.0)


class TestExponentialConvolutionBound:
    """Tests for exponential_convolution_bound."""

    def test_zero_length(self):
        """l = 0 leaves A / nu."""
        assert exponential_convolution_bound(2.0, 4.0, 0.0, 0.3) == pytest.approx(0.5)

    def test_long_window(self):
        """Long windows leave the windowed sup."""
        assert exponential_convolution_bound(2.0, 1.0, 60.0, 0.3) == pytest.approx(0.3, rel=1e-12)

    def test_formula(self):
        """A e^{-nu l}(l + 1/nu) + (1 - e^{-nu l}) w."""
        expected = math.exp(-1.0) * 2.0 + (1.0 - math.exp(-1.0)) * 0.25
        assert exponential_convolution_bound(1.0, 1.0, 1.0, 0.25) == pytest.approx(expected)

    def test_negative_length(self):
        """l must be non-negative."""
        with pytest.raises(InvalidArgumentError):
            exponential_convolution_bound(1.0, 1.0, -1.0, 0.0)
