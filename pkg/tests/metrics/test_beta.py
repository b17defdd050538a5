"""Tests for empirical laws and the bounded-Lipschitz distance."""

import numpy as np
import pytest

from bogolyubov.core import EquationTag
from bogolyubov.exceptions import InvalidArgumentError
from bogolyubov.metrics import BetaMethod, EmpiricalLaw, beta_distance
from bogolyubov.metrics.law import pooled_support
from bogolyubov.sde import PathEnsemble


def two_point(d: float) -> tuple[np.ndarray, np.ndarray]:
    return np.zeros(2), np.full(2, d)


# =============================================================================
# Empirical laws
# =============================================================================


class TestEmpiricalLaw:
    """Tests for EmpiricalLaw."""

    def test_vector_samples_become_columns(self):
        """1-D input is read as n scalar samples."""
        law = EmpiricalLaw(np.arange(5.0))
        assert law.n_samples == 5
        assert law.dimension == 1

    def test_read_only(self):
        """Samples are frozen."""
        law = EmpiricalLaw(np.arange(3.0))
        with pytest.raises(ValueError):
            law.samples[0, 0] = 1.0

    @pytest.mark.parametrize("samples", [[1.0], [[1.0, np.nan], [0.0, 0.0]]])
    def test_invalid_samples(self, samples):
        """Single samples and non-finite values are rejected."""
        with pytest.raises(InvalidArgumentError):
            EmpiricalLaw(np.asarray(samples))

    def test_from_ensemble(self):
        """Marginals carry their provenance."""
        paths = np.arange(6.0).reshape(3, 2, 1)
        ensemble = PathEnsemble(time_grid=[0.0, 0.5], paths=paths, seed=7, tag=EquationTag.rescaled(0.1))
        law = EmpiricalLaw.from_ensemble(ensemble, 1)
        np.testing.assert_array_equal(law.samples[:, 0], [1.0, 3.0, 5.0])
        assert law.source.t == 0.5
        assert law.source.eps == 0.1
        assert law.source.seed == 7

    def test_split_half(self, rng):
        """Halves are disjoint and equally sized."""
        law = EmpiricalLaw(np.arange(9.0))
        first, second = law.split_half(rng)
        assert first.n_samples == second.n_samples == 4
        assert not set(first.samples[:, 0]) & set(second.samples[:, 0])

    def test_pooled_support(self):
        """Distinct points with multiplicities per sample."""
        support, a, b = pooled_support([1.0, 1.0, 2.0], [2.0, 3.0])
        np.testing.assert_array_equal(support, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(a, [2, 1, 0])
        np.testing.assert_array_equal(b, [0, 1, 1])


# =============================================================================
# Exact one-dimensional distance
# =============================================================================


class TestExactBeta:
    """Tests for beta_distance in one dimension."""

    @pytest.mark.parametrize("d", [0.1, 1.0, 10.0])
    def test_two_point_closed_form(self, d):
        """beta(delta_0, delta_d) = 2d / (2 + d)."""
        estimate = beta_distance(*two_point(d))
        assert estimate.method == BetaMethod.EXACT
        assert estimate.estimate == pytest.approx(2 * d / (2 + d), abs=1e-3)

    def test_optimal_split(self):
        """The optimal Lipschitz share for two points is 2 / (2 + d)."""
        estimate = beta_distance(*two_point(1.0))
        assert estimate.lipschitz_share == pytest.approx(2.0 / 3.0, abs=1e-3)

    def test_identical_laws(self, rng):
        """Equal samples are at distance zero."""
        x = rng.standard_normal(50)
        assert beta_distance(x, rng.permutation(x)).estimate == 0.0

    @pytest.mark.parametrize("seed", range(100))
    def test_metric_axioms(self, seed):
        """Symmetry, triangle inequality and the [0, 2] range on a seeded triple of laws."""
        rng = np.random.default_rng(seed)
        sizes = rng.integers(10, 60, size=3)
        means = rng.uniform(-1.0, 1.0, size=3)
        scales = rng.uniform(0.3, 2.0, size=3)
        x, y, z = (m + s * rng.standard_normal(n) for n, m, s in zip(sizes, means, scales))
        d_xy = beta_distance(x, y).estimate
        d_yz = beta_distance(y, z).estimate
        d_xz = beta_distance(x, z).estimate
        assert d_xy == pytest.approx(beta_distance(y, x).estimate, abs=1e-9)
        assert d_xz <= d_xy + d_yz + 1e-6
        assert 0.0 <= d_xz <= 2.0

    def test_shift_bound(self, rng):
        """Translating a law by c moves it at most c."""
        x = rng.standard_normal(100)
        assert beta_distance(x, x + 0.05).estimate <= 0.05 + 1e-9

    def test_bounded_by_two(self):
        """Far-apart laws approach 2 from below."""
        estimate = beta_distance(*two_point(1e6)).estimate
        assert 1.99 < estimate <= 2.0

    def test_unequal_sizes(self):
        """Half the mass moved by d with 2 vs 4 samples."""
        estimate = beta_distance([0.0, 0.0], [0.0, 0.0, 5.0, 5.0]).estimate
        assert estimate == pytest.approx(0.5 * 2 * 5.0 / (2 + 5.0), abs=1e-3)


# =============================================================================
# Randomized lower bound
# =============================================================================


class TestRandomizedBeta:
    """Tests for the randomized test-function family."""

    def test_lower_bound_in_one_dimension(self, rng):
        """The randomized family never beats the exact value."""
        x, y = rng.standard_normal(80), 1.0 + rng.standard_normal(80)
        exact = beta_distance(x, y).estimate
        randomized = beta_distance(x, y, method=BetaMethod.RANDOMIZED, family_size=512, seed=3)
        assert randomized.method == BetaMethod.RANDOMIZED
        assert 0.0 < randomized.estimate <= exact + 1e-9
        assert randomized.family_size == 512

    def test_auto_picks_randomized(self, rng):
        """Two-dimensional laws use the randomized family."""
        x, y = rng.standard_normal((50, 2)), rng.standard_normal((50, 2)) + 2.0
        estimate = beta_distance(x, y, family_size=256)
        assert estimate.method == BetaMethod.RANDOMIZED
        assert 0.0 < estimate.estimate <= 2.0

    def test_seed_reproducible(self, rng):
        """Equal seeds give equal estimates."""
        x, y = rng.standard_normal((30, 2)), rng.standard_normal((30, 2))
        first = beta_distance(x, y, family_size=128, seed=5)
        second = beta_distance(x, y, family_size=128, seed=5)
        assert first == second

    def test_exact_needs_one_dimension(self, rng):
        """Exact mode is one-dimensional only."""
        x = rng.standard_normal((10, 2))
        with pytest.raises(InvalidArgumentError):
            beta_distance(x, x, method=BetaMethod.EXACT)

    def test_dimension_mismatch(self, rng):
        """Laws must share a dimension."""
        with pytest.raises(InvalidArgumentError):
            beta_distance(rng.standard_normal((10, 2)), rng.standard_normal(10))

    def test_family_size(self, rng):
        """Families need at least two functions."""
        x = rng.standard_normal((10, 2))
        with pytest.raises(InvalidArgumentError):
            beta_distance(x, x, family_size=1)
