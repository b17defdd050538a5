"""Tests for the contraction inequalities and the invariant-ball radius."""

import math
from types import SimpleNamespace

import pytest

from bogolyubov.averaging import (
    AVERAGING,
    BOUNDED_SOLUTION,
    STRONG_COMPATIBILITY,
    verify_contraction,
)
from bogolyubov.exceptions import InvalidArgumentError, RefuseToRunError


def cert(N: float = 1.0, nu: float = 1.0) -> SimpleNamespace:
    return SimpleNamespace(N=N, nu=nu)


class TestVerifyContraction:
    """Tests for verify_contraction."""

    def test_radius_without_lipschitz(self):
        """N = nu = M = 1 and L = 0 give r = sqrt(3)."""
        report = verify_contraction(cert(), M=1.0, L=0.0)
        assert report.radius == pytest.approx(math.sqrt(3.0))
        assert report.all_passed

    def test_bounds(self):
        """The three bounds for N = nu = 1."""
        report = verify_contraction(cert(), M=1.0, L=0.0)
        assert report.check(BOUNDED_SOLUTION).bound == pytest.approx(1.0 / math.sqrt(3.0))
        assert report.check(STRONG_COMPATIBILITY).bound == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)))
        assert report.check(AVERAGING).bound == pytest.approx(1.0 / 3.0)

    def test_boundary_lipschitz_fails(self):
        """Equality L = nu/(N sqrt(2+nu)) is not strict, so there is no radius."""
        report = verify_contraction(cert(), M=1.0, L=1.0 / math.sqrt(3.0))
        assert not report.has_bounded_solution
        assert report.radius is None
        assert report.truncation_bias(10.0) == math.inf

    def test_averaging_is_strictest(self):
        """L between the averaging and bounded-solution bounds passes only the latter."""
        report = verify_contraction(cert(), M=1.0, L=0.4)
        assert report.has_bounded_solution
        assert not report.check(AVERAGING).passed
        assert not report.all_passed

    def test_require_raises_with_inequality(self):
        """require names the failing inequality."""
        report = verify_contraction(cert(), M=1.0, L=0.4)
        report.require(BOUNDED_SOLUTION)
        with pytest.raises(RefuseToRunError) as exc_info:
            report.require(AVERAGING)
        assert exc_info.value.inequality == AVERAGING

    def test_radius_grows_with_lipschitz(self):
        """r increases as L approaches the bound."""
        radii = [verify_contraction(cert(), 1.0, L).radius for L in (0.0, 0.2, 0.4, 0.55)]
        assert radii == sorted(radii)

    def test_memory_horizon(self):
        """ln(N / memory) / nu."""
        report = verify_contraction(cert(N=2.0, nu=0.5), M=1.0, L=0.0)
        assert report.memory_horizon(0.01) == pytest.approx(math.log(200.0) / 0.5)

    def test_truncation_bias(self):
        """N exp(-nu b) r."""
        report = verify_contraction(cert(), M=1.0, L=0.0)
        assert report.truncation_bias(2.0) == pytest.approx(math.exp(-2.0) * math.sqrt(3.0))

    @pytest.mark.parametrize("N, nu, M, L", [(0.5, 1.0, 1.0, 0.0), (1.0, 0.0, 1.0, 0.0), (1.0, 1.0, -1.0, 0.0)])
    def test_invalid_constants(self, N, nu, M, L):
        """N < 1, nu <= 0 or negative M are rejected."""
        with pytest.raises(InvalidArgumentError):
            verify_contraction(cert(N, nu), M, L)

    def test_unknown_inequality(self):
        """check raises KeyError for an unknown name."""
        with pytest.raises(KeyError):
            verify_contraction(cert(), 1.0, 0.0).check("L < 1")

    def test_to_dict(self):
        """Serialized report lists three inequalities."""
        data = verify_contraction(cert(), 1.0, 0.0).to_dict()
        assert [i["name"] for i in data["inequalities"]] == [BOUNDED_SOLUTION, STRONG_COMPATIBILITY, AVERAGING]
