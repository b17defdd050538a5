"""Tests for Monte Carlo certificate verification."""

import numpy as np
import pytest

from bogolyubov.coefficients import (
    Certificate,
    CoefficientSystem,
    RecurrenceClass,
    StateField,
    TrigSeries,
    verify_certificates,
)
from bogolyubov.exceptions import CertificateViolationError, InvalidArgumentError


@pytest.fixture
def understated_lipschitz() -> CoefficientSystem:
    """F(t, x) = 2x certified with L = 1."""
    F = StateField(
        offset=TrigSeries.constant([0.0]),
        certificate=Certificate(M=0.0, L=1.0),
        linear=TrigSeries.constant([[2.0]]),
    )
    return CoefficientSystem(
        A=TrigSeries.constant([[-5.0]]),
        F=F,
        G=StateField.constant([1.0]),
        recurrence=RecurrenceClass.stationary(),
        name="understated",
    )


class TestVerifyCertificates:
    """Tests for verify_certificates."""

    def test_honest_certificate_passes(self, semilinear_scalar):
        """cos(sqrt(2) t) tanh(x) is within (M=0.5, L=1)."""
        report = verify_certificates(semilinear_scalar, sample_count=4096, seed=1)
        assert report.passed
        assert report.worst_ratio <= 1.0 + 1e-9

    def test_violation_raises_with_witness(self, understated_lipschitz):
        """2x breaks L = 1 and the error names the sample."""
        with pytest.raises(CertificateViolationError) as exc_info:
            verify_certificates(understated_lipschitz, sample_count=256, seed=3)
        witness = exc_info.value.witness
        assert witness["field"] == "F"
        assert witness["kind"] == "L"
        assert {"t", "x1", "x2"} <= set(witness)

    def test_violation_ratio(self, understated_lipschitz):
        """The worst Lipschitz ratio of 2x against L = 1 is 2."""
        report = verify_certificates(
            understated_lipschitz, sample_count=256, seed=3, raise_on_violation=False
        )
        assert not report.passed
        assert report.checks[0].worst_L_ratio == pytest.approx(2.0, rel=1e-9)

    def test_bound_violation(self):
        """|G(t, 0)| = 2 against M = 1 fails the bound check."""
        system = CoefficientSystem(
            A=TrigSeries.constant([[-1.0]]),
            F=StateField.constant([0.0]),
            G=StateField.constant([2.0], M=1.0),
            recurrence=RecurrenceClass.stationary(),
        )
        with pytest.raises(CertificateViolationError) as exc_info:
            verify_certificates(system, sample_count=16, seed=0)
        assert exc_info.value.witness["kind"] == "M"
        assert exc_info.value.witness["field"] == "G"

    def test_seed_reproducible(self, semilinear_scalar):
        """The same seed gives the same report."""
        first = verify_certificates(semilinear_scalar, sample_count=512, seed=9).to_dict()
        second = verify_certificates(semilinear_scalar, sample_count=512, seed=9).to_dict()
        assert first == second

    def test_sample_count_positive(self, semilinear_scalar):
        """At least one sample is required."""
        with pytest.raises(InvalidArgumentError):
            verify_certificates(semilinear_scalar, sample_count=0, seed=0)

    def test_report_dict(self, semilinear_scalar):
        """The serialized report lists both fields."""
        data = verify_certificates(semilinear_scalar, sample_count=64, seed=2).to_dict()
        assert [c["name"] for c in data["checks"]] == ["F", "G"]
        assert data["passed"] is True
        assert np.isfinite(data["checks"][0]["worst_L_ratio"])
