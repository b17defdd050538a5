"""Tests for the weighted gap between fast and averaged flows."""

import math

import numpy as np
import pytest

from bogolyubov.cli.config import load_config, shipped_scenario_path
from bogolyubov.coefficients import Harmonic, TrigSeries
from bogolyubov.exceptions import HurwitzError, InvalidArgumentError
from bogolyubov.flow import GapRow, RescaledGapTable, rescaled_gap, scalar_gap_envelope
from bogolyubov.flow.gap import GAP_COLUMNS
from tests.builders import scalar_operator


@pytest.fixture
def oscillating() -> TrigSeries:
    """a(t) = -1 + 0.5 cos t with average -1."""
    return scalar_operator(-1.0, {1.0: 0.5})


class TestRescaledGap:
    """Tests for rescaled_gap."""

    def test_constant_operator_has_no_gap(self):
        """A constant A coincides with its average."""
        table = rescaled_gap(TrigSeries.constant([[-1.0]]), [[-1.0]], [0.5, 0.1], T_max=5.0, n_base=2)
        assert all(value == pytest.approx(0.0, abs=1e-14) for value in table.values)

    def test_scalar_bound(self, oscillating):
        """N(eps) <= e^{1/2} (e^eps - 1) for the oscillating scalar operator."""
        eps_list = [0.5, 0.1, 0.02]
        table = rescaled_gap(oscillating, [[-1.0]], eps_list, T_max=5.0, n_base=8)
        for row in table.rows:
            assert row.N_eps <= math.exp(0.5) * math.expm1(row.eps) * (1.0 + 1e-3)

    def test_strictly_decreasing(self, oscillating):
        """N(eps) decreases along the sweep."""
        table = rescaled_gap(oscillating, [[-1.0]], [0.5, 0.1, 0.02], T_max=5.0, n_base=8)
        assert table.is_strictly_decreasing()
        assert table.is_non_increasing()

    def test_rows_sorted_by_decreasing_eps(self, oscillating):
        """Rows come back largest eps first."""
        table = rescaled_gap(oscillating, [[-1.0]], [0.1, 0.5], T_max=3.0, n_base=4)
        assert table.eps == [0.5, 0.1]

    def test_default_gamma0(self, oscillating):
        """gamma0 defaults to half the averaged rate."""
        table = rescaled_gap(oscillating, [[-1.0]], [0.5], T_max=3.0, n_base=4)
        assert table.nu_bar == pytest.approx(1.0, rel=1e-9)
        assert table.gamma0 == pytest.approx(0.5, rel=1e-9)

    def test_witness_inside_sampled_range(self, oscillating):
        """Witness times satisfy tau <= t <= tau + T_max."""
        row = rescaled_gap(oscillating, [[-1.0]], [0.2], T_max=3.0, n_base=4).rows[0]
        assert row.witness_tau <= row.witness_t <= row.witness_tau + 3.0 + 1e-9

    def test_benchmark_sweep_decays_linearly(self, oscillating):
        """eps in {0.2, 0.1, 0.05, 0.02} with gamma0 = 0.5: N strictly decreasing,
        N(0.02) <= 0.15 N(0.2) and every row under e^{1/2} (e^eps - 1)."""
        table = rescaled_gap(oscillating, [[-1.0]], [0.2, 0.1, 0.05, 0.02], gamma0=0.5)
        assert table.eps == [0.2, 0.1, 0.05, 0.02]
        assert table.is_strictly_decreasing()
        assert table.values[-1] <= 0.15 * table.values[0]
        assert table.decays_linearly()
        for row in table.rows:
            assert row.N_eps <= math.exp(0.5) * math.expm1(row.eps) * (1.0 + 1e-3)
        assert table.envelope_violations(oscillating) == []

    @pytest.mark.parametrize("n_base", [8, 32])
    def test_levitan_operator(self, n_base):
        """The Levitan scenario's operator has a finite gap at eps = 0.05 for any base density."""
        system = load_config(shipped_scenario_path("levitan_drift")).build_system()
        table = rescaled_gap(system.A, system.A.mean(), [0.05], T_max=10.0, n_base=n_base)
        value = table.values[0]
        assert np.isfinite(value)
        assert 0.0 < value < 1.0
        assert table.envelope_violations(system.A) == []

    def test_non_hurwitz_average(self):
        """A non-Hurwitz average raises HurwitzError."""
        A = TrigSeries.constant([[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(HurwitzError) as exc_info:
            rescaled_gap(A, [[0.0, 1.0], [-1.0, 0.0]], [0.1])
        assert exc_info.value.spectral_abscissa == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("gamma0", [0.0, -0.1, 2.0])
    def test_gamma0_range(self, oscillating, gamma0):
        """gamma0 must lie strictly inside (0, nu)."""
        with pytest.raises(InvalidArgumentError):
            rescaled_gap(oscillating, [[-1.0]], [0.1], gamma0=gamma0)

    def test_empty_eps_list(self, oscillating):
        """An empty sweep is rejected."""
        with pytest.raises(InvalidArgumentError):
            rescaled_gap(oscillating, [[-1.0]], [])


class TestRescaledGapTable:
    """Tests for RescaledGapTable."""

    def test_to_csv(self, tmp_path):
        """CSV rows use repr of every value."""
        table = RescaledGapTable(
            gamma0=0.5, nu_bar=1.0, rows=[GapRow(0.1, 0.05, 1.5, 0.25), GapRow(0.05, 0.02, 2.0, 0.0)]
        )
        path = table.to_csv(tmp_path / "gap.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(GAP_COLUMNS)
        assert lines[1] == "0.1,0.5,0.05,1.5,0.25"
        assert len(lines) == 3

    def test_single_row_is_decreasing(self):
        """A single row is trivially decreasing."""
        table = RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=[GapRow(0.1, 0.05, 1.0, 0.0)])
        assert table.is_strictly_decreasing()

    def test_equal_values_not_strict(self):
        """Equal consecutive values break strict decrease only."""
        rows = [GapRow(0.2, 0.1, 1.0, 0.0), GapRow(0.1, 0.1, 1.0, 0.0)]
        table = RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=rows)
        assert not table.is_strictly_decreasing()
        assert table.is_non_increasing()

    def test_to_dict(self):
        """Serialized table keeps the weight exponent."""
        table = RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=[GapRow(0.1, 0.05, 1.0, 0.0)])
        data = table.to_dict()
        assert data["gamma0"] == 0.5
        assert data["rows"][0]["N_eps"] == 0.05
        assert np.isfinite(data["nu_bar"])

    def test_linear_decay(self):
        """N at the smallest eps is compared to the eps-ratio of N at the largest."""
        rows = [GapRow(0.2, 0.16, 1.0, 0.0), GapRow(0.02, 0.02, 1.0, 0.0)]
        assert RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=rows).decays_linearly()
        rows = [GapRow(0.2, 0.16, 1.0, 0.0), GapRow(0.02, 0.05, 1.0, 0.0)]
        assert not RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=rows).decays_linearly()

    def test_envelope_violation_reported(self, oscillating):
        """Rows above the closed-form envelope are returned with the bound."""
        bound = math.exp(0.5) * math.expm1(0.1) * (1.0 + 1e-3)
        rows = [GapRow(0.1, 2.0 * bound, 1.0, 0.0), GapRow(0.05, 0.01, 1.0, 0.0)]
        violations = RescaledGapTable(gamma0=0.5, nu_bar=1.0, rows=rows).envelope_violations(oscillating)
        assert len(violations) == 1
        assert violations[0][0].eps == 0.1
        assert violations[0][1] == pytest.approx(bound)


class TestScalarGapEnvelope:
    """Tests for scalar_gap_envelope."""

    def test_harmonic_scalar(self, oscillating):
        """K = 2 |C| / w = 1 for a(t) = -1 + 0.5 cos t."""
        value = scalar_gap_envelope(oscillating, 0.1, 0.5)
        assert value == pytest.approx(math.exp(0.5) * math.expm1(0.1) * 1.001)

    def test_sine_and_speed(self):
        """Sine coefficients count and a faster profile shrinks K."""
        A = TrigSeries(
            base=np.array([[-1.0]]),
            harmonics=(Harmonic(frequency=2.0, cos_coef=np.array([[0.2]]), sin_coef=np.array([[-0.3]])),),
        )
        assert scalar_gap_envelope(A, 0.1, 0.5) == pytest.approx(math.exp(0.5) * math.expm1(0.05) * 1.001)
        assert scalar_gap_envelope(A.rescale(0.5), 0.1, 0.5) == pytest.approx(
            math.exp(0.5) * math.expm1(0.025) * 1.001
        )

    def test_no_envelope(self):
        """Matrices and Levitan profiles have no closed-form envelope."""
        assert scalar_gap_envelope(TrigSeries.constant(np.eye(2)), 0.1, 0.5) is None
        levitan = TrigSeries(base=np.array([[-1.0]]), levitan=np.array([[0.2]]))
        assert scalar_gap_envelope(levitan, 0.1, 0.5) is None
