"""Tests for runner helpers that need no full scenario run."""

import pytest

from bogolyubov.cli.runner import ConvergenceRow, ConvergenceTable, radius_bound


class TestRadiusBound:
    """Tests for radius_bound."""

    def test_bias_inside_the_square(self):
        """(r + bias)^2 + 3 SE."""
        assert radius_bound(2.0, 0.1, 0.01) == pytest.approx(2.1**2 + 0.03)

    @pytest.mark.parametrize("radius", [0.5, 1.0, 1.7320508075688772, 4.0])
    def test_contains_additive_form(self, radius):
        """For r >= 1/2 the bound is never below r^2 + 3 SE + bias."""
        for bias in (0.0, 1e-3, 0.05, 0.5):
            assert radius_bound(radius, bias, 0.02) >= radius**2 + 0.06 + bias - 1e-12


class TestConvergenceTable:
    """Tests for ConvergenceTable verdicts."""

    def test_beta_within_floor_tolerance(self):
        """A beta above the mean floor but within its tolerance still counts as decreasing."""
        rows = [
            ConvergenceRow(0.1, 0.2, 0.01, 0.025, 0.02, 0.03),
            ConvergenceRow(0.05, 0.1, 0.01, 0.029, 0.024, 0.032),
        ]
        table = ConvergenceTable(rows=rows)
        assert table.beta_decreasing
        assert table.deviation_decreasing

    def test_beta_above_tolerance(self):
        """A rising beta beyond the floor tolerance fails."""
        rows = [
            ConvergenceRow(0.1, 0.2, 0.01, 0.025, 0.02, 0.03),
            ConvergenceRow(0.05, 0.1, 0.01, 0.05, 0.024, 0.032),
        ]
        assert not ConvergenceTable(rows=rows).beta_decreasing

    def test_single_row(self):
        """One row makes no monotonicity claim."""
        table = ConvergenceTable(rows=[ConvergenceRow(0.1, 0.2, 0.01, 0.025, 0.02, 0.03)])
        assert table.beta_decreasing is None
        assert table.deviation_decreasing is None
