"""Tests for shared value types and coercion helpers."""

import numpy as np
import pytest

from bogolyubov.core import (
    BrownianTag,
    EquationKind,
    EquationTag,
    as_finite_scalar,
    as_operator,
    as_state_vector,
    ordered_map,
    uniform_step,
)
from bogolyubov.exceptions import InvalidArgumentError


class TestEquationTag:
    """Tests for EquationTag."""

    def test_original_carries_eps(self):
        """original(eps) keeps its time scale."""
        tag = EquationTag.original(0.1)
        assert tag.kind == EquationKind.ORIGINAL
        assert tag.eps == 0.1
        assert tag.label == "original(0.1)"

    def test_averaged_has_no_eps(self):
        """averaged() carries no time scale."""
        tag = EquationTag.averaged()
        assert tag.eps is None
        assert tag.label == "averaged"

    def test_averaged_with_eps_rejected(self):
        """An averaged tag with eps is malformed."""
        with pytest.raises(InvalidArgumentError):
            EquationTag(EquationKind.AVERAGED, 0.1)

    @pytest.mark.parametrize("eps", [0.0, -0.5, float("inf"), None])
    def test_rescaled_needs_positive_eps(self, eps):
        """A rescaled tag needs a positive finite eps."""
        with pytest.raises(InvalidArgumentError):
            EquationTag(EquationKind.RESCALED, eps)

    def test_to_dict(self):
        """Serialized form uses the enum value."""
        assert EquationTag.rescaled(0.5).to_dict() == {"kind": "rescaled", "eps": 0.5}


class TestBrownianTag:
    """Tests for BrownianTag."""

    def test_fresh_label(self):
        """Fresh streams are labelled as such."""
        assert BrownianTag.fresh().label == "fresh"

    def test_shared_equality(self):
        """Shared tags with the same stream compare equal."""
        assert BrownianTag.shared_with(7) == BrownianTag.shared_with(7)
        assert BrownianTag.shared_with(7) != BrownianTag.fresh(7)


class TestCoercion:
    """Tests for the array coercion helpers."""

    def test_scalar_becomes_vector(self):
        """A scalar state is a length-one vector."""
        np.testing.assert_array_equal(as_state_vector(2.0), [2.0])

    def test_vector_dimension_mismatch(self):
        """A wrong length names the argument."""
        with pytest.raises(InvalidArgumentError) as exc_info:
            as_state_vector([1.0, 2.0], dimension=3, name="x0")
        assert exc_info.value.argument == "x0"

    def test_nan_state_rejected(self):
        """Non-finite entries are rejected."""
        with pytest.raises(InvalidArgumentError):
            as_state_vector([1.0, float("nan")])

    def test_scalar_operator(self):
        """A scalar operator becomes 1 x 1."""
        assert as_operator(-1.0).shape == (1, 1)

    def test_finite_scalar(self):
        """Infinity is not a finite scalar."""
        with pytest.raises(InvalidArgumentError):
            as_finite_scalar(float("inf"), "t")


class TestUniformStep:
    """Tests for uniform_step."""

    def test_linspace_step(self):
        """A linspace grid reports its spacing."""
        assert uniform_step(np.linspace(0.0, 2.0, 5)) == pytest.approx(0.5)

    def test_non_uniform_rejected(self):
        """Uneven spacing is rejected."""
        with pytest.raises(InvalidArgumentError):
            uniform_step(np.array([0.0, 0.1, 0.3]))

    def test_decreasing_rejected(self):
        """Grids must increase."""
        with pytest.raises(InvalidArgumentError):
            uniform_step(np.array([1.0, 0.5, 0.0]))

    def test_single_point_rejected(self):
        """At least two points are needed."""
        with pytest.raises(InvalidArgumentError):
            uniform_step(np.array([0.0]))


class TestOrderedMap:
    """Tests for ordered_map."""

    def test_order_independent_of_threads(self):
        """Results follow input order for any thread count."""
        items = list(range(20))
        assert ordered_map(lambda k: k * k, items, threads=4) == [k * k for k in items]
