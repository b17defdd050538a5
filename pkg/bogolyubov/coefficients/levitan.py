"""The Levitan almost periodic example and its bounded sine modulation."""

from functools import lru_cache

import numpy as np
import numpy.typing as npt

SQRT2 = float(np.sqrt(2.0))

# Midpoints of this torus grid never hit the singular corner (pi, pi).
_TORUS_GRID = 2048


def levitan_example(t: npt.ArrayLike) -> np.ndarray | float:
    """Return 1/(2 + cos t + cos sqrt(2) t).

    The denominator is positive for every finite t because cos t and
    cos sqrt(2) t cannot both equal -1, so the value is finite and at least
    1/4, but it is unbounded on the real line.
    """
    t_arr = np.asarray(t, dtype=np.float64)
    value = 1.0 / (2.0 + np.cos(t_arr) + np.cos(SQRT2 * t_arr))
    return float(value) if value.ndim == 0 else value


def levitan_sine(u: npt.ArrayLike) -> np.ndarray | float:
    """Bounded Levitan factor sin(1/(2 + cos u + cos sqrt(2) u))."""
    return np.sin(levitan_example(u))


@lru_cache(maxsize=1)
def levitan_sine_mean() -> float:
    """Time mean of :func:`levitan_sine`.

    The flow u -> (u, sqrt(2) u) is equidistributed on the 2-torus, so the
    time mean equals the torus mean of sin(1/(2 + cos a + cos b)), evaluated
    here with the midpoint rule. The integrand is bounded, so the rule
    converges despite the oscillation near the corner.
    """
    nodes = (np.arange(_TORUS_GRID) + 0.5) * (2.0 * np.pi / _TORUS_GRID)
    cos_nodes = np.cos(nodes)
    total = 0.0
    for row in np.array_split(cos_nodes, 16):
        denominators = 2.0 + row[:, None] + cos_nodes[None, :]
        total += float(np.sin(1.0 / denominators).sum())
    return total / (_TORUS_GRID * _TORUS_GRID)
