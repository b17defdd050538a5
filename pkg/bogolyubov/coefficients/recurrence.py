"""Recurrence classes of coefficient systems."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from bogolyubov.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Integer relations with coefficients up to this size count as rational dependence.
MAX_RELATION_COEFFICIENT = 10**6
_RELATION_RTOL = 1e-13
_COMMENSURATE_RTOL = 1e-9


class RecurrenceTag(str, Enum):
    """Recurrence classes, from most to least regular."""

    STATIONARY = "stationary"
    PERIODIC = "periodic"
    QUASI_PERIODIC = "quasi_periodic"
    BOHR_ALMOST_PERIODIC = "bohr_almost_periodic"
    LEVITAN = "levitan"
    PSEUDO_PERIODIC = "pseudo_periodic"
    PSEUDO_RECURRENT = "pseudo_recurrent"
    POISSON_STABLE = "poisson_stable"


def integer_relation(a: float, b: float, max_coefficient: int = MAX_RELATION_COEFFICIENT) -> Optional[tuple[int, int]]:
    """Return (p, q) with q*a == p*b and |p|, q <= max_coefficient, if one exists."""
    ratio = a / b
    approx = Fraction(ratio).limit_denominator(max_coefficient)
    if abs(approx.numerator) > max_coefficient:
        return None
    if abs(ratio - float(approx)) <= _RELATION_RTOL * max(1.0, abs(ratio)):
        return approx.numerator, approx.denominator
    return None


def _is_integer_multiple(value: float, unit: float) -> bool:
    k = round(value / unit)
    return k >= 1 and abs(value - k * unit) <= _COMMENSURATE_RTOL * max(1.0, value)


@dataclass(frozen=True)
class RecurrenceClass:
    """Declared recurrence class with its period or frequency basis.

    Attributes:
        tag: Class name
        period: Period for the periodic class
        frequencies: Basis frequencies for the quasi-periodic class
    """

    tag: RecurrenceTag
    period: Optional[float] = None
    frequencies: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "frequencies", tuple(float(f) for f in self.frequencies))
        if self.tag == RecurrenceTag.PERIODIC:
            if self.period is None or not math.isfinite(self.period) or self.period <= 0:
                raise InvalidArgumentError(f"periodic class needs a positive period, got {self.period}")
        if self.tag == RecurrenceTag.QUASI_PERIODIC:
            if not self.frequencies:
                raise InvalidArgumentError("quasi_periodic class needs at least one frequency")
            if any(f <= 0 or not math.isfinite(f) for f in self.frequencies):
                raise InvalidArgumentError("quasi_periodic frequencies must be positive")
            if len(set(self.frequencies)) != len(self.frequencies):
                raise InvalidArgumentError("quasi_periodic frequencies must be distinct")
            for a, b in combinations(self.frequencies, 2):
                relation = integer_relation(a, b)
                if relation is not None:
                    p, q = relation
                    raise InvalidArgumentError(
                        f"frequencies {a} and {b} are rationally dependent ({q}*{a} = {p}*{b})"
                    )

    @classmethod
    def stationary(cls) -> "RecurrenceClass":
        return cls(RecurrenceTag.STATIONARY)

    @classmethod
    def periodic(cls, period: float) -> "RecurrenceClass":
        return cls(RecurrenceTag.PERIODIC, period=float(period))

    @classmethod
    def quasi_periodic(cls, *frequencies: float) -> "RecurrenceClass":
        return cls(RecurrenceTag.QUASI_PERIODIC, frequencies=tuple(frequencies))

    @classmethod
    def levitan(cls) -> "RecurrenceClass":
        return cls(RecurrenceTag.LEVITAN)

    def conflicts(
        self, frequencies: Iterable[float], has_levitan: bool, has_decay: bool
    ) -> list[str]:
        """List reasons why coefficients with this content fall outside the class.

        Decaying terms are transients and never make a class claim false;
        they are only logged.
        """
        frequencies = list(frequencies)
        problems: list[str] = []
        if has_decay:
            logger.warning(
                f"decaying terms are transient; the {self.tag.value} claim covers the recurrent part only"
            )
        if self.tag == RecurrenceTag.STATIONARY:
            if frequencies:
                problems.append(f"stationary class but harmonics at {frequencies}")
            if has_levitan:
                problems.append("stationary class but a Levitan term is present")
        elif self.tag == RecurrenceTag.PERIODIC:
            unit = 2.0 * math.pi / self.period
            for f in frequencies:
                if not _is_integer_multiple(f, unit):
                    problems.append(f"frequency {f} is not a multiple of 2*pi/{self.period}")
            if has_levitan:
                problems.append("periodic class but a Levitan term is present")
        elif self.tag == RecurrenceTag.QUASI_PERIODIC:
            for f in frequencies:
                if not any(_is_integer_multiple(f, base) for base in self.frequencies):
                    problems.append(f"frequency {f} is not a multiple of a basis frequency")
            if has_levitan:
                problems.append("quasi_periodic class but a Levitan term is present")
        elif self.tag == RecurrenceTag.BOHR_ALMOST_PERIODIC and has_levitan:
            problems.append("Levitan terms are not Bohr almost periodic")
        return problems

    def to_dict(self) -> dict:
        return {"tag": self.tag.value, "period": self.period, "frequencies": list(self.frequencies)}
