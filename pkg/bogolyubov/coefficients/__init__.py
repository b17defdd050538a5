"""Recurrent coefficient families, shifts, Bebutov distance and certificates."""

from bogolyubov.coefficients.bebutov import (
    BebutovDistance,
    almost_period_gap,
    bebutov_distance,
    find_almost_periods,
    verify_almost_period,
)
from bogolyubov.coefficients.certificates import (
    CertificateReport,
    FieldCheck,
    check_field,
    verify_certificates,
)
from bogolyubov.coefficients.fields import Certificate, NonlinearTerm, Nonlinearity, StateField
from bogolyubov.coefficients.levitan import levitan_example, levitan_sine, levitan_sine_mean
from bogolyubov.coefficients.recurrence import RecurrenceClass, RecurrenceTag, integer_relation
from bogolyubov.coefficients.series import DecayTerm, Harmonic, TrigSeries
from bogolyubov.coefficients.system import (
    CoefficientSystem,
    ShiftedFunction,
    evaluate,
    shift,
)

# Domain names for the two roles a StateField plays.
DriftField = StateField
DiffusionField = StateField
TimeVaryingOperator = TrigSeries

__all__ = [
    "BebutovDistance",
    "Certificate",
    "CertificateReport",
    "CoefficientSystem",
    "DecayTerm",
    "DiffusionField",
    "DriftField",
    "FieldCheck",
    "Harmonic",
    "NonlinearTerm",
    "Nonlinearity",
    "RecurrenceClass",
    "RecurrenceTag",
    "ShiftedFunction",
    "StateField",
    "TimeVaryingOperator",
    "TrigSeries",
    "almost_period_gap",
    "bebutov_distance",
    "check_field",
    "evaluate",
    "find_almost_periods",
    "integer_relation",
    "levitan_example",
    "levitan_sine",
    "levitan_sine_mean",
    "shift",
    "verify_almost_period",
    "verify_certificates",
]
