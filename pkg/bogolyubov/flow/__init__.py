"""Cauchy operators, dichotomy fits and the rescaled-flow gap."""

from bogolyubov.flow.dichotomy import (
    DichotomyCertificate,
    DichotomySweep,
    DichotomySweepRow,
    SamplingPlan,
    TransportRow,
    check_transport,
    fast_step,
    fit_dichotomy,
    sweep_dichotomy,
)
from bogolyubov.flow.gap import GapRow, RescaledGapTable, rescaled_gap, scalar_gap_envelope
from bogolyubov.flow.propagator import (
    StepScheme,
    cauchy_operator,
    local_error,
    propagate_from,
    scheme_for,
    step_propagators,
)

__all__ = [
    "DichotomyCertificate",
    "DichotomySweep",
    "DichotomySweepRow",
    "GapRow",
    "RescaledGapTable",
    "SamplingPlan",
    "StepScheme",
    "TransportRow",
    "cauchy_operator",
    "check_transport",
    "fast_step",
    "fit_dichotomy",
    "local_error",
    "propagate_from",
    "rescaled_gap",
    "scalar_gap_envelope",
    "scheme_for",
    "step_propagators",
    "sweep_dichotomy",
]
