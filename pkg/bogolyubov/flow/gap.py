"""Weighted gap between the fast flow of A(t / eps) and the averaged flow exp(A_bar s)."""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.core.linalg import hurwitz_check, mat_exp
from bogolyubov.core.parallel import ordered_map
from bogolyubov.core.types import as_operator
from bogolyubov.exceptions import HurwitzError, InvalidArgumentError
from bogolyubov.flow.dichotomy import (
    DichotomyCertificate,
    SamplingPlan,
    fast_step,
    fit_dichotomy,
    recurrence_window,
)
from bogolyubov.flow.propagator import propagate_from, propagator_norms

logger = logging.getLogger(__name__)

GAP_COLUMNS = ("epsilon", "gamma0", "N_eps", "witness_t", "witness_tau")

ENVELOPE_RTOL = 1e-3
# N at the smallest eps may exceed (eps_min / eps_max) N(eps_max) by this factor.
LINEAR_DECAY_SLACK = 1.5


def scalar_gap_envelope(A: TrigSeries, eps: float, gamma0: float) -> Optional[float]:
    """Closed-form bound e^{gamma0} (e^{eps K} - 1) on N(eps), with a 1e-3 relative allowance.

    K = sum_k 2 (|C_k| + |S_k|) / w_k bounds the oscillating part of the
    integral of A over any window, so it applies to scalar operators made of
    a constant and harmonics only; other operators get ``None``.
    """
    if A.shape != (1, 1) or A.decay is not None or A.levitan is not None:
        return None
    K = sum(
        2.0 * (abs(float(h.cos_coef[0, 0])) + abs(float(h.sin_coef[0, 0]))) / h.frequency
        for h in A.harmonics
    ) / A.speed
    return math.exp(gamma0) * math.expm1(float(eps) * K) * (1.0 + ENVELOPE_RTOL)


@dataclass(frozen=True)
class GapRow:
    eps: float
    N_eps: float
    witness_t: float
    witness_tau: float


@dataclass
class RescaledGapTable:
    """N(eps) = sup e^{gamma0 (t - tau)} |G_{A_eps}(t, tau) - exp(A_bar (t - tau))|.

    Rows are sorted by decreasing eps.
    """

    gamma0: float
    nu_bar: float
    rows: list[GapRow] = field(default_factory=list)

    @property
    def eps(self) -> list[float]:
        return [row.eps for row in self.rows]

    @property
    def values(self) -> list[float]:
        return [row.N_eps for row in self.rows]

    def is_non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.values, self.values[1:]))

    def is_strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.values, self.values[1:]))

    def decays_linearly(self, slack: float = LINEAR_DECAY_SLACK) -> bool:
        """N(eps_min) <= slack * (eps_min / eps_max) * N(eps_max)."""
        if len(self.rows) < 2:
            return True
        first, last = self.rows[0], self.rows[-1]
        return last.N_eps <= slack * (last.eps / first.eps) * first.N_eps

    def envelope_violations(self, A: TrigSeries) -> list[tuple[GapRow, float]]:
        """Rows above :func:`scalar_gap_envelope`, with the envelope they exceed."""
        out = []
        for row in self.rows:
            bound = scalar_gap_envelope(A, row.eps, self.gamma0)
            if bound is not None and row.N_eps > bound:
                out.append((row, bound))
        return out

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(GAP_COLUMNS)
            for row in self.rows:
                values = (row.eps, self.gamma0, row.N_eps, row.witness_t, row.witness_tau)
                writer.writerow([repr(v) for v in values])
        return path

    def to_dict(self) -> dict[str, Any]:
        return {
            "gamma0": self.gamma0,
            "nu_bar": self.nu_bar,
            "rows": [row.__dict__ for row in self.rows],
        }


def _gap_row(
    A: TrigSeries, A_bar: np.ndarray, eps: float, gamma0: float, T_max: float, n_base: int
) -> GapRow:
    fast = A.rescale(eps)
    h = fast_step(eps)
    n_steps = int(math.ceil(T_max / h))
    seps = h * np.arange(1, n_steps + 1)
    taus = recurrence_window(fast) * np.arange(n_base) / n_base

    flows = propagate_from(fast, taus, seps, h)
    averaged = np.stack([mat_exp(A_bar, s) for s in seps])

    weighted = np.exp(gamma0 * seps)[None, :] * propagator_norms(flows - averaged[None])
    i, j = np.unravel_index(int(np.argmax(weighted)), weighted.shape)
    row = GapRow(
        eps=float(eps),
        N_eps=float(weighted[i, j]),
        witness_t=float(taus[i] + seps[j]),
        witness_tau=float(taus[i]),
    )
    logger.debug(
        f"rescaled gap eps={eps}: N={row.N_eps:.6e} "
        f"at (t={row.witness_t:.4f}, tau={row.witness_tau:.4f})"
    )
    return row


def rescaled_gap(
    A: TrigSeries,
    A_bar: Any,
    eps_list: Sequence[float],
    gamma0: Optional[float] = None,
    T_max: float = 10.0,
    n_base: int = 32,
    certificate: Optional[DichotomyCertificate] = None,
    threads: int = 1,
) -> RescaledGapTable:
    """Tabulate N(eps) along an eps sweep.

    Args:
        A: Operator series
        A_bar: Its average; must be Hurwitz
        eps_list: Time scales; rows come back in decreasing order
        gamma0: Weight exponent; defaults to half the fitted rate of A_bar
        T_max: Largest separation t - tau sampled
        n_base: Base points per recurrence window of A(t / eps)
        certificate: Dichotomy certificate of A_bar, fitted when omitted

    Raises:
        HurwitzError: If A_bar is not Hurwitz.
        InvalidArgumentError: If gamma0 is not in (0, nu).
    """
    A_bar = as_operator(A_bar, A.shape[0], name="A_bar")
    report = hurwitz_check(A_bar)
    if not report.is_hurwitz:
        raise HurwitzError(
            f"hurwitz_check failed for A_bar: spectral abscissa {report.spectral_abscissa:.6g}",
            spectral_abscissa=report.spectral_abscissa,
        )
    if certificate is None:
        plan = SamplingPlan.covering(1.0, T_max=max(T_max, 20.0), n_base=1)
        certificate = fit_dichotomy(TrigSeries.constant(A_bar), plan)
    nu = certificate.nu
    gamma0 = 0.5 * nu if gamma0 is None else float(gamma0)
    if not 0.0 < gamma0 < nu:
        raise InvalidArgumentError(
            f"gamma0={gamma0} must lie in (0, nu={nu:.6g}) of the averaged flow", argument="gamma0"
        )
    if not eps_list:
        raise InvalidArgumentError("eps_list is empty", argument="eps_list")

    ordered = sorted((float(e) for e in eps_list), reverse=True)
    rows = ordered_map(lambda eps: _gap_row(A, A_bar, eps, gamma0, T_max, n_base), ordered, threads)
    return RescaledGapTable(gamma0=gamma0, nu_bar=nu, rows=rows)
