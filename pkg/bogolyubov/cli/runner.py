"""Scenario runner: executes the averaging experiments of one scenario in stage order.

Stages run sequentially and each reads only the outputs of earlier stages::

    certificates -> averaging -> dichotomy -> contraction -> gap
                 -> coupled_deviation -> law_sweep -> comparability

The certificate check is a precondition (a violation aborts the run); the
seven remaining stages each write one CSV artifact and return a
:class:`CheckResult`. ``summary.json`` collects every verdict.
"""

import csv
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np

from bogolyubov.averaging.contraction import (
    AVERAGING,
    BOUNDED_SOLUTION,
    ContractionReport,
    verify_contraction,
)
from bogolyubov.averaging.system import AveragedSystem, average_system
from bogolyubov.checks.base import CheckResult, Evidence, Severity
from bogolyubov.cli.config import SCHEMA_VERSION, ScenarioConfig
from bogolyubov.coefficients.certificates import CertificateReport, verify_certificates
from bogolyubov.coefficients.series import TrigSeries
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.core.linalg import hurwitz_check
from bogolyubov.core.types import BrownianTag, EquationTag
from bogolyubov.exceptions import HurwitzError, NotUniformlyStableError
from bogolyubov.flow.dichotomy import (
    DichotomyCertificate,
    DichotomySweep,
    SamplingPlan,
    fit_dichotomy,
    sweep_dichotomy,
)
from bogolyubov.flow.gap import LINEAR_DECAY_SLACK, rescaled_gap, scalar_gap_envelope
from bogolyubov.metrics.comparability import comparability_probe
from bogolyubov.metrics.sweep import LawSweepTable, law_convergence_sweep
from bogolyubov.sde.coupling import OracleMode, coupled_deviation, coupled_second_moment, default_burn_in
from bogolyubov.sde.ensemble import PathEnsemble, SolutionStatistics
from bogolyubov.sde.simulate import bounded_solution

logger = logging.getLogger(__name__)

STAGES = (
    "averaging",
    "dichotomy",
    "contraction",
    "gap",
    "coupled_deviation",
    "law_sweep",
    "comparability",
)
SUMMARY_FILE = "summary.json"
CONVERGENCE_FILE = "convergence.csv"

DICHOTOMY_COLUMNS = ("equation", "epsilon", "N", "nu", "rate_cap", "succeeded")
AVERAGING_COLUMNS = ("modulus", "T", "value", "envelope")
CONTRACTION_COLUMNS = ("equation", "inequality", "bound", "L", "margin", "passed", "N", "nu", "radius")
COUPLED_COLUMNS = (
    "epsilon",
    "sup_deviation",
    "deviation_se",
    "oracle_sup_deviation",
    "sup_second_moment",
    "second_moment_se",
    "radius_bound",
)
COMPARABILITY_COLUMNS = ("shift", "coefficient_distance", "law_distance", "in_hypothesis")
CONVERGENCE_COLUMNS = ("epsilon", "sup_deviation", "deviation_se", "sup_beta", "noise_floor")

# Statistical tolerance, in standard errors.
SE_FACTOR = 3.0
# First Brownian stream of the comparability probe; each ensemble it draws takes the next one.
PROBE_STREAM = 16


def radius_bound(radius: float, bias: float, moment_se: float) -> float:
    """Upper bound (r + bias)^2 + 3 SE on sup E|X|^2 of a truncated solution.

    ``bias`` bounds the L^2 distance to the untruncated solution, so it is
    added to r before squaring. For r >= 1/2 the result is at least
    r^2 + 3 SE + bias.
    """
    return (radius + bias) ** 2 + SE_FACTOR * moment_se


def artifact_name(stage: str) -> str:
    return f"{stage}.csv"


def _cell(value: Any) -> str:
    if value is None:
        return repr(math.nan)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


@dataclass(frozen=True)
class UniformDichotomy:
    """Worst-case (N, nu) pair over a sweep of fitted certificates."""

    N: float
    nu: float


@dataclass
class ConvergenceRow:
    eps: float
    sup_deviation: float
    deviation_se: float
    sup_beta: float
    noise_floor: float
    floor_tolerance: float


@dataclass
class ConvergenceTable:
    """Per-eps L^2 deviation and law distance of the rescaled vs averaged solution."""

    rows: list[ConvergenceRow] = field(default_factory=list)

    @property
    def deviation_decreasing(self) -> Optional[bool]:
        """Strictly decreasing deviation column; None for a single row."""
        if len(self.rows) < 2:
            return None
        values = [row.sup_deviation for row in self.rows]
        return all(b < a for a, b in zip(values, values[1:]))

    @property
    def beta_decreasing(self) -> Optional[bool]:
        """Decreasing beta column (a row at its noise floor counts); None for a single row."""
        if len(self.rows) < 2:
            return None
        return all(
            b.sup_beta < a.sup_beta or b.sup_beta <= b.floor_tolerance
            for a, b in zip(self.rows, self.rows[1:])
        )

    def to_csv(self, path: Path) -> Path:
        rows = [
            (r.eps, r.sup_deviation, r.deviation_se, r.sup_beta, r.noise_floor) for r in self.rows
        ]
        return _write_csv(Path(path), CONVERGENCE_COLUMNS, rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows": [row.__dict__ for row in self.rows],
            "deviation_decreasing": self.deviation_decreasing,
            "beta_decreasing": self.beta_decreasing,
        }


@dataclass
class RunContext:
    """Objects produced by earlier stages and consumed by later ones."""

    system: CoefficientSystem
    certificates: CertificateReport
    averaged: Optional[AveragedSystem] = None
    sweep: Optional[DichotomySweep] = None
    averaged_certificate: Optional[DichotomyCertificate] = None
    contraction: Optional[ContractionReport] = None
    averaged_contraction: Optional[ContractionReport] = None
    burn_in: Optional[float] = None
    gamma0: Optional[float] = None
    coupled: dict[float, SolutionStatistics] = field(default_factory=dict)
    law: Optional[LawSweepTable] = None


@dataclass
class RunResult:
    """Outcome of :meth:`ScenarioRunner.run_scenario`."""

    scenario: str
    output_dir: Path
    results: list[CheckResult]
    constants: dict[str, Any]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)


class ScenarioRunner:
    """Runs the stages of one scenario and writes their artifacts.

    Example usage:
        config = load_config("scenarios/linear_scalar_benchmark.yaml")
        result = ScenarioRunner(config).run_scenario()
        print(result.passed)
    """

    def __init__(self, config: ScenarioConfig, output_dir: Optional[Union[str, Path]] = None):
        """Initialize the runner.

        Args:
            config: Validated scenario
            output_dir: Artifact directory; ``config.output`` when omitted
        """
        self._config = config
        self._output_dir = Path(output_dir if output_dir is not None else config.output)

    @property
    def output_dir(self) -> Path:
        return self._output_dir

    def run_scenario(self) -> RunResult:
        """Execute every stage in order and write the CSVs and ``summary.json``.

        Raises:
            CertificateViolationError: If a declared certificate is beaten.
            HurwitzError: If the averaged operator is not Hurwitz.
            NotUniformlyStableError: If no swept eps admits a dichotomy.
            RefuseToRunError: If the bounded-solution inequality fails.
            NumericalError: On divergence or step-size failures.
        """
        config = self._config
        self._output_dir.mkdir(parents=True, exist_ok=True)
        logger.info(f"running scenario {config.name} (seed {config.seed}) into {self._output_dir}")

        ctx = self._preconditions()
        results = [
            self._averaging_stage(ctx),
            self._dichotomy_stage(ctx),
            self._contraction_stage(ctx),
            self._gap_stage(ctx),
            self._coupled_stage(ctx),
            self._law_stage(ctx),
            self._comparability_stage(ctx),
        ]
        for result in results:
            logger.info(str(result))

        constants = self._constants(ctx)
        self._save_summary(ctx, results, constants)
        return RunResult(
            scenario=config.name, output_dir=self._output_dir, results=results, constants=constants
        )

    def sweep_epsilon(self, eps: Optional[Sequence[float]] = None) -> ConvergenceTable:
        """Convergence table (eps, sup deviation, SE, sup beta, noise floor).

        Runs the preconditions, then the coupled and law sweeps only, and
        writes ``convergence.csv``.
        """
        if eps is not None:
            self._config = self._config.with_overrides(eps=list(eps))
        self._output_dir.mkdir(parents=True, exist_ok=True)

        ctx = self._preconditions()
        self._averaging_stage(ctx, write=False)
        self._dichotomy_stage(ctx, write=False)
        self._contraction_stage(ctx, write=False)
        self._coupled_stage(ctx, write=False)
        self._law_stage(ctx, write=False)

        floors = {row.eps: row for row in ctx.law.rows()}
        table = ConvergenceTable()
        for e in self._config.sweep.eps:
            sup, se = ctx.coupled[e].sup_deviation
            law_row = floors[e]
            table.rows.append(
                ConvergenceRow(e, sup, se, law_row.sup_beta, law_row.noise_floor, law_row.floor_tolerance)
            )
        table.to_csv(self._output_dir / CONVERGENCE_FILE)
        logger.info(
            f"eps sweep: deviation decreasing={table.deviation_decreasing}, "
            f"beta decreasing={table.beta_decreasing}"
        )
        return table

    def _preconditions(self) -> RunContext:
        config = self._config
        system = config.build_system()
        report = verify_certificates(system, config.certificate_samples, config.seed)
        logger.info(f"certificates hold on {report.sample_count} samples (worst {report.worst_ratio:.4f})")
        return RunContext(system=system, certificates=report)

    def _averaging_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        avg = average_system(ctx.system, seed=self._config.seed)
        hurwitz = hurwitz_check(avg.A_bar)
        if not hurwitz.is_hurwitz:
            logger.error(f"averaged operator of {ctx.system.name} is not Hurwitz")
            raise HurwitzError(
                f"hurwitz_check failed for A_bar: spectral abscissa {hurwitz.spectral_abscissa:.6g}",
                spectral_abscissa=hurwitz.spectral_abscissa,
            )
        ctx.averaged = avg

        evidence = [
            Evidence(
                "hurwitz_check",
                f"A_bar is Hurwitz with spectral abscissa {hurwitz.spectral_abscissa:.6g}",
                details={"spectral_abscissa": hurwitz.spectral_abscissa},
            )
        ]
        rows = []
        for label, modulus in zip(("omega", "omega1", "omega2"), avg.moduli):
            for T, value, envelope in zip(modulus.T, modulus.values, modulus.envelope):
                rows.append((label, float(T), float(value), float(envelope)))
            if modulus.vanishing or modulus.envelope[0] == 0:
                evidence.append(Evidence(label, f"{label} vanishes on the window grid"))
            else:
                evidence.append(
                    Evidence(
                        label,
                        f"{label} does not vanish on the window grid (last {modulus.envelope[-1]:.3e})",
                        Severity.WARN,
                    )
                )
        if write:
            _write_csv(self._artifact("averaging"), AVERAGING_COLUMNS, rows)
        return CheckResult.from_evidence(
            "averaging", evidence, {"spectral_abscissa": hurwitz.spectral_abscissa}
        )

    def _dichotomy_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        config = self._config
        horizon = config.sweep.dichotomy_horizon
        sweep = sweep_dichotomy(
            ctx.system.A, config.sweep.eps, T_max=horizon, threads=config.threads
        )
        if not sweep.successes:
            logger.error(f"no swept eps admits a dichotomy for {ctx.system.name}")
            raise NotUniformlyStableError(
                f"dichotomy fit failed for every eps in {config.sweep.eps}: {sweep.rows[0].error}"
            )
        plan = SamplingPlan.covering(1.0, T_max=horizon, n_base=1)
        averaged_cert = fit_dichotomy(TrigSeries.constant(ctx.averaged.A_bar), plan)
        ctx.sweep, ctx.averaged_certificate = sweep, averaged_cert

        evidence = []
        rows = []
        for row in sweep.rows:
            if row.succeeded:
                cert = row.certificate
                rows.append(("rescaled", row.eps, cert.N, cert.nu, cert.rate_cap, True))
                evidence.append(
                    Evidence(f"fit_eps_{row.eps:g}", f"N={cert.N:.4g}, nu={cert.nu:.4g}")
                )
            else:
                rows.append(("rescaled", row.eps, None, None, None, False))
                evidence.append(
                    Evidence(f"fit_eps_{row.eps:g}", row.error or "fit failed", Severity.ERROR)
                )
        rows.append(
            ("averaged", 0.0, averaged_cert.N, averaged_cert.nu, averaged_cert.rate_cap, True)
        )
        if write:
            _write_csv(self._artifact("dichotomy"), DICHOTOMY_COLUMNS, rows)
        metadata = {
            "alpha_observed": sweep.alpha_observed,
            "N": sweep.uniform_N,
            "nu": sweep.uniform_nu,
            "nu_spread": sweep.nu_spread,
            "N_bar": averaged_cert.N,
            "nu_bar": averaged_cert.nu,
        }
        return CheckResult.from_evidence("dichotomy", evidence, metadata)

    def _contraction_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        system, avg, sweep = ctx.system, ctx.averaged, ctx.sweep
        uniform = UniformDichotomy(N=sweep.uniform_N, nu=sweep.uniform_nu)
        reports = {
            "rescaled": verify_contraction(uniform, system.M, system.L),
            "averaged": verify_contraction(
                ctx.averaged_certificate,
                max(avg.F_bar.M, avg.G_bar.M),
                max(avg.F_bar.L, avg.G_bar.L),
            ),
        }
        for label, report in reports.items():
            if not report.check(BOUNDED_SOLUTION).passed:
                logger.error(f"{label} equation fails {BOUNDED_SOLUTION}")
            report.require()
        ctx.contraction, ctx.averaged_contraction = reports["rescaled"], reports["averaged"]
        burn_in = self._config.burn_in
        if burn_in.rule == "fixed":
            ctx.burn_in = burn_in.length
        else:
            ctx.burn_in = default_burn_in(*reports.values(), memory=burn_in.memory)

        evidence, rows = [], []
        for label, report in reports.items():
            for inequality in report.inequalities:
                rows.append(
                    (
                        label,
                        inequality.name,
                        inequality.bound,
                        inequality.lipschitz,
                        inequality.margin,
                        inequality.passed,
                        report.N,
                        report.nu,
                        report.radius,
                    )
                )
                if inequality.passed:
                    evidence.append(
                        Evidence(
                            inequality.name,
                            f"{label}: L={inequality.lipschitz:.4g} < {inequality.bound:.4g}",
                        )
                    )
                else:
                    # Averaging on the whole axis needs the AVERAGING inequality;
                    # the compatibility one only backs the probe.
                    severity = Severity.ERROR if inequality.name == AVERAGING else Severity.WARN
                    evidence.append(
                        Evidence(
                            inequality.name,
                            f"{label}: L={inequality.lipschitz:.4g} >= {inequality.bound:.4g}",
                            severity,
                        )
                    )
        if write:
            _write_csv(self._artifact("contraction"), CONTRACTION_COLUMNS, rows)
        metadata = {
            "N": uniform.N,
            "nu": uniform.nu,
            "r": ctx.contraction.radius,
            "burn_in": ctx.burn_in,
        }
        return CheckResult.from_evidence("contraction", evidence, metadata)

    def _gap_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        config = self._config
        table = rescaled_gap(
            ctx.system.A,
            ctx.averaged.A_bar,
            config.sweep.eps,
            gamma0=config.sweep.gamma0,
            T_max=config.sweep.gap_horizon,
            certificate=ctx.averaged_certificate,
            threads=config.threads,
        )
        ctx.gamma0 = table.gamma0
        if write:
            table.to_csv(self._artifact("gap"))
        evidence = [
            Evidence(f"N_eps_{row.eps:g}", f"N({row.eps:g}) = {row.N_eps:.6g}") for row in table.rows
        ]
        if ctx.system.A.is_constant:
            evidence.append(
                Evidence("gap_decreasing", "A is autonomous; N(eps) vanishes and makes no claim")
            )
        elif len(table.rows) > 1:
            decreasing = table.is_strictly_decreasing()
            evidence.append(
                Evidence(
                    "gap_decreasing",
                    "N(eps) strictly decreasing" if decreasing else "N(eps) is not strictly decreasing",
                    Severity.INFO if decreasing else Severity.ERROR,
                    {"values": table.values},
                )
            )
            if ctx.system.A.levitan is None:
                linear = table.decays_linearly()
                first, last = table.rows[0], table.rows[-1]
                evidence.append(
                    Evidence(
                        "gap_linear_decay",
                        f"N({last.eps:g}) = {last.N_eps:.4g} against "
                        f"{LINEAR_DECAY_SLACK:g} * ({last.eps:g}/{first.eps:g}) * N({first.eps:g})"
                        + ("" if linear else ": decays slower than eps"),
                        Severity.INFO if linear else Severity.ERROR,
                        {"slack": LINEAR_DECAY_SLACK},
                    )
                )
        violations = [] if ctx.system.A.is_constant else table.envelope_violations(ctx.system.A)
        for row, bound in violations:
            evidence.append(
                Evidence(
                    f"gap_envelope_eps_{row.eps:g}",
                    f"N({row.eps:g}) = {row.N_eps:.6g} exceeds e^gamma0 (e^(eps K) - 1) = {bound:.6g}",
                    Severity.ERROR,
                    {"N_eps": row.N_eps, "bound": bound},
                )
            )
        if not violations and not ctx.system.A.is_constant:
            if scalar_gap_envelope(ctx.system.A, table.rows[0].eps, table.gamma0) is not None:
                evidence.append(
                    Evidence("gap_envelope", "every N(eps) lies under e^gamma0 (e^(eps K) - 1)")
                )
        return CheckResult.from_evidence(
            "gap", evidence, {"gamma0": table.gamma0, "nu_bar": table.nu_bar}
        )

    def _coupled_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        config = self._config
        t_grid = config.grid.times()
        radius = ctx.contraction.radius
        evidence, rows, sups = [], [], []
        for eps in config.sweep.eps:
            dt = config.grid.dt_factor * eps
            stats = coupled_deviation(
                ctx.system,
                eps,
                t_grid,
                dt=dt,
                n_paths=config.grid.n_paths,
                seed=config.seed,
                contraction=ctx.contraction,
                averaged=ctx.averaged,
                averaged_contraction=ctx.averaged_contraction,
                burn_in=ctx.burn_in,
                threads=config.threads,
            )
            ctx.coupled[eps] = stats
            sup, se = stats.sup_deviation
            sups.append(sup)

            oracle = None
            if ctx.system.is_linear:
                curve = coupled_second_moment(
                    ctx.system, eps, t_grid, dt, ctx.burn_in, mode=OracleMode.EM, averaged=ctx.averaged
                )
                oracle = curve.sup_deviation
                within = abs(sup - oracle) <= SE_FACTOR * se + 1e-12
                evidence.append(
                    Evidence(
                        f"oracle_eps_{eps:g}",
                        f"sup E|X_eps - X_bar|^2 = {sup:.4e} vs oracle {oracle:.4e} (SE {se:.2e})",
                        Severity.INFO if within else Severity.ERROR,
                        {"measured": sup, "oracle": oracle, "se": se},
                    )
                )

            moment, moment_se = stats.sup_second_moment
            bias = ctx.contraction.truncation_bias(ctx.burn_in)
            bound = radius_bound(radius, bias, moment_se)
            evidence.append(
                Evidence(
                    f"radius_eps_{eps:g}",
                    f"sup E|X|^2 = {moment:.4g} against (r + bias)^2 + 3 SE = {bound:.4g} "
                    f"(L2 bias {bias:.3g} enters inside the square)",
                    Severity.INFO if moment <= bound else Severity.ERROR,
                    {"measured": moment, "bound": bound, "r": radius, "bias": bias},
                )
            )
            rows.append((eps, sup, se, oracle, moment, moment_se, bound))

        if ctx.system.is_autonomous:
            evidence.append(
                Evidence(
                    "deviation_decreasing",
                    "autonomous coefficients: rescaled and averaged equations coincide",
                )
            )
        elif len(sups) > 1:
            decreasing = all(b < a for a, b in zip(sups, sups[1:]))
            evidence.append(
                Evidence(
                    "deviation_decreasing",
                    "sup deviation strictly decreasing in eps"
                    if decreasing
                    else "sup deviation is not strictly decreasing in eps",
                    Severity.INFO if decreasing else Severity.ERROR,
                    {"values": sups},
                )
            )
        if write:
            _write_csv(self._artifact("coupled_deviation"), COUPLED_COLUMNS, rows)
        return CheckResult.from_evidence(
            "coupled_deviation", evidence, {"n_paths": config.grid.n_paths, "r": radius}
        )

    def _law_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        config = self._config
        table = law_convergence_sweep(
            ctx.system,
            config.sweep.eps,
            config.grid.times(),
            n_paths=config.grid.law_paths,
            seed=config.seed,
            contraction=ctx.contraction,
            averaged=ctx.averaged,
            averaged_contraction=ctx.averaged_contraction,
            dt_factor=config.grid.dt_factor,
            burn_in=ctx.burn_in,
            threads=config.threads,
        )
        ctx.law = table
        if write:
            table.to_csv(self._artifact("law_sweep"))

        evidence = []
        rows = table.rows()
        for row in rows:
            note = " (at noise floor)" if row.at_floor else ""
            evidence.append(
                Evidence(
                    f"beta_eps_{row.eps:g}",
                    f"sup beta = {row.sup_beta:.4g} at t={row.t_star:g}, floor {row.noise_floor:.4g} "
                    f"(tolerance {row.floor_tolerance:.4g}){note}",
                    details={"floor_tolerance": row.floor_tolerance, "at_floor": row.at_floor},
                )
            )
        if len(rows) > 1:
            decreasing = table.is_decreasing()
            evidence.append(
                Evidence(
                    "beta_decreasing",
                    "sup beta decreasing in eps" if decreasing else "sup beta is not decreasing in eps",
                    Severity.INFO if decreasing else Severity.ERROR,
                )
            )
        if not rows[-1].at_floor:
            evidence.append(
                Evidence(
                    "floor_reached",
                    f"smallest eps={rows[-1].eps:g} stays above its noise floor",
                    Severity.WARN,
                )
            )
        return CheckResult.from_evidence(
            "law_sweep", evidence, {"n_samples": config.grid.law_paths}
        )

    def _comparability_stage(self, ctx: RunContext, write: bool = True) -> CheckResult:
        config = self._config
        eps = config.sweep.eps[-1]
        if not config.sweep.periods:
            if write:
                _write_csv(self._artifact("comparability"), COMPARABILITY_COLUMNS, [])
            evidence = [
                Evidence("no_shifts", "no near-periods configured; the probe makes no claim", Severity.WARN)
            ]
            return CheckResult.from_evidence("comparability", evidence, {"eps": eps})

        streams = itertools.count(PROBE_STREAM)

        def provider(grid: np.ndarray) -> PathEnsemble:
            # Each ensemble draws its own stream so shifted laws are compared
            # across independent samples.
            stream = next(streams)
            return bounded_solution(
                ctx.system,
                EquationTag.rescaled(eps),
                grid,
                dt=config.grid.dt_factor * eps,
                n_paths=config.grid.n_paths,
                seed=config.seed,
                contraction=ctx.contraction,
                burn_in=ctx.burn_in,
                stream=stream,
                brownian=BrownianTag.fresh(stream),
                threads=config.threads,
            )

        report = comparability_probe(
            ctx.system.rescale(eps),
            provider,
            [eps * p for p in config.sweep.periods],
            window=config.sweep.probe_window,
            n_window=config.sweep.probe_points,
            grid_step=min(0.05, 0.1 * eps),
            seed=config.seed,
            threads=config.threads,
        )
        if write:
            rows = [
                (r.shift, r.coefficient_distance, r.law_distance, r.in_hypothesis)
                for r in report.rows
            ]
            _write_csv(self._artifact("comparability"), COMPARABILITY_COLUMNS, rows)

        evidence = [
            Evidence(
                f"shift_{r.shift:.6g}",
                f"d_n={r.coefficient_distance:.4g}, s_n={r.law_distance:.4g}"
                + ("" if r.in_hypothesis else " (outside hypothesis)"),
            )
            for r in report.rows
        ]
        if report.n_tested == 0:
            evidence.append(
                Evidence("no_tested_shift", "no shift satisfies the hypothesis", Severity.WARN)
            )
        else:
            evidence.append(
                Evidence(
                    "domination",
                    f"s_n <= c d_n + 1.5 floor with c={report.c:.4g}",
                    Severity.INFO if report.passed else Severity.ERROR,
                    {"c": report.c, "noise_floor": report.noise_floor},
                )
            )
        return CheckResult.from_evidence(
            "comparability", evidence, {"eps": eps, "c": report.c, "noise_floor": report.noise_floor}
        )

    def _constants(self, ctx: RunContext) -> dict[str, Any]:
        return {
            "N": ctx.sweep.uniform_N,
            "nu": ctx.sweep.uniform_nu,
            "gamma0": ctx.gamma0,
            "r": ctx.contraction.radius,
            "alpha_observed": ctx.sweep.alpha_observed,
            "burn_in": ctx.burn_in,
        }

    def _save_summary(
        self, ctx: RunContext, results: list[CheckResult], constants: dict[str, Any]
    ) -> Path:
        config = self._config
        summary = {
            "schema": SCHEMA_VERSION,
            "scenario": config.name,
            "seed": config.seed,
            "eps": list(config.sweep.eps),
            "constants": constants,
            "preconditions": {
                "certificates": ctx.certificates.to_dict(),
                "recurrence": ctx.system.recurrence.to_dict(),
            },
            "stages": [result.to_dict() for result in results],
            "passed": all(result.passed for result in results),
        }
        path = self._output_dir / SUMMARY_FILE
        with open(path, "w") as f:
            json.dump(_plain(summary), f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    def _artifact(self, stage: str) -> Path:
        return self._output_dir / artifact_name(stage)


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays so the summary serializes."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value
