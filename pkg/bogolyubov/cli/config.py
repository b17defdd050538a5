"""Scenario configuration files.

A scenario is a YAML document validated against the ``bogolyubov/1`` schema.
Unknown keys are errors at every level. Matrices and vectors are nested
lists; a harmonic without ``cos`` or ``sin`` gets zeros of the base shape.

Example::

    schema: bogolyubov/1
    name: linear_scalar_benchmark
    dimension: 1
    recurrence: {tag: quasi_periodic, frequencies: [1.0, 1.4142135623730951]}
    system:
      A:
        base: [[-1.0]]
        harmonics: [{frequency: 1.0, cos: [[0.5]]}]
      F:
        offset: {base: [0.0], harmonics: [{frequency: 1.4142135623730951, cos: [1.0]}]}
        certificate: {M: 1.0, L: 0.0}
      G:
        offset: {base: [1.0]}
        certificate: {M: 1.0, L: 0.0}
    sweep: {eps: [0.2, 0.1, 0.05]}
    grid: {t_end: 2.0, n_times: 5, n_paths: 2000}
"""

import logging
from pathlib import Path
from typing import Any, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from bogolyubov.coefficients.fields import Certificate, Nonlinearity, NonlinearTerm, StateField
from bogolyubov.coefficients.recurrence import RecurrenceClass, RecurrenceTag
from bogolyubov.coefficients.series import DecayTerm, Harmonic, TrigSeries
from bogolyubov.coefficients.system import CoefficientSystem
from bogolyubov.exceptions import BogolyubovError, ConfigError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "bogolyubov/1"
MAX_DT_FACTOR = 0.1

Array = Union[float, list[Any]]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class HarmonicConfig(_Strict):
    """One harmonic cos(frequency u), sin(frequency u) with array coefficients."""

    frequency: float = Field(gt=0)
    cos: Optional[Array] = None
    sin: Optional[Array] = None


class DecayConfig(_Strict):
    coef: Array
    rate: float = Field(gt=0)


class SeriesConfig(_Strict):
    """Closed-form time profile: base + harmonics + decay + Levitan factor."""

    base: Array
    harmonics: list[HarmonicConfig] = Field(default_factory=list)
    decay: Optional[DecayConfig] = None
    levitan: Optional[Array] = None

    def build(self) -> TrigSeries:
        base = np.asarray(self.base, dtype=np.float64)
        harmonics = tuple(
            Harmonic(
                frequency=h.frequency,
                cos_coef=np.zeros_like(base) if h.cos is None else np.asarray(h.cos, dtype=np.float64),
                sin_coef=np.zeros_like(base) if h.sin is None else np.asarray(h.sin, dtype=np.float64),
            )
            for h in self.harmonics
        )
        decay = None if self.decay is None else DecayTerm(coef=np.asarray(self.decay.coef), rate=self.decay.rate)
        levitan = None if self.levitan is None else np.asarray(self.levitan, dtype=np.float64)
        return TrigSeries(base=base, harmonics=harmonics, decay=decay, levitan=levitan)


class TermConfig(_Strict):
    """Nonlinear term coefficient(t) * kind(x), applied componentwise."""

    kind: Nonlinearity
    coefficient: Union[SeriesConfig, list[float]]

    def build(self) -> NonlinearTerm:
        if isinstance(self.coefficient, SeriesConfig):
            profile = self.coefficient.build()
        else:
            profile = TrigSeries.constant(self.coefficient)
        return NonlinearTerm(kind=self.kind, profile=profile)


class CertificateConfig(_Strict):
    M: float = Field(ge=0)
    L: float = Field(ge=0)


class FieldConfig(_Strict):
    """Drift or diffusion field with its declared (M, L) certificate."""

    offset: SeriesConfig
    linear: Optional[SeriesConfig] = None
    terms: list[TermConfig] = Field(default_factory=list)
    certificate: CertificateConfig

    def build(self) -> StateField:
        return StateField(
            offset=self.offset.build(),
            certificate=Certificate(M=self.certificate.M, L=self.certificate.L),
            linear=None if self.linear is None else self.linear.build(),
            terms=tuple(term.build() for term in self.terms),
        )


class SystemConfig(_Strict):
    A: SeriesConfig
    F: FieldConfig
    G: FieldConfig


class RecurrenceConfig(_Strict):
    tag: RecurrenceTag
    period: Optional[float] = None
    frequencies: list[float] = Field(default_factory=list)

    def build(self) -> RecurrenceClass:
        return RecurrenceClass(tag=self.tag, period=self.period, frequencies=tuple(self.frequencies))


class SweepConfig(_Strict):
    """eps sweep and stage parameters.

    ``periods`` are shifts of the unscaled coefficients (near-periods) used by
    the comparability probe; they are rescaled by eps before use.
    """

    eps: list[float] = Field(min_length=1)
    gamma0: Optional[float] = Field(default=None, gt=0)
    periods: list[float] = Field(default_factory=list)
    probe_window: float = Field(default=1.0, gt=0)
    probe_points: int = Field(default=11, ge=2)
    gap_horizon: float = Field(default=10.0, gt=0)
    dichotomy_horizon: float = Field(default=20.0, gt=0)

    @model_validator(mode="after")
    def validate_eps(self) -> "SweepConfig":
        if any(e <= 0 for e in self.eps):
            raise ValueError(f"eps values must be positive, got {self.eps}")
        if any(b >= a for a, b in zip(self.eps, self.eps[1:])):
            raise ValueError(f"eps values must be strictly decreasing, got {self.eps}")
        if any(p <= 0 for p in self.periods):
            raise ValueError(f"periods must be positive, got {self.periods}")
        return self


class GridConfig(_Strict):
    """Output time grid, step rule and ensemble sizes; dt = dt_factor * eps.

    ``n_law_paths`` sizes each law of the law sweep and defaults to ``n_paths``.
    """

    t_start: float = 0.0
    t_end: float
    n_times: int = Field(ge=2)
    dt_factor: float = Field(default=0.1, gt=0, le=MAX_DT_FACTOR)
    n_paths: int = Field(ge=4)
    n_law_paths: Optional[int] = Field(default=None, ge=4)

    @model_validator(mode="after")
    def validate_range(self) -> "GridConfig":
        if self.t_end <= self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        return self

    @property
    def law_paths(self) -> int:
        return self.n_paths if self.n_law_paths is None else self.n_law_paths

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_times)


class BurnInConfig(_Strict):
    """Burn-in rule: the memory horizon ln(N / memory) / nu, or a fixed length."""

    rule: Literal["memory_horizon", "fixed"] = "memory_horizon"
    memory: float = Field(default=0.01, gt=0, le=0.01)
    length: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def validate_length(self) -> "BurnInConfig":
        if self.rule == "fixed" and self.length is None:
            raise ValueError("burn_in.length is required with rule 'fixed'")
        return self


class ScenarioConfig(_Strict):
    """Top-level scenario document."""

    schema_version: str = Field(alias="schema")
    name: str = Field(min_length=1)
    dimension: int = Field(ge=1)
    recurrence: RecurrenceConfig
    eps0: float = Field(default=1.0, gt=0)
    system: SystemConfig
    sweep: SweepConfig
    grid: GridConfig
    burn_in: BurnInConfig = Field(default_factory=BurnInConfig)
    seed: int = Field(default=0, ge=0)
    output: str = "runs"
    threads: int = Field(default=1, ge=1)
    certificate_samples: int = Field(default=4096, ge=1)

    @model_validator(mode="after")
    def validate_scenario(self) -> "ScenarioConfig":
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"schema must be '{SCHEMA_VERSION}', got '{self.schema_version}'")
        over = [e for e in self.sweep.eps if e > self.eps0]
        if over:
            raise ValueError(f"sweep.eps values {over} exceed eps0={self.eps0}")
        return self

    def with_overrides(
        self,
        eps: Optional[list[float]] = None,
        seed: Optional[int] = None,
        output: Optional[str] = None,
        threads: Optional[int] = None,
    ) -> "ScenarioConfig":
        """Apply command-line overrides and re-validate."""
        data = self.model_dump(by_alias=True)
        if eps is not None:
            data["sweep"]["eps"] = list(eps)
        if seed is not None:
            data["seed"] = seed
        if output is not None:
            data["output"] = output
        if threads is not None:
            data["threads"] = threads
        return parse_config(data)

    def build_system(self) -> CoefficientSystem:
        """The coefficient system the scenario declares.

        Raises:
            ConfigError: If shapes disagree with ``dimension`` or the
                coefficients fall outside the declared recurrence class.
        """
        try:
            system = CoefficientSystem(
                A=self.system.A.build(),
                F=self.system.F.build(),
                G=self.system.G.build(),
                recurrence=self.recurrence.build(),
                eps0=self.eps0,
                name=self.name,
            )
        except BogolyubovError as exc:
            raise ConfigError(f"system: {exc}", field="system") from exc
        if system.dimension != self.dimension:
            raise ConfigError(
                f"system has dimension {system.dimension}, declared {self.dimension}",
                field="dimension",
            )
        conflicts = system.check_recurrence()
        if conflicts:
            raise ConfigError(f"recurrence: {conflicts[0]}", field="recurrence")
        return system


def _first_error(exc: ValidationError) -> tuple[str, str]:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error["loc"]) or "<root>"
    return location, error["msg"]


def parse_config(data: Any) -> ScenarioConfig:
    """Validate an already-parsed document.

    Raises:
        ConfigError: Naming the first offending field.
    """
    if not isinstance(data, dict):
        raise ConfigError("scenario document must be a mapping", field="<root>")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        location, message = _first_error(exc)
        raise ConfigError(f"{location}: {message}", field=location) from exc


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario file.

    Raises:
        ConfigError: If the file is missing, is not valid YAML, or fails
            validation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"scenario file not found: {path}", field="config")
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}", field="config") from exc
    config = parse_config(data)
    logger.debug(f"loaded scenario {config.name} from {path}")
    return config


def shipped_scenarios() -> list[str]:
    """Names of the scenarios bundled with the package."""
    return sorted(p.stem for p in _scenario_dir().glob("*.yaml"))


def shipped_scenario_path(name: str) -> Path:
    """Path of a bundled scenario.

    Raises:
        ConfigError: If no scenario has that name.
    """
    path = _scenario_dir() / f"{name}.yaml"
    if not path.is_file():
        raise ConfigError(
            f"unknown scenario '{name}'; shipped: {', '.join(shipped_scenarios())}", field="config"
        )
    return path


def _scenario_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "scenarios"
