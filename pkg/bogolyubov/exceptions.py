"""Custom exceptions for bogolyubov.

Every error carries at most one structured attribute (a field name, a witness,
an inequality name) so callers and the CLI can report the first violated
invariant without parsing messages.
"""

from typing import Any, Optional


class BogolyubovError(Exception):
    """Base exception for all bogolyubov errors."""

    pass


class InvalidArgumentError(BogolyubovError, ValueError):
    """Raised when an argument is malformed (non-finite, wrong tag, bad shape)."""

    def __init__(self, message: str, argument: Optional[str] = None):
        self.argument = argument
        super().__init__(message)


class PreconditionError(BogolyubovError):
    """Raised when a mathematical precondition of an operation does not hold."""

    pass


class HurwitzError(PreconditionError):
    """Raised when an averaged operator is required to be Hurwitz but is not."""

    def __init__(self, message: str, spectral_abscissa: float):
        self.spectral_abscissa = spectral_abscissa
        super().__init__(message)


class NumericalError(BogolyubovError):
    """Raised when a numerical procedure fails."""

    pass


class EigenSolverError(NumericalError):
    """Raised when the eigensolver does not converge."""

    pass


class StepSizeError(NumericalError):
    """Raised when an integration step is too coarse for the requested accuracy."""

    def __init__(self, message: str, step: Optional[float] = None):
        self.step = step
        super().__init__(message)


class DivergenceError(NumericalError):
    """Raised when a simulated path leaves the divergence guard."""

    def __init__(self, message: str, path_index: int, time: float, value: float):
        self.path_index = path_index
        self.time = time
        self.value = value
        super().__init__(message)


class ConsistencyError(NumericalError):
    """Raised when two results that must share a layout do not."""

    pass


class NotUniformlyStableError(BogolyubovError):
    """Raised when no positive decay rate dominates the sampled propagator."""

    def __init__(self, message: str, rate_cap: Optional[float] = None):
        self.rate_cap = rate_cap
        super().__init__(message)


class CertificateViolationError(BogolyubovError):
    """Raised when a sampled value breaks a certified bound or Lipschitz constant."""

    def __init__(self, message: str, witness: Optional[dict[str, Any]] = None):
        self.witness = witness or {}
        super().__init__(message)


class RefuseToRunError(BogolyubovError):
    """Raised when a contraction inequality needed for uniqueness fails."""

    def __init__(self, message: str, inequality: str):
        self.inequality = inequality
        super().__init__(message)


class ConfigError(BogolyubovError):
    """Raised when a scenario configuration fails to parse or validate."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


class ArtifactMissingError(BogolyubovError):
    """Raised when a report is requested for an incomplete artifact directory."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(message)
