"""Dense linear algebra: matrix exponentials, Hurwitz tests, Lyapunov solves."""

import logging
from typing import Any, NamedTuple

import numpy as np
import scipy.linalg

from bogolyubov.core.types import as_finite_scalar, as_operator, as_state_vector
from bogolyubov.exceptions import EigenSolverError, InvalidArgumentError, NumericalError, PreconditionError

logger = logging.getLogger(__name__)

LYAPUNOV_RTOL = 1e-10


class HurwitzReport(NamedTuple):
    """Outcome of a Hurwitz test; unpacks as ``(is_hurwitz, spectral_abscissa)``."""

    is_hurwitz: bool
    spectral_abscissa: float


def mat_exp(a: Any, t: float) -> np.ndarray:
    """Return exp(A t).

    Uses Pade scaling and squaring (``scipy.linalg.expm``).

    Raises:
        InvalidArgumentError: If ``A`` or ``t`` is not finite.
    """
    a = as_operator(a)
    t = as_finite_scalar(t, "t")
    if t == 0.0:
        return np.eye(a.shape[0])
    return scipy.linalg.expm(a * t)


def mat_exp_stack(a: Any) -> np.ndarray:
    """Return exp(A_k) for a stack of square matrices of shape (..., d, d).

    Raises:
        InvalidArgumentError: If the stack is not square or not finite.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InvalidArgumentError(f"expected a stack of square matrices, got shape {a.shape}", argument="a")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("matrix stack holds non-finite values", argument="a")
    return scipy.linalg.expm(a)


def operator_norm(a: Any) -> float:
    """Largest singular value of ``A``."""
    return float(np.linalg.norm(as_operator(a), 2))


def hurwitz_check(a: Any) -> HurwitzReport:
    """Test whether every eigenvalue of ``A`` has negative real part.

    Raises:
        EigenSolverError: If the eigensolver fails to converge.
    """
    a = as_operator(a)
    try:
        eigenvalues = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(
            f"eigenvalues of {a.shape[0]}x{a.shape[0]} operator did not converge "
            f"(norm {np.linalg.norm(a):.3e}): {exc}"
        ) from exc
    abscissa = float(np.max(eigenvalues.real))
    return HurwitzReport(abscissa < 0.0, abscissa)


def _diffusion_gram(g_bar: Any, dimension: int) -> np.ndarray:
    g = np.asarray(g_bar, dtype=np.float64)
    if g.ndim <= 1:
        g = as_state_vector(g, dimension, name="g_bar")
        return np.outer(g, g)
    if g.shape[0] != dimension or not np.all(np.isfinite(g)):
        raise PreconditionError(f"g_bar must have {dimension} finite rows, got shape {g.shape}")
    return g @ g.T


def lyapunov_stationary_cov(a_bar: Any, g_bar: Any) -> np.ndarray:
    """Solve A P + P A^T + g g^T = 0 for the stationary covariance P.

    The equation is assembled as a d^2 x d^2 Kronecker system and solved
    densely, followed by one step of iterative refinement.

    Args:
        a_bar: Hurwitz drift matrix
        g_bar: Diffusion vector (one noise channel) or d x k matrix

    Returns:
        Symmetric positive-semidefinite covariance matrix.

    Raises:
        PreconditionError: If ``a_bar`` is not Hurwitz.
        NumericalError: If the residual misses the accuracy target.
    """
    a = as_operator(a_bar, name="A_bar")
    d = a.shape[0]
    report = hurwitz_check(a)
    if not report.is_hurwitz:
        raise PreconditionError(
            f"Lyapunov solve needs a Hurwitz A_bar (spectral abscissa {report.spectral_abscissa})"
        )
    q = _diffusion_gram(g_bar, d)
    identity = np.eye(d)
    kron = np.kron(a, identity) + np.kron(identity, a)
    rhs = -q.reshape(-1)
    p = np.linalg.solve(kron, rhs)
    p = p + np.linalg.solve(kron, rhs - kron @ p)
    cov = p.reshape(d, d)
    cov = 0.5 * (cov + cov.T)

    residual = float(np.linalg.norm(a @ cov + cov @ a.T + q, "fro"))
    bound = LYAPUNOV_RTOL * (1.0 + float(np.linalg.norm(q, "fro")))
    if residual > bound:
        raise NumericalError(f"Lyapunov residual {residual:.3e} exceeds {bound:.3e}")
    logger.debug(f"Lyapunov solve d={d}: residual {residual:.2e}")
    return cov


def stationary_mean(a_bar: Any, f_bar: Any) -> np.ndarray:
    """Fixed point -A^{-1} f of the averaged linear drift."""
    a = as_operator(a_bar, name="A_bar")
    f = as_state_vector(f_bar, a.shape[0], name="f_bar")
    return -np.linalg.solve(a, f)


def psd_sqrt(cov: np.ndarray) -> np.ndarray:
    """Return S with S S^T = cov, clipping round-off negative eigenvalues."""
    cov = 0.5 * (cov + cov.T)
    eigenvalues, vectors = np.linalg.eigh(cov)
    return vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))
