"""
Iterative Kernels

Power iteration, inverse power iteration and conjugate gradients on
symmetric operators. Every kernel accepts a SparseSymMatrix, a
DenseSymMatrix, a square ndarray / scipy sparse matrix, or a
(matvec, dim) pair, so the matrix-function evaluators can hand in implicit
operators such as a Pade denominator polynomial.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from src.sparse.matrices import DenseSymMatrix, SparseSymMatrix
from src.utils.config import (
    DEFAULT_MAX_ITER_MIN_EIG,
    DEFAULT_MAX_ITER_NORM,
    DEFAULT_SEED,
    DEFAULT_TOL_CG,
    DEFAULT_TOL_MIN_EIG,
    DEFAULT_TOL_NORM,
)
from src.utils.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
)

logger = logging.getLogger(__name__)

MatVec = Callable[[np.ndarray], np.ndarray]
Operator = Union[SparseSymMatrix, DenseSymMatrix, np.ndarray, sp.spmatrix, Tuple[MatVec, int]]


@dataclass(frozen=True)
class NormEstimate:
    """Result of an extreme-eigenvalue iteration."""

    value: float
    iterations: int
    residual: float


def as_operator(A: Operator) -> Tuple[MatVec, int]:
    """
    Normalize the accepted operator forms to a (matvec, dim) pair.

    Raises:
        DimensionMismatchError: for non-square input
    """
    if isinstance(A, (SparseSymMatrix, DenseSymMatrix)):
        return A.matvec, A.dim
    if isinstance(A, tuple):
        matvec, dim = A
        return matvec, int(dim)
    if sp.issparse(A) or isinstance(A, np.ndarray):
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {A.shape}")
        return (lambda x: A @ x), A.shape[0]
    raise TypeError(f"unsupported operator type {type(A).__name__}")


def _start_vector(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim)
    return x / np.linalg.norm(x)


def spectral_norm(
    A: Operator,
    tol: float = DEFAULT_TOL_NORM,
    max_iter: int = DEFAULT_MAX_ITER_NORM,
    seed: int = DEFAULT_SEED,
) -> NormEstimate:
    """
    Estimate ||A||_2 of a symmetric operator by power iteration.

    The estimate at step k is ||A x_k|| for the unit iterate x_k (the square
    root of the Rayleigh quotient of A^T A). It increases monotonically and
    converges to the largest eigenvalue magnitude, also for indefinite A.

    Args:
        A: symmetric operator
        tol: bound on the relative change between successive estimates
        max_iter: iteration budget
        seed: seed of the pseudorandom start vector

    Returns:
        NormEstimate with value, iterations used and final relative change

    Raises:
        ConvergenceError: budget exhausted; carries the best estimate
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    matvec, dim = as_operator(A)
    x = _start_vector(dim, seed)

    previous = None
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        y = matvec(x)
        value = float(np.linalg.norm(y))
        if value == 0.0:
            return NormEstimate(0.0, iteration, 0.0)
        if previous is not None:
            residual = abs(value - previous) / value
            if residual <= tol:
                logger.debug(f"Spectral norm {value:.16e} after {iteration} iterations")
                return NormEstimate(value, iteration, residual)
        previous = value
        x = y / value

    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (relative change {residual:.3e})",
        estimate=NormEstimate(previous, max_iter, residual),
        residual=residual,
        iterations=max_iter,
    )


def cg_solve(
    A: Operator,
    b: np.ndarray,
    tol: float = DEFAULT_TOL_CG,
    max_iter: Optional[int] = None,
    x0: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Solve A x = b for SPD A by conjugate gradients.

    On return ||A x - b||_2 <= tol * ||b||_2, checked against the true
    residual; the recursively updated residual is replaced by the true one
    whenever the two disagree.

    Args:
        A: SPD operator
        b: right-hand side
        tol: relative residual tolerance
        max_iter: iteration budget (default max(1000, 20 * dim))
        x0: starting guess (default zero)

    Raises:
        DimensionMismatchError: len(b) != dim
        NotPositiveDefiniteError: nonpositive curvature p^T A p encountered
        ConvergenceError: budget exhausted; carries the iterate and residual
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    matvec, dim = as_operator(A)
    b = np.asarray(b, dtype=float)
    if b.shape != (dim,):
        raise DimensionMismatchError(f"right-hand side of shape {b.shape} for dimension {dim}")
    if max_iter is None:
        max_iter = max(1000, 20 * dim)

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(dim)
    target = tol * b_norm

    x = np.zeros(dim) if x0 is None else np.array(x0, dtype=float)
    r = b - matvec(x)
    p = r.copy()
    rs = float(r @ r)

    for iteration in range(1, max_iter + 1):
        if np.sqrt(rs) <= target:
            true_residual = float(np.linalg.norm(b - matvec(x)))
            if true_residual <= target:
                logger.debug(f"CG converged in {iteration - 1} iterations (residual {true_residual:.3e})")
                return x
            r = b - matvec(x)
            p = r.copy()
            rs = float(r @ r)

        Ap = matvec(p)
        curvature = float(p @ Ap)
        if curvature <= 0.0:
            raise NotPositiveDefiniteError(f"CG found nonpositive curvature {curvature:.3e}; operator is not SPD")
        alpha = rs / curvature
        x += alpha * p
        r -= alpha * Ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new

    true_residual = float(np.linalg.norm(b - matvec(x)))
    if true_residual <= target:
        return x
    raise ConvergenceError(
        f"CG did not converge in {max_iter} iterations (relative residual {true_residual / b_norm:.3e})",
        estimate=x,
        residual=true_residual / b_norm,
        iterations=max_iter,
    )


def min_eigenvalue(
    A: Operator,
    tol: float = DEFAULT_TOL_MIN_EIG,
    max_iter: int = DEFAULT_MAX_ITER_MIN_EIG,
    seed: int = DEFAULT_SEED,
    cg_tol: float = DEFAULT_TOL_CG,
    accept_estimate: bool = False,
) -> NormEstimate:
    """
    Estimate the smallest eigenvalue of an SPD operator by inverse iteration.

    Each step solves A y = x with cg_solve, normalizes, and takes the
    Rayleigh quotient rho = x^T A x. The iteration stops once the
    eigen-residual ||A x - rho x|| is at most tol * rho, so some eigenvalue
    lies within tol * rho of the result. A repeated or tightly clustered
    smallest eigenvalue does not slow this test down the way the change of
    rho would.

    Args:
        A: SPD operator
        tol: eigen-residual bound relative to rho
        max_iter: outer iteration budget
        seed: seed of the pseudorandom start vector
        cg_tol: relative residual of the inner solves
        accept_estimate: on an exhausted budget, return the last Rayleigh
            quotient (an upper bound on the smallest eigenvalue) instead of
            raising

    Raises:
        ConvergenceError: inner CG failure, or outer budget exhausted without accept_estimate
        NotPositiveDefiniteError: nonpositive Rayleigh quotient
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    matvec, dim = as_operator(A)
    x = _start_vector(dim, seed)

    value = None
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        try:
            y = cg_solve((matvec, dim), x, tol=cg_tol)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"inner CG solve failed at inverse iteration {iteration}: {exc}",
                estimate=NormEstimate(value, iteration, residual) if value is not None else None,
                residual=exc.residual,
                iterations=iteration,
            ) from exc
        x = y / np.linalg.norm(y)
        Ax = matvec(x)
        value = float(x @ Ax)
        if value <= 0.0:
            raise NotPositiveDefiniteError(f"Rayleigh quotient {value:.3e} is not positive")
        residual = float(np.linalg.norm(Ax - value * x)) / value
        if residual <= tol:
            logger.debug(f"Smallest eigenvalue {value:.16e} after {iteration} iterations (residual {residual:.3e})")
            return NormEstimate(value, iteration, residual)

    estimate = NormEstimate(value, max_iter, residual)
    if accept_estimate:
        logger.warning(
            f"Inverse iteration stopped after {max_iter} iterations at eigen-residual {residual:.3e}; "
            f"using the Rayleigh quotient {value:.6g}"
        )
        return estimate
    raise ConvergenceError(
        f"inverse iteration did not converge in {max_iter} iterations (eigen-residual {residual:.3e})",
        estimate=estimate,
        residual=residual,
        iterations=max_iter,
    )


def estimate_condition(
    A: Operator,
    tol: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
) -> float:
    """Spectral condition number of an SPD operator, lambda_max / lambda_min."""
    largest = spectral_norm(A, tol=tol, seed=seed)
    smallest = min_eigenvalue(A, seed=seed, accept_estimate=True)
    condition = largest.value / smallest.value
    logger.info(f"Condition number estimate {condition:.6g}")
    return condition
