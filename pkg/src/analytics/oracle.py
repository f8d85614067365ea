"""
Reference Oracle

Dense symmetric eigendecomposition by cyclic Jacobi rotations, the
reference square roots built from it, the spectral relative error, and
generalized eigenvalues for checking normalized operators.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from src.expansions.expansion_spec import Kind
from src.sparse.iterative import spectral_norm
from src.sparse.matrices import DenseSymMatrix, SparseSymMatrix
from src.utils.config import DEFAULT_SEED, DEFAULT_TOL_NORM, JACOBI_MAX_SWEEPS
from src.utils.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[DenseSymMatrix, SparseSymMatrix, np.ndarray]

# Stop once the off-diagonal Frobenius mass is this small relative to ||A||_F.
JACOBI_TOL = 1e-14


@dataclass(frozen=True)
class EigDecomposition:
    """A = vectors @ diag(values) @ vectors.T with ascending values."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T

    def function(self, f) -> DenseSymMatrix:
        """U f(Lambda) U^T."""
        return DenseSymMatrix((self.vectors * f(self.values)) @ self.vectors.T)


def _dense(A: MatrixLike) -> np.ndarray:
    if isinstance(A, SparseSymMatrix):
        return A.to_dense()
    if isinstance(A, DenseSymMatrix):
        return np.array(A.values)
    if sp.issparse(A):
        A = A.toarray()
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"matrix must be square, got {A.shape}")
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(np.max(np.abs(A)), 1.0)):
        raise NotSymmetricError("eig_sym needs a symmetric matrix")
    return 0.5 * (A + A.T)


def _round_robin(n: int):
    """
    Pairings of the circle method: m - 1 rounds of m / 2 disjoint pairs
    (m = n rounded up to even) covering every index pair exactly once.
    """
    m = n + (n % 2)
    players = np.arange(m)
    rounds = []
    for _ in range(m - 1):
        p, q = players[: m // 2], players[m // 2 :][::-1]
        keep = (p < n) & (q < n)
        rounds.append((np.minimum(p, q)[keep], np.maximum(p, q)[keep]))
        players = np.concatenate([players[:1], np.roll(players[1:], 1)])
    return rounds


def eig_sym(A: MatrixLike, max_sweeps: int = JACOBI_MAX_SWEEPS, tol: float = JACOBI_TOL) -> EigDecomposition:
    """
    Eigendecomposition of a symmetric matrix by cyclic Jacobi.

    Every sweep visits all index pairs in round-robin order; the rotations of
    one round act on disjoint pairs and are applied together. Entries below
    eps * sqrt(|a_pp a_qq|) are set to zero instead of rotated.

    Args:
        A: symmetric matrix
        max_sweeps: sweep budget
        tol: target off-diagonal Frobenius norm relative to ||A||_F

    Returns:
        EigDecomposition with ascending eigenvalues

    Raises:
        ConvergenceError: sweep budget exhausted
    """
    a = _dense(A)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    eps = np.finfo(float).eps

    def off_norm() -> float:
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    rounds = _round_robin(n)
    for sweep in range(1, max_sweeps + 1):
        if off_norm() <= tol * scale:
            return _sorted(a, v)

        rotations = 0
        for p, q in rounds:
            apq = a[p, q]
            app, aqq = a[p, p], a[q, q]
            active = np.abs(apq) > eps * np.sqrt(np.abs(app * aqq))
            negligible = ~active & (apq != 0.0)
            if np.any(negligible):
                a[p[negligible], q[negligible]] = 0.0
                a[q[negligible], p[negligible]] = 0.0
            if not np.any(active):
                continue

            p, q = p[active], q[active]
            apq, app, aqq = apq[active], app[active], aqq[active]
            theta = (aqq - app) / (2.0 * apq)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * cols_p - s * cols_q
            a[:, q] = s * cols_p + c * cols_q
            a[p, q] = 0.0
            a[q, p] = 0.0

            vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vec_p - s * vec_q
            v[:, q] = s * vec_p + c * vec_q
            rotations += p.size

        logger.debug(f"Jacobi sweep {sweep}: {rotations} rotations, off-diagonal {off_norm():.3e}")
        if rotations == 0:
            return _sorted(a, v)

    if off_norm() <= tol * scale:
        return _sorted(a, v)
    raise ConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off_norm():.3e})",
        estimate=_sorted(a, v),
        residual=off_norm() / scale if scale else 0.0,
        iterations=max_sweeps,
    )


def _sorted(a: np.ndarray, v: np.ndarray) -> EigDecomposition:
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return EigDecomposition(values=values[order], vectors=v[:, order].copy())


def spd_eig(A: MatrixLike) -> EigDecomposition:
    """
    eig_sym of an SPD matrix.

    Raises:
        NotPositiveDefiniteError: a nonpositive eigenvalue
    """
    decomposition = eig_sym(A)
    if decomposition.values[0] <= 0.0:
        raise NotPositiveDefiniteError(f"smallest eigenvalue {decomposition.values[0]:.3e} is not positive")
    return decomposition


def reference_matfun(
    A: MatrixLike,
    kind: Kind,
    decomposition: Optional[EigDecomposition] = None,
) -> DenseSymMatrix:
    """
    Exact sqrt(A) or 1/sqrt(A) from the eigendecomposition.

    Args:
        A: SPD matrix
        kind: sqrt or inverse sqrt
        decomposition: spd_eig(A), when already available
    """
    if decomposition is None:
        decomposition = spd_eig(A)
    return decomposition.function(Kind(kind).scalar)


def reference_sqrt(A: MatrixLike) -> DenseSymMatrix:
    """U diag(sqrt(lambda)) U^T."""
    return reference_matfun(A, Kind.SQRT)


def reference_invsqrt(A: MatrixLike) -> DenseSymMatrix:
    """U diag(1 / sqrt(lambda)) U^T."""
    return reference_matfun(A, Kind.INVSQRT)


def relative_error(
    F_num: MatrixLike,
    F_ref: MatrixLike,
    tol: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
) -> float:
    """
    ||F_num - F_ref||_2 / ||F_ref||_2 with both norms from power iteration.

    A power iteration that runs out of budget still yields a usable lower
    bound; it is logged and used.

    Raises:
        DimensionMismatchError: shapes differ
        ValueError: F_ref is zero
    """
    numeric, reference = np.asarray(_as_array(F_num)), np.asarray(_as_array(F_ref))
    if numeric.shape != reference.shape:
        raise DimensionMismatchError(f"shapes {numeric.shape} and {reference.shape} differ")

    reference_norm = _norm(reference, tol, seed)
    if reference_norm == 0.0:
        raise ValueError("reference matrix is zero")
    return _norm(numeric - reference, tol, seed) / reference_norm


def _as_array(F: MatrixLike) -> np.ndarray:
    if isinstance(F, SparseSymMatrix):
        return F.to_dense()
    if isinstance(F, DenseSymMatrix):
        return F.values
    return np.asarray(F, dtype=float)


def _norm(F: np.ndarray, tol: float, seed: int) -> float:
    try:
        return spectral_norm(F, tol=tol, seed=seed).value
    except ConvergenceError as exc:
        logger.warning(f"Using the last power-iteration estimate: {exc}")
        return exc.estimate.value


def generalized_eigs(T: MatrixLike, G: MatrixLike) -> np.ndarray:
    """
    Eigenvalues of T x = lambda G x, ascending, via G^(-1/2) T G^(-1/2).
    """
    T = _dense(T)
    root = reference_invsqrt(G).values
    if T.shape != root.shape:
        raise DimensionMismatchError(f"T of shape {T.shape} for a Gram of shape {root.shape}")
    normalized = root @ T @ root
    return eig_sym(0.5 * (normalized + normalized.T)).values
