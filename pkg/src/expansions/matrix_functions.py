"""
Matrix Functions

Norm-scaled evaluation of sqrt(G) and 1/sqrt(G) for sparse SPD G:

    sqrt(G)   = ||G||^(1/2)  * sqrt(X)
    1/sqrt(G) = ||G||^(-1/2) / sqrt(X),    X = G / ||G||,

so every expansion works on a spectrum inside (0, 1].
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.expansions.base_expansion import BaseExpansion
from src.expansions.chebyshev import ChebyshevExpansion
from src.expansions.coefficients import (
    cpe_coefficients,
    cpe_order,
    cpe_tabulated,
    pae_coefficients,
    select_cpe_order,
    tse_coefficients,
)
from src.expansions.expansion_spec import ExpansionSpec, Kind, Method, Mode
from src.expansions.pade import PadeExpansion
from src.expansions.taylor import TaylorExpansion
from src.sparse.iterative import min_eigenvalue, spectral_norm
from src.sparse.matrices import DenseSymMatrix, SparseSymMatrix
from src.utils.config import CPE_SAFETY_FACTOR, DEFAULT_SEED, DEFAULT_TOL_MIN_EIG, DEFAULT_TOL_NORM
from src.utils.exceptions import (
    DimensionMismatchError,
    N0ClassViolationError,
    NotPositiveDefiniteError,
    UnavailableOrderError,
)

logger = logging.getLogger(__name__)

SymMatrix = Union[SparseSymMatrix, DenseSymMatrix]

# Coefficients per tabulated Chebyshev class.
TABULATED_TERMS = 20


@dataclass(frozen=True)
class ScaledOperand:
    """
    G together with its spectral norm; X = G / norm is never materialized
    except by dense().
    """

    original: SparseSymMatrix
    norm: float

    def __post_init__(self):
        if not self.norm > 0.0:
            raise NotPositiveDefiniteError(f"spectral norm {self.norm} is not positive")

    @classmethod
    def from_matrix(
        cls,
        G: SymMatrix,
        tol_norm: float = DEFAULT_TOL_NORM,
        seed: int = DEFAULT_SEED,
    ) -> "ScaledOperand":
        G = as_sparse_sym(G)
        estimate = spectral_norm(G, tol=tol_norm, seed=seed)
        logger.info(f"||G||_2 = {estimate.value:.12g} ({estimate.iterations} power iterations)")
        return cls(original=G, norm=estimate.value)

    @property
    def dim(self) -> int:
        return self.original.dim

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.original.matvec(x) / self.norm

    def dense(self) -> np.ndarray:
        return self.original.to_dense() / self.norm

    def prefactor(self, kind: Kind) -> float:
        """||G||^(1/2) for the square root, ||G||^(-1/2) for the inverse."""
        return float(self.norm ** Kind(kind).exponent)

    def min_scaled_eigenvalue(self, tol: float = DEFAULT_TOL_MIN_EIG, seed: int = DEFAULT_SEED) -> float:
        """
        Smallest eigenvalue of X, i.e. the reciprocal condition number of G.

        An exhausted inverse-iteration budget yields the last Rayleigh
        quotient, which never undershoots the true value.
        """
        return min_eigenvalue(self.original, tol=tol, seed=seed, accept_estimate=True).value / self.norm


def as_sparse_sym(G: SymMatrix) -> SparseSymMatrix:
    if isinstance(G, SparseSymMatrix):
        return G
    if isinstance(G, DenseSymMatrix):
        return SparseSymMatrix.from_dense(G.values)
    raise TypeError(f"expected a symmetric matrix, got {type(G).__name__}")


def make_expansion(spec: ExpansionSpec, n0: Optional[float] = None) -> BaseExpansion:
    """
    Build the evaluator for a spec.

    Args:
        spec: expansion to build
        n0: Chebyshev interval for CPE1 (overrides spec.n0)

    Raises:
        UnsupportedClassError: CPE2 with an untabulated class
        UnavailableOrderError: CPE2 beyond the tabulated coefficients
    """
    if spec.method is Method.TSE:
        return TaylorExpansion(tse_coefficients(spec.kind, spec.order))

    if spec.method is Method.PAE:
        return PadeExpansion(pae_coefficients(spec.order, spec.kind))

    if spec.method is Method.CPE2:
        if spec.order >= TABULATED_TERMS:
            raise UnavailableOrderError(
                f"CPE2 supports orders 0-{TABULATED_TERMS - 1}; order {spec.order} needs CPE1"
            )
        coefficients = cpe_tabulated(spec.kind, spec.n0_class).truncated(spec.order)
        return ChebyshevExpansion(coefficients, spec.n0_class)

    n0 = n0 if n0 is not None else spec.n0
    if n0 is None:
        raise ValueError("CPE1 needs n0; use build_expansion to compute it from the matrix")
    return ChebyshevExpansion(cpe_coefficients(spec.kind, n0, spec.order), n0)


def resolve_n0(operand: ScaledOperand, spec: ExpansionSpec, seed: int = DEFAULT_SEED) -> Optional[float]:
    """
    The Chebyshev interval actually used for operand.

    CPE1 takes spec.n0 or 0.95 times the smallest scaled eigenvalue; CPE2
    takes its class bound after the optional strict check. Other methods
    return None.

    Raises:
        N0ClassViolationError: strict CPE2 and the scaled spectrum dips below the class
    """
    if spec.method is Method.CPE1:
        if spec.n0 is not None:
            return spec.n0
        n0 = CPE_SAFETY_FACTOR * operand.min_scaled_eigenvalue(seed=seed)
        logger.info(f"CPE1 interval [{n0:.6g}, 1]")
        return n0

    if spec.method is Method.CPE2:
        if spec.strict_n0:
            actual = operand.min_scaled_eigenvalue(seed=seed)
            if actual < spec.n0_class:
                raise N0ClassViolationError(
                    f"scaled smallest eigenvalue {actual:.6g} is below the class bound {spec.n0_class:g}"
                )
            logger.info(f"Scaled smallest eigenvalue {actual:.6g} respects class {spec.n0_class:g}")
        return spec.n0_class

    return None


def build_expansion(operand: ScaledOperand, spec: ExpansionSpec, seed: int = DEFAULT_SEED) -> BaseExpansion:
    expansion = make_expansion(spec, resolve_n0(operand, spec, seed=seed))
    logger.info(f"Evaluating {expansion}")
    return expansion


def resolve_order(
    G: SymMatrix,
    method: Method,
    kind: Kind,
    delta: float,
    n0: Optional[float] = None,
    n0_class: Optional[float] = None,
    tol_norm: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
) -> int:
    """
    Chebyshev truncation order reaching relative error delta on G.

    CPE2 reads the class table; CPE1 uses select_cpe_order on the given or
    computed interval.

    Raises:
        UnavailableOrderError: the table cell is a dash or no order qualifies
        ValueError: method is not a Chebyshev method
    """
    method, kind = Method(method), Kind(kind)
    if method is Method.CPE2:
        order = cpe_order(kind, n0_class, delta)
        if order is None:
            raise UnavailableOrderError(
                f"no tabulated {kind.value} order for class {n0_class:g} at delta={delta:g}; use cpe1"
            )
        if order >= TABULATED_TERMS:
            raise UnavailableOrderError(
                f"delta={delta:g} at class {n0_class:g} needs {kind.value} order {order}, but CPE2 supports "
                f"orders 0-{TABULATED_TERMS - 1} only; use cpe1"
            )
        return order
    if method is Method.CPE1:
        if n0 is None:
            operand = ScaledOperand.from_matrix(G, tol_norm=tol_norm, seed=seed)
            n0 = CPE_SAFETY_FACTOR * operand.min_scaled_eigenvalue(seed=seed)
        return select_cpe_order(kind, n0, delta)
    raise ValueError(f"order selection by delta needs a Chebyshev method, got {method.value}")


def _identity_shortcut(G: SparseSymMatrix, kind: Kind) -> Optional[float]:
    # f(a I) = f(a) I exactly
    a = G.scalar_multiple_of_identity()
    if a is None:
        return None
    if a <= 0.0:
        raise NotPositiveDefiniteError(f"matrix equals {a:g} * I")
    return float(kind.scalar(a))


def matfun_dense(
    G: SymMatrix,
    spec: ExpansionSpec,
    tol_norm: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
    operand: Optional[ScaledOperand] = None,
) -> DenseSymMatrix:
    """
    Dense approximation of sqrt(G) or 1/sqrt(G).

    Args:
        G: SPD matrix
        spec: method, kind and order
        tol_norm: power-method tolerance for ||G||
        seed: seed of the power-method start vector
        operand: previously scaled G, to reuse its norm across calls

    Returns:
        DenseSymMatrix holding ||G||^(+-1/2) p(G / ||G||)
    """
    G = as_sparse_sym(G)
    scalar = _identity_shortcut(G, spec.kind)
    if scalar is not None:
        return DenseSymMatrix(scalar * np.eye(G.dim))

    if operand is None:
        operand = ScaledOperand.from_matrix(G, tol_norm=tol_norm, seed=seed)
    expansion = build_expansion(operand, spec, seed=seed)
    values = operand.prefactor(spec.kind) * expansion.evaluate_dense(operand.dense())
    return DenseSymMatrix(values)


def matfun_apply(
    G: SymMatrix,
    v: np.ndarray,
    spec: ExpansionSpec,
    tol_norm: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
    operand: Optional[ScaledOperand] = None,
) -> np.ndarray:
    """
    Compute f(G) v using matrix-vector products only.

    Raises:
        DimensionMismatchError: len(v) != dim
        ConvergenceError: inner CG failure (PAE)
    """
    G = as_sparse_sym(G)
    v = np.asarray(v, dtype=float)
    if v.shape != (G.dim,):
        raise DimensionMismatchError(f"vector of shape {v.shape} for a {G.dim}x{G.dim} matrix")

    scalar = _identity_shortcut(G, spec.kind)
    if scalar is not None:
        return scalar * v

    if operand is None:
        operand = ScaledOperand.from_matrix(G, tol_norm=tol_norm, seed=seed)
    expansion = build_expansion(operand, spec, seed=seed)
    return operand.prefactor(spec.kind) * expansion.apply(operand.matvec, v)


def matfun(
    G: SymMatrix,
    spec: ExpansionSpec,
    tol_norm: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
    operand: Optional[ScaledOperand] = None,
) -> DenseSymMatrix:
    """
    f(G) as a dense matrix in the mode named by spec.mode.

    Apply mode builds the result column by column from the action on unit
    vectors, without forming powers of G.
    """
    if spec.mode is Mode.DENSE:
        return matfun_dense(G, spec, tol_norm=tol_norm, seed=seed, operand=operand)

    G = as_sparse_sym(G)
    scalar = _identity_shortcut(G, spec.kind)
    if scalar is not None:
        return DenseSymMatrix(scalar * np.eye(G.dim))

    if operand is None:
        operand = ScaledOperand.from_matrix(G, tol_norm=tol_norm, seed=seed)
    expansion = build_expansion(operand, spec, seed=seed)
    prefactor = operand.prefactor(spec.kind)
    columns = [prefactor * expansion.apply(operand.matvec, e) for e in np.eye(G.dim)]
    return DenseSymMatrix(np.column_stack(columns))


def normalize_operator(
    T: np.ndarray,
    G_left: SymMatrix,
    G_right: SymMatrix,
    spec: ExpansionSpec,
    tol_norm: float = DEFAULT_TOL_NORM,
    seed: int = DEFAULT_SEED,
) -> np.ndarray:
    """
    Normalized operator G_left^(-1/2) T G_right^(-1/2).

    T may be rectangular (m x n) with G_left m x m and G_right n x n. The
    spec's kind is ignored: both sides use the inverse square root.

    Raises:
        DimensionMismatchError: if the dimensions do not conform
    """
    T = np.asarray(T, dtype=float)
    G_left, G_right = as_sparse_sym(G_left), as_sparse_sym(G_right)
    if T.ndim != 2 or T.shape != (G_left.dim, G_right.dim):
        raise DimensionMismatchError(
            f"T of shape {T.shape} does not conform with Grams of dimension {G_left.dim} and {G_right.dim}"
        )

    inverse = spec.with_kind(Kind.INVSQRT)
    left = matfun(G_left, inverse, tol_norm=tol_norm, seed=seed).values
    if G_right is G_left or G_right == G_left:
        right = left
    else:
        right = matfun(G_right, inverse, tol_norm=tol_norm, seed=seed).values
    return left @ T @ right


def scalar_error(
    kind: Kind,
    method: Method,
    order: int,
    n0: float,
    samples: int = 1000,
    n0_class: Optional[float] = None,
) -> float:
    """
    Relative sup-norm error max|p(x) - f(x)| / max|f(x)| over uniform samples of [n0, 1].

    CPE1 expands on [n0, 1]; CPE2 uses n0_class (default n0) as its class.
    """
    kind, method = Kind(kind), Method(method)
    if method is Method.CPE2 and n0_class is None:
        n0_class = n0
    spec = ExpansionSpec(
        method=method,
        kind=kind,
        order=order,
        n0=n0 if method is Method.CPE1 else None,
        n0_class=n0_class if method is Method.CPE2 else None,
    )
    x = np.linspace(n0, 1.0, samples)
    exact = kind.scalar(x)
    approximation = make_expansion(spec).evaluate_scalar(x)
    return float(np.max(np.abs(approximation - exact)) / np.max(np.abs(exact)))
