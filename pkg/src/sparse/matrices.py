"""
Symmetric Matrices

Immutable sparse and dense symmetric matrix containers.

SparseSymMatrix keeps one canonical form: the lower triangle in sorted CSR
layout, with explicit zeros and duplicates removed. The full operator is
reconstructed once by mirroring the stored values, so A = A^T holds bit for
bit.
"""

from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from src.utils.exceptions import DimensionMismatchError, NotSymmetricError

ArrayLike = Union[np.ndarray, list, tuple]

# Relative asymmetry DenseSymMatrix absorbs silently by symmetrizing.
DENSE_SYMMETRY_TOL = 1e-8


class SparseSymMatrix:
    """
    Compressed sparse symmetric matrix.

    Only the lower triangle is stored canonically; matvec uses both the
    stored and the mirrored entries. Instances are never mutated after
    construction, so sharing them between threads is safe.
    """

    def __init__(self, lower: sp.spmatrix, spd_asserted: bool = False):
        """
        Build from a lower-triangular sparse matrix.

        Args:
            lower: square sparse matrix; entries above the diagonal must be absent
            spd_asserted: whether the producer claims the matrix is SPD
        """
        lower = sp.csr_matrix(lower, dtype=float, copy=True)
        lower.eliminate_zeros()
        if lower.shape[0] != lower.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {lower.shape}")
        if lower.shape[0] < 1:
            raise DimensionMismatchError("matrix dimension must be positive")
        if sp.triu(lower, k=1).nnz:
            raise NotSymmetricError("canonical storage takes the lower triangle only")

        lower.sum_duplicates()
        lower.eliminate_zeros()
        lower.sort_indices()
        self._lower = lower

        strict = sp.tril(lower, k=-1)
        full = sp.csr_matrix(lower + strict.T)
        full.sort_indices()
        self._full = full
        self._diagonal = lower.diagonal()
        self._diagonal.setflags(write=False)
        self.spd_asserted = spd_asserted

    @classmethod
    def from_lower_triangle(cls, matrix: sp.spmatrix, spd_asserted: bool = False) -> "SparseSymMatrix":
        """Keep the lower triangle of matrix and mirror it."""
        return cls(sp.tril(sp.csr_matrix(matrix, dtype=float)), spd_asserted=spd_asserted)

    @classmethod
    def from_scipy(cls, matrix: sp.spmatrix, spd_asserted: bool = False) -> "SparseSymMatrix":
        """
        Build from a full sparse matrix that must be exactly symmetric.

        Raises:
            NotSymmetricError: if matrix differs from its transpose anywhere
        """
        matrix = sp.csr_matrix(matrix, dtype=float)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {matrix.shape}")
        difference = matrix - matrix.T
        difference.eliminate_zeros()
        if difference.nnz:
            raise NotSymmetricError(
                f"matrix is not symmetric ({difference.nnz} mismatched entries)"
            )
        return cls.from_lower_triangle(matrix, spd_asserted=spd_asserted)

    @classmethod
    def from_dense(cls, values: ArrayLike, spd_asserted: bool = False) -> "SparseSymMatrix":
        """Build from a dense array that must be exactly symmetric."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {values.shape}")
        if not np.array_equal(values, values.T):
            raise NotSymmetricError("dense input is not exactly symmetric")
        return cls.from_lower_triangle(sp.csr_matrix(values), spd_asserted=spd_asserted)

    @classmethod
    def identity(cls, dim: int) -> "SparseSymMatrix":
        return cls(sp.identity(dim, format="csr"), spd_asserted=True)

    @classmethod
    def diagonal_matrix(cls, values: ArrayLike) -> "SparseSymMatrix":
        values = np.asarray(values, dtype=float)
        return cls(sp.diags(values, format="csr"), spd_asserted=bool(np.all(values > 0)))

    @property
    def dim(self) -> int:
        return self._lower.shape[0]

    @property
    def shape(self):
        return self._lower.shape

    @property
    def nnz(self) -> int:
        """Number of stored (lower-triangle) entries."""
        return self._lower.nnz

    @property
    def lower(self) -> sp.csr_matrix:
        return self._lower

    @property
    def diagonal(self) -> np.ndarray:
        return self._diagonal

    def to_scipy(self) -> sp.csr_matrix:
        """Full symmetric matrix as CSR. Callers must not modify it."""
        return self._full

    def to_dense(self) -> np.ndarray:
        return self._full.toarray()

    def matvec(self, x: ArrayLike) -> np.ndarray:
        """
        Compute A x.

        Raises:
            DimensionMismatchError: if len(x) != dim
        """
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.dim:
            raise DimensionMismatchError(f"vector of length {x.shape[0]} for a {self.dim}x{self.dim} matrix")
        return self._full @ x

    def scalar_multiple_of_identity(self) -> Optional[float]:
        """
        Return a if the matrix equals a*I exactly, otherwise None.

        Holds for every 1x1 matrix.
        """
        if self._lower.nnz != self.dim or np.count_nonzero(self._diagonal) != self.dim:
            return None
        if not np.all(self._diagonal == self._diagonal[0]):
            return None
        return float(self._diagonal[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseSymMatrix):
            return NotImplemented
        if self.shape != other.shape or self.nnz != other.nnz:
            return False
        return (
            np.array_equal(self._lower.indptr, other._lower.indptr)
            and np.array_equal(self._lower.indices, other._lower.indices)
            and np.array_equal(self._lower.data, other._lower.data)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseSymMatrix(dim={self.dim}, nnz={self.nnz}, spd_asserted={self.spd_asserted})"


class DenseSymMatrix:
    """
    Dense symmetric matrix.

    Values are symmetrized on construction, absorbing rounding-level
    asymmetry from products of commuting matrices.
    """

    def __init__(self, values: ArrayLike):
        values = np.array(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {values.shape}")
        scale = np.max(np.abs(values)) if values.size else 0.0
        if scale > 0 and np.max(np.abs(values - values.T)) > DENSE_SYMMETRY_TOL * scale:
            raise NotSymmetricError("dense matrix is not symmetric")
        values = 0.5 * (values + values.T)
        values.setflags(write=False)
        self._values = values

    @property
    def dim(self) -> int:
        return self._values.shape[0]

    @property
    def shape(self):
        return self._values.shape

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._values
        return self._values.astype(dtype)

    def matvec(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.dim:
            raise DimensionMismatchError(f"vector of length {x.shape[0]} for a {self.dim}x{self.dim} matrix")
        return self._values @ x

    def __repr__(self) -> str:
        return f"DenseSymMatrix(dim={self.dim})"


def matvec(A: SparseSymMatrix, x: ArrayLike) -> np.ndarray:
    """Compute A x using both the stored and the mirrored entries."""
    return A.matvec(x)
