"""
Sparse Core Module

Symmetric matrix storage and the iterative kernels every higher module uses.
"""

from .matrices import DenseSymMatrix, SparseSymMatrix, matvec
from .iterative import (
    NormEstimate,
    as_operator,
    cg_solve,
    estimate_condition,
    min_eigenvalue,
    spectral_norm,
)


__all__ = [
    "SparseSymMatrix",
    "DenseSymMatrix",
    "NormEstimate",
    "matvec",
    "as_operator",
    "spectral_norm",
    "min_eigenvalue",
    "cg_solve",
    "estimate_condition",
]
