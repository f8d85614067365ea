"""
Analytics Module

Eigendecomposition oracle, reference matrix functions, the relative error
metric and convergence studies of the expansions.
"""

from .convergence import ConvergenceStudy
from .oracle import (
    EigDecomposition,
    eig_sym,
    generalized_eigs,
    reference_invsqrt,
    reference_matfun,
    reference_sqrt,
    relative_error,
    spd_eig,
)

__all__ = [
    "ConvergenceStudy",
    "EigDecomposition",
    "eig_sym",
    "spd_eig",
    "reference_matfun",
    "reference_sqrt",
    "reference_invsqrt",
    "relative_error",
    "generalized_eigs",
]
