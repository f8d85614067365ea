"""
Gram Matrix Square Roots

Square roots and inverse square roots of sparse symmetric positive definite
Gram matrices by Taylor, Chebyshev and Pade expansions, with Gram assembly
from triangle meshes and an eigendecomposition oracle.
"""

__version__ = "0.1.0"

from .analytics import ConvergenceStudy, eig_sym, relative_error
from .expansions import ExpansionSpec, Kind, Method, Mode, matfun_apply, matfun_dense, normalize_operator
from .mesh import TriMesh, assemble_pyramid_gram, assemble_rwg_gram, load_mesh
from .sparse import DenseSymMatrix, SparseSymMatrix

__all__ = [
    "SparseSymMatrix",
    "DenseSymMatrix",
    "ExpansionSpec",
    "Kind",
    "Method",
    "Mode",
    "matfun_dense",
    "matfun_apply",
    "normalize_operator",
    "TriMesh",
    "load_mesh",
    "assemble_pyramid_gram",
    "assemble_rwg_gram",
    "ConvergenceStudy",
    "eig_sym",
    "relative_error",
]
