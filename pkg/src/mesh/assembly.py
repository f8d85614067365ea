"""
Gram Assembly

Gram matrices of the pyramid (hat) and RWG bases on a triangle mesh, and
the Galerkin push-through R^T G R that turns a fine-mesh Gram into the Gram
of a dual basis.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp

from src.mesh.topology import EdgeTopology, extract_edges
from src.mesh.trimesh import HALF_EDGE_HEADS, HALF_EDGE_OPPOSITE, HALF_EDGE_TAILS, TriMesh
from src.sparse.matrices import SparseSymMatrix
from src.utils.exceptions import DimensionMismatchError
from src.utils.io import read_matrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Symmetric 6-point rule, exact for polynomials of degree 4 (weights sum to 1).
QUADRATURE_BARYCENTRIC = np.array(
    [
        [0.108103018168070, 0.445948490915965, 0.445948490915965],
        [0.445948490915965, 0.108103018168070, 0.445948490915965],
        [0.445948490915965, 0.445948490915965, 0.108103018168070],
        [0.816847572980459, 0.091576213509771, 0.091576213509771],
        [0.091576213509771, 0.816847572980459, 0.091576213509771],
        [0.091576213509771, 0.091576213509771, 0.816847572980459],
    ]
)
QUADRATURE_WEIGHTS = np.array([0.223381589678011] * 3 + [0.109951743655322] * 3)

# Exact P1 mass matrix on a triangle of unit area.
PYRAMID_LOCAL = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0


def _assemble_lower(rows: np.ndarray, cols: np.ndarray, values: np.ndarray, dim: int) -> SparseSymMatrix:
    # Keep one copy of every symmetric pair; duplicates are summed by the container.
    keep = rows >= cols
    lower = sp.coo_matrix((values[keep], (rows[keep], cols[keep])), shape=(dim, dim))
    return SparseSymMatrix(lower, spd_asserted=True)


def assemble_pyramid_gram(mesh: TriMesh) -> SparseSymMatrix:
    """
    Gram matrix of the vertex hat functions, N_V x N_V.

    Each triangle of area A contributes A/6 on its diagonal and A/12 off it;
    the sum of all entries is the surface area.
    """
    local = mesh.areas[:, None, None] * PYRAMID_LOCAL
    rows = np.repeat(mesh.triangles[:, :, None], 3, axis=2)
    cols = np.repeat(mesh.triangles[:, None, :], 3, axis=1)
    gram = _assemble_lower(rows.ravel(), cols.ravel(), local.ravel(), mesh.n_vertices)
    logger.info(f"Assembled pyramid Gram {gram!r}")
    return gram


def assemble_rwg_gram(mesh: TriMesh, topology: Optional[EdgeTopology] = None) -> SparseSymMatrix:
    """
    Gram matrix of the RWG functions, N_E x N_E.

    On its plus triangle the function of edge n is (r - r_opp) / (2 A), on
    its minus triangle (r_opp - r) / (2 A), with no edge-length factor.
    Products of two functions are quadratic on each triangle and are
    integrated with the 6-point rule.

    Args:
        mesh: validated mesh
        topology: its interior edges (extracted when omitted)
    """
    if topology is None:
        topology = extract_edges(mesh)

    triangles = mesh.triangles
    corners = mesh.corners
    areas = mesh.areas

    slots = topology.half_edge_index
    signs = np.where(triangles[:, HALF_EDGE_TAILS] < triangles[:, HALF_EDGE_HEADS], 1.0, -1.0)
    signs = np.where(slots >= 0, signs, 0.0)
    opposite = corners[:, HALF_EDGE_OPPOSITE, :]

    points = np.einsum("qj,tjd->tqd", QUADRATURE_BARYCENTRIC, corners)
    offsets = points[:, None, :, :] - opposite[:, :, None, :]
    # int_T (r - p_k).(r - p_l) / (4 A^2) dA = (A / (4 A^2)) sum_q w_q (...)
    local = np.einsum("q,tkqd,tlqd->tkl", QUADRATURE_WEIGHTS, offsets, offsets) / (4.0 * areas[:, None, None])
    local *= signs[:, :, None] * signs[:, None, :]

    rows = np.repeat(slots[:, :, None], 3, axis=2).ravel()
    cols = np.repeat(slots[:, None, :], 3, axis=1).ravel()
    values = local.ravel()
    present = (rows >= 0) & (cols >= 0)
    gram = _assemble_lower(rows[present], cols[present], values[present], topology.n_edges)
    logger.info(f"Assembled RWG Gram {gram!r}")
    return gram


@dataclass(frozen=True)
class CombinationMatrix:
    """
    Sparse (fine x dual) matrix whose columns express each dual basis
    function in the fine-mesh basis.
    """

    matrix: sp.csc_matrix

    def __post_init__(self):
        matrix = sp.csc_matrix(self.matrix, dtype=float)
        matrix.eliminate_zeros()
        empty = np.flatnonzero(np.diff(matrix.indptr) == 0)
        if empty.size:
            raise DimensionMismatchError(f"combination matrix has {empty.size} empty columns (first: {empty[0]})")
        object.__setattr__(self, "matrix", matrix)

    @property
    def n_fine(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_dual(self) -> int:
        return self.matrix.shape[1]


def load_combination(path: PathLike) -> CombinationMatrix:
    """Read a combination matrix from a Matrix Market file."""
    data = read_matrix(path)
    combination = CombinationMatrix(sp.csc_matrix(data))
    logger.info(f"Loaded {combination.n_fine}x{combination.n_dual} combination matrix from {path}")
    return combination


def galerkin_transform(G_fine: SparseSymMatrix, R: CombinationMatrix) -> SparseSymMatrix:
    """
    Gram of the combined basis, R^T G_fine R.

    Raises:
        DimensionMismatchError: if R does not have G_fine.dim rows
    """
    if not isinstance(R, CombinationMatrix):
        R = CombinationMatrix(R)
    if R.n_fine != G_fine.dim:
        raise DimensionMismatchError(f"combination matrix has {R.n_fine} rows, fine Gram has dimension {G_fine.dim}")
    product = (R.matrix.T @ (G_fine.to_scipy() @ R.matrix)).tocsr()
    gram = SparseSymMatrix.from_lower_triangle(product, spd_asserted=G_fine.spd_asserted)
    logger.info(f"Galerkin transform {G_fine.dim} -> {gram.dim}")
    return gram
