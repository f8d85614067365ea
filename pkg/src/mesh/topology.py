"""
Edge Topology

Interior edges of a triangle mesh with the triangle pair that supports the
RWG function of each edge.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.mesh.trimesh import HALF_EDGE_OPPOSITE, TriMesh, half_edges, undirected_edges

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeTopology:
    """
    Interior edges as parallel arrays of length N_E.

    Edge n joins v_a[n] < v_b[n]. t_plus[n] is the triangle that traverses
    it as v_a -> v_b, t_minus[n] the one that traverses v_b -> v_a;
    opp_plus[n] and opp_minus[n] are their vertices opposite the edge.
    half_edge_index has shape (N_P, 3) and maps half-edge k of each
    triangle to its interior edge, or -1 on the boundary.
    """

    v_a: np.ndarray
    v_b: np.ndarray
    t_plus: np.ndarray
    t_minus: np.ndarray
    opp_plus: np.ndarray
    opp_minus: np.ndarray
    half_edge_index: np.ndarray
    n_boundary: int = 0

    @property
    def n_edges(self) -> int:
        return len(self.v_a)

    def __len__(self) -> int:
        return self.n_edges

    @property
    def edges(self) -> np.ndarray:
        """Rows (v_a, v_b, t_plus, t_minus, opp_plus, opp_minus)."""
        return np.column_stack([self.v_a, self.v_b, self.t_plus, self.t_minus, self.opp_plus, self.opp_minus])


def extract_edges(mesh: TriMesh) -> EdgeTopology:
    """
    Enumerate the interior edges of a validated mesh in sorted (v_a, v_b) order.

    For a closed mesh N_E = 3 N_P / 2. Boundary edges carry no RWG function.
    """
    triangles = mesh.triangles
    edges, inverse, counts = undirected_edges(triangles)
    interior = counts == 2

    edge_index = np.full(len(edges), -1, dtype=np.int64)
    edge_index[interior] = np.arange(np.count_nonzero(interior))
    half_edge_index = edge_index[inverse].reshape(-1, 3)

    tails, heads = half_edges(triangles)
    tails, heads = tails.ravel(), heads.ravel()
    owner = np.repeat(np.arange(mesh.n_triangles), 3)
    opposite = triangles[:, HALF_EDGE_OPPOSITE].ravel()
    slots = half_edge_index.ravel()

    n_edges = int(np.count_nonzero(interior))
    t_plus = np.empty(n_edges, dtype=np.int64)
    t_minus = np.empty(n_edges, dtype=np.int64)
    opp_plus = np.empty(n_edges, dtype=np.int64)
    opp_minus = np.empty(n_edges, dtype=np.int64)

    plus = (slots >= 0) & (tails < heads)
    minus = (slots >= 0) & (tails > heads)
    t_plus[slots[plus]] = owner[plus]
    opp_plus[slots[plus]] = opposite[plus]
    t_minus[slots[minus]] = owner[minus]
    opp_minus[slots[minus]] = opposite[minus]

    topology = EdgeTopology(
        v_a=edges[interior, 0],
        v_b=edges[interior, 1],
        t_plus=t_plus,
        t_minus=t_minus,
        opp_plus=opp_plus,
        opp_minus=opp_minus,
        half_edge_index=half_edge_index,
        n_boundary=int(np.count_nonzero(counts == 1)),
    )
    logger.info(f"{mesh}: {topology.n_edges} interior edges, {topology.n_boundary} boundary edges")
    return topology
