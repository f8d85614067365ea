"""
Triangle Meshes

TriMesh container, OFF reading/writing and barycentric refinement.
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from src.utils.exceptions import (
    DegenerateTriangleError,
    InconsistentOrientationError,
    MeshParseError,
    NonManifoldEdgeError,
    NonManifoldVertexError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Area below this fraction of the squared longest edge counts as degenerate.
DEGENERATE_AREA_TOL = 1e-12

# Local vertex pairs (tail, head) of the three half-edges and the vertex opposite each.
HALF_EDGE_TAILS = (0, 1, 2)
HALF_EDGE_HEADS = (1, 2, 0)
HALF_EDGE_OPPOSITE = (2, 0, 1)


def half_edges(triangles: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Directed half-edges of every triangle.

    Returns:
        (tails, heads), each of shape (n_triangles, 3); half-edge k of
        triangle t runs from tails[t, k] to heads[t, k]
    """
    return triangles[:, HALF_EDGE_TAILS], triangles[:, HALF_EDGE_HEADS]


def undirected_edges(triangles: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Unique undirected edges, sorted lexicographically.

    Returns:
        (edges, inverse, counts): edges of shape (n_edges, 2) with
        edges[:, 0] < edges[:, 1]; inverse maps each half-edge (row-major over
        (triangle, k)) to its edge; counts is the number of adjacent triangles
    """
    tails, heads = half_edges(triangles)
    keys = np.stack([np.minimum(tails, heads).ravel(), np.maximum(tails, heads).ravel()], axis=1)
    edges, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    return edges, inverse.reshape(-1), counts


def _split_fan_vertices(triangles: np.ndarray) -> np.ndarray:
    """
    Vertices whose incident triangles fall into more than one edge-connected fan.

    Corners (triangle, local vertex) are the graph nodes; the two triangles of
    an interior edge join their corners at both ends of that edge. Expects a
    consistently oriented mesh, so half-edge tails meet the neighbour's heads.
    """
    n_corners = triangles.size
    if n_corners == 0:
        return np.empty(0, dtype=np.int64)
    _, inverse, _ = undirected_edges(triangles)
    order = np.argsort(inverse, kind="stable")
    paired = inverse[order[:-1]] == inverse[order[1:]]
    first, second = order[:-1][paired], order[1:][paired]

    def head_corner(h):
        return h - h % 3 + (h % 3 + 1) % 3

    rows = np.concatenate([first, head_corner(first)])
    cols = np.concatenate([head_corner(second), second])
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_corners, n_corners))
    _, labels = connected_components(graph, directed=False)

    fans = np.unique(np.stack([triangles.ravel(), labels], axis=1), axis=0)
    fans_per_vertex = np.bincount(fans[:, 0])
    return np.flatnonzero(fans_per_vertex > 1)


class TriMesh:
    """
    Triangle surface mesh.

    Triangles are consistently oriented and every edge borders at most two
    of them. Validation runs on construction, so every TriMesh in the
    program satisfies these invariants.
    """

    def __init__(self, vertices: np.ndarray, triangles: np.ndarray):
        """
        Build and validate a mesh.

        Args:
            vertices: (N_V, 3) coordinates in meters
            triangles: (N_P, 3) vertex indices, counter-clockwise seen from outside

        Raises:
            MeshParseError: bad shapes or out-of-range indices
            DegenerateTriangleError: repeated vertex or zero area
            NonManifoldEdgeError: an edge shared by more than two triangles
            InconsistentOrientationError: neighbours traverse their shared edge alike
            NonManifoldVertexError: triangles meeting only at a vertex (bowtie)
        """
        vertices = np.array(vertices, dtype=float)
        triangles = np.array(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise MeshParseError(f"vertices must have shape (n, 3), got {vertices.shape}")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise MeshParseError(f"triangles must have shape (n, 3), got {triangles.shape}")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise MeshParseError(f"triangle indices must lie in [0, {len(vertices)})")

        vertices.setflags(write=False)
        triangles.setflags(write=False)
        self._vertices = vertices
        self._triangles = triangles
        self._validate()

    def _validate(self):
        triangles = self._triangles
        repeated = (
            (triangles[:, 0] == triangles[:, 1])
            | (triangles[:, 1] == triangles[:, 2])
            | (triangles[:, 2] == triangles[:, 0])
        )
        if np.any(repeated):
            raise DegenerateTriangleError(f"triangle {int(np.argmax(repeated))} repeats a vertex")

        corners = self.corners
        longest = np.max(np.linalg.norm(corners - np.roll(corners, 1, axis=1), axis=2), axis=1)
        flat = self.areas <= DEGENERATE_AREA_TOL * longest**2
        if np.any(flat):
            raise DegenerateTriangleError(f"triangle {int(np.argmax(flat))} has zero area")

        edges, _, counts = undirected_edges(triangles)
        if np.any(counts > 2):
            a, b = edges[np.argmax(counts)]
            raise NonManifoldEdgeError(f"edge ({a}, {b}) is shared by {counts.max()} triangles")

        tails, heads = half_edges(triangles)
        directed = np.stack([tails.ravel(), heads.ravel()], axis=1)
        _, directed_counts = np.unique(directed, axis=0, return_counts=True)
        if np.any(directed_counts > 1):
            raise InconsistentOrientationError("two triangles traverse a shared edge in the same direction")

        bowtie = _split_fan_vertices(triangles)
        if bowtie.size:
            raise NonManifoldVertexError(f"triangles around vertex {int(bowtie[0])} are not joined by edges")

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def triangles(self) -> np.ndarray:
        return self._triangles

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_triangles(self) -> int:
        return len(self._triangles)

    @property
    def corners(self) -> np.ndarray:
        """Vertex coordinates per triangle, shape (N_P, 3, 3)."""
        return self._vertices[self._triangles]

    @property
    def areas(self) -> np.ndarray:
        corners = self.corners
        cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
        return 0.5 * np.linalg.norm(cross, axis=1)

    @property
    def total_area(self) -> float:
        return float(np.sum(self.areas))

    @property
    def is_closed(self) -> bool:
        _, _, counts = undirected_edges(self._triangles)
        return bool(np.all(counts == 2))

    def __repr__(self) -> str:
        return f"TriMesh(N_V={self.n_vertices}, N_P={self.n_triangles})"


def _off_tokens(text: str):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


def load_mesh(path: PathLike) -> TriMesh:
    """
    Read an ASCII OFF file with triangular faces.

    Raises:
        MeshParseError: malformed header, counts, or non-triangular faces
        MeshError: any validation failure of TriMesh
    """
    lines = list(_off_tokens(Path(path).read_text()))
    if not lines or not lines[0][0].upper().endswith("OFF"):
        raise MeshParseError(f"{path}: missing OFF header")

    header = lines[0][1:] if len(lines[0]) > 1 else None
    body = lines[1:]
    if header is None:
        if not body:
            raise MeshParseError(f"{path}: missing element counts")
        header, body = body[0], body[1:]
    try:
        n_vertices, n_faces = int(header[0]), int(header[1])
    except (IndexError, ValueError) as exc:
        raise MeshParseError(f"{path}: bad element counts {header}") from exc

    if len(body) < n_vertices + n_faces:
        raise MeshParseError(f"{path}: expected {n_vertices} vertices and {n_faces} faces, file is truncated")

    try:
        vertices = np.array([[float(v) for v in row[:3]] for row in body[:n_vertices]])
        faces = [[int(v) for v in row] for row in body[n_vertices : n_vertices + n_faces]]
    except ValueError as exc:
        raise MeshParseError(f"{path}: {exc}") from exc
    if vertices.shape != (n_vertices, 3):
        raise MeshParseError(f"{path}: every vertex needs three coordinates")
    for index, face in enumerate(faces):
        if len(face) < 4 or face[0] != 3:
            raise MeshParseError(f"{path}: face {index} is not a triangle")

    mesh = TriMesh(vertices, np.array([face[1:4] for face in faces], dtype=np.int64).reshape(-1, 3))
    logger.info(f"Loaded {mesh} from {path}")
    return mesh


def write_off(mesh: TriMesh, path: PathLike) -> None:
    """Write mesh as ASCII OFF with round-tripping coordinates."""
    with open(path, "w") as handle:
        handle.write("OFF\n")
        handle.write(f"{mesh.n_vertices} {mesh.n_triangles} 0\n")
        np.savetxt(handle, mesh.vertices, fmt="%.17g")
        faces = np.column_stack([np.full(mesh.n_triangles, 3), mesh.triangles])
        np.savetxt(handle, faces, fmt="%d")


def barycentric_refine(mesh: TriMesh) -> TriMesh:
    """
    Split every triangle into six through its centroid and edge midpoints.

    New vertices are numbered after the originals: edge midpoints in sorted
    edge order, then one centroid per triangle. Triangle (a, b, c) becomes
    (a, m_ab, g), (m_ab, b, g), (b, m_bc, g), (m_bc, c, g), (c, m_ca, g),
    (m_ca, a, g), which keeps the orientation.
    """
    vertices, triangles = mesh.vertices, mesh.triangles
    edges, inverse, _ = undirected_edges(triangles)

    midpoints = 0.5 * (vertices[edges[:, 0]] + vertices[edges[:, 1]])
    centroids = mesh.corners.mean(axis=1)

    # midpoint index of half-edge k (a->b, b->c, c->a) of each triangle
    m = mesh.n_vertices + inverse.reshape(-1, 3)
    g = mesh.n_vertices + len(edges) + np.arange(mesh.n_triangles)
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    m_ab, m_bc, m_ca = m[:, 0], m[:, 1], m[:, 2]

    refined = np.stack(
        [
            np.stack([a, m_ab, g], axis=1),
            np.stack([m_ab, b, g], axis=1),
            np.stack([b, m_bc, g], axis=1),
            np.stack([m_bc, c, g], axis=1),
            np.stack([c, m_ca, g], axis=1),
            np.stack([m_ca, a, g], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3)

    fine = TriMesh(np.vstack([vertices, midpoints, centroids]), refined)
    logger.info(f"Barycentric refinement {mesh} -> {fine}")
    return fine
