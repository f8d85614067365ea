"""
Mesh Generators

Small closed and open test surfaces: a regular tetrahedron, a single
triangle, a unit square and subdivided icosahedra projected on a sphere.
"""

import numpy as np

from src.mesh.trimesh import TriMesh, undirected_edges

_GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = np.array(
    [
        [-1, _GOLDEN, 0], [1, _GOLDEN, 0], [-1, -_GOLDEN, 0], [1, -_GOLDEN, 0],
        [0, -1, _GOLDEN], [0, 1, _GOLDEN], [0, -1, -_GOLDEN], [0, 1, -_GOLDEN],
        [_GOLDEN, 0, -1], [_GOLDEN, 0, 1], [-_GOLDEN, 0, -1], [-_GOLDEN, 0, 1],
    ],
    dtype=float,
)

ICOSAHEDRON_TRIANGLES = np.array(
    [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
)


def tetrahedron(edge: float = 1.0) -> TriMesh:
    """Regular tetrahedron with the given edge length, outward orientation."""
    vertices = edge * np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, np.sqrt(3.0) / 2.0, 0.0],
            [0.5, np.sqrt(3.0) / 6.0, np.sqrt(2.0 / 3.0)],
        ]
    )
    return TriMesh(vertices, [[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]])


def single_triangle() -> TriMesh:
    return TriMesh([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [[0, 1, 2]])


def unit_square() -> TriMesh:
    """Two right triangles sharing the diagonal (0, 2)."""
    vertices = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]
    return TriMesh(vertices, [[0, 1, 2], [0, 2, 3]])


def _subdivide(vertices: np.ndarray, triangles: np.ndarray):
    # Split each triangle into four through its edge midpoints.
    edges, inverse, _ = undirected_edges(triangles)
    midpoints = 0.5 * (vertices[edges[:, 0]] + vertices[edges[:, 1]])
    m = len(vertices) + inverse.reshape(-1, 3)
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    m_ab, m_bc, m_ca = m[:, 0], m[:, 1], m[:, 2]
    finer = np.stack(
        [
            np.stack([a, m_ab, m_ca], axis=1),
            np.stack([b, m_bc, m_ab], axis=1),
            np.stack([c, m_ca, m_bc], axis=1),
            np.stack([m_ab, m_bc, m_ca], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3)
    return np.vstack([vertices, midpoints]), finer


def icosphere(subdivisions: int = 1, radius: float = 1.0) -> TriMesh:
    """
    Icosahedron subdivided 4:1 `subdivisions` times and projected on a sphere.

    Has 20 * 4**subdivisions triangles and 30 * 4**subdivisions edges.
    """
    if subdivisions < 0:
        raise ValueError("subdivisions must be nonnegative")
    vertices, triangles = ICOSAHEDRON_VERTICES, ICOSAHEDRON_TRIANGLES
    for _ in range(subdivisions):
        vertices, triangles = _subdivide(vertices, triangles)
    vertices = radius * vertices / np.linalg.norm(vertices, axis=1, keepdims=True)
    return TriMesh(vertices, triangles)
