"""
Mesh Module

Triangle meshes, edge topology and Gram matrix assembly for the pyramid
and RWG bases.
"""

from .assembly import (
    CombinationMatrix,
    assemble_pyramid_gram,
    assemble_rwg_gram,
    galerkin_transform,
    load_combination,
)
from .generators import icosphere, single_triangle, tetrahedron, unit_square
from .topology import EdgeTopology, extract_edges
from .trimesh import TriMesh, barycentric_refine, load_mesh, write_off

__all__ = [
    "TriMesh",
    "load_mesh",
    "write_off",
    "barycentric_refine",
    "EdgeTopology",
    "extract_edges",
    "CombinationMatrix",
    "assemble_pyramid_gram",
    "assemble_rwg_gram",
    "galerkin_transform",
    "load_combination",
    "tetrahedron",
    "single_triangle",
    "unit_square",
    "icosphere",
]
