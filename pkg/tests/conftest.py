"""
Shared Fixtures

Test matrices with a prescribed spectrum and small meshes.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp

# Add the repository root to the path so `src` imports resolve
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.mesh import icosphere, load_mesh, tetrahedron, unit_square  # noqa: E402
from src.sparse import SparseSymMatrix  # noqa: E402

MESH_DIR = Path(__file__).parent.parent / "data" / "meshes"


def spectrum_matrix(eigenvalues, seed: int = 0) -> SparseSymMatrix:
    """Q diag(eigenvalues) Q^T for a seeded random orthogonal Q, exactly symmetric."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((len(eigenvalues), len(eigenvalues))))
    A = (Q * eigenvalues) @ Q.T
    return SparseSymMatrix.from_dense(0.5 * (A + A.T), spd_asserted=True)


def sparse_spd_matrix(dim: int = 200, seed: int = 0) -> SparseSymMatrix:
    """3 I + S with ||S||_inf <= 1, so the spectrum lies in [2, 4]."""
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((dim, dim)) * (rng.random((dim, dim)) < 0.02)
    S = sp.csr_matrix(M + M.T)
    S = S / np.max(np.abs(S).sum(axis=1))
    return SparseSymMatrix.from_scipy(sp.csr_matrix(3.0 * sp.identity(dim) + S), spd_asserted=True)


@pytest.fixture(scope="module")
def spectrum_02():
    """60 x 60 with eigenvalues evenly filling [0.2, 1]."""
    return spectrum_matrix(np.linspace(0.2, 1.0, 60), seed=1)


@pytest.fixture(scope="module")
def sparse_spd():
    return sparse_spd_matrix()


@pytest.fixture
def mesh_dir():
    return MESH_DIR


@pytest.fixture
def tetra():
    return tetrahedron()


@pytest.fixture
def square():
    return unit_square()


@pytest.fixture(scope="module")
def sphere():
    """Icosphere with 42 vertices, 80 triangles and 120 edges."""
    return icosphere(subdivisions=1)


@pytest.fixture(scope="module")
def sphere_file():
    return load_mesh(MESH_DIR / "icosphere1.off")
