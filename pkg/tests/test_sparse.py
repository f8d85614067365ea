"""
Sparse Core Tests

Symmetric storage, matrix-vector products and the iterative kernels.
"""

import numpy as np
import pytest
import scipy.sparse as sp

from src.analytics import spd_eig
from src.sparse import (
    DenseSymMatrix,
    SparseSymMatrix,
    cg_solve,
    estimate_condition,
    matvec,
    min_eigenvalue,
    spectral_norm,
)
from src.utils.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)
from src.utils.io import read_sparse_sym, write_sparse_sym
from tests.conftest import spectrum_matrix


class TestSparseSymMatrix:
    def test_stores_lower_triangle_only(self):
        A = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 2.0], [0.0, 2.0, 5.0]])
        G = SparseSymMatrix.from_dense(A)

        assert G.dim == 3
        assert G.nnz == 5
        assert sp.triu(G.lower, k=1).nnz == 0
        np.testing.assert_array_equal(G.to_dense(), A)
        np.testing.assert_array_equal(G.diagonal, [4.0, 3.0, 5.0])

    def test_matvec_matches_dense_product(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((30, 30))
        A = A + A.T
        x = rng.standard_normal(30)
        G = SparseSymMatrix.from_dense(A)

        np.testing.assert_allclose(G.matvec(x), A @ x, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(matvec(G, x), A @ x, rtol=1e-13, atol=1e-13)

    def test_matvec_rejects_wrong_length(self):
        G = SparseSymMatrix.identity(4)
        with pytest.raises(DimensionMismatchError):
            G.matvec(np.ones(3))

    def test_asymmetric_input_is_rejected(self):
        A = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NotSymmetricError):
            SparseSymMatrix.from_dense(A)
        with pytest.raises(NotSymmetricError):
            SparseSymMatrix.from_scipy(sp.csr_matrix(A))

    def test_upper_entries_rejected_in_canonical_storage(self):
        with pytest.raises(NotSymmetricError):
            SparseSymMatrix(sp.csr_matrix(np.array([[1.0, 1.0], [0.0, 1.0]])))

    def test_non_square_is_rejected(self):
        with pytest.raises(DimensionMismatchError):
            SparseSymMatrix.from_dense(np.ones((2, 3)))

    def test_from_lower_triangle_mirrors(self):
        lower = sp.csr_matrix(np.array([[2.0, 0.0], [1.0, 2.0]]))
        G = SparseSymMatrix.from_lower_triangle(lower)
        np.testing.assert_array_equal(G.to_dense(), [[2.0, 1.0], [1.0, 2.0]])

    @pytest.mark.parametrize(
        "diagonal, expected",
        [([1.0, 1.0, 1.0], 1.0), ([4.0, 4.0], 4.0), ([5.0], 5.0), ([1.0, 4.0], None)],
    )
    def test_scalar_multiple_of_identity(self, diagonal, expected):
        assert SparseSymMatrix.diagonal_matrix(diagonal).scalar_multiple_of_identity() == expected

    def test_off_diagonal_is_not_scalar_identity(self):
        G = SparseSymMatrix.from_dense(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert G.scalar_multiple_of_identity() is None

    def test_equality(self):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        assert SparseSymMatrix.from_dense(A) == SparseSymMatrix.from_scipy(sp.csr_matrix(A))
        assert SparseSymMatrix.from_dense(A) != SparseSymMatrix.identity(2)


class TestDenseSymMatrix:
    def test_array_protocol_and_matvec(self):
        D = DenseSymMatrix(np.diag([1.0, 2.0]))
        np.testing.assert_array_equal(np.asarray(D), np.diag([1.0, 2.0]))
        np.testing.assert_array_equal(D.matvec(np.ones(2)), [1.0, 2.0])
        assert D.dim == 2


class TestSpectralNorm:
    def test_diagonal(self):
        estimate = spectral_norm(SparseSymMatrix.diagonal_matrix([1.0, 2.0, 3.0]))
        assert estimate.value == pytest.approx(3.0, rel=1e-8)
        assert estimate.iterations > 1

    def test_indefinite_uses_magnitude(self):
        estimate = spectral_norm(SparseSymMatrix.diagonal_matrix([-5.0, 1.0, 2.0]))
        assert estimate.value == pytest.approx(5.0, rel=1e-8)

    def test_matches_largest_eigenvalue(self):
        G = spectrum_matrix(np.linspace(0.1, 2.0, 40), seed=4)
        assert spectral_norm(G).value == pytest.approx(2.0, rel=1e-8)

    def test_accepts_operator_tuple(self):
        A = np.diag([1.0, 3.0])
        assert spectral_norm((lambda x: A @ x, 2)).value == pytest.approx(3.0, rel=1e-8)

    def test_budget_exhausted_carries_estimate(self):
        with pytest.raises(ConvergenceError) as info:
            spectral_norm(SparseSymMatrix.diagonal_matrix([1.0, 2.0, 3.0]), max_iter=2)
        assert info.value.estimate is not None
        assert 0.0 < info.value.estimate.value <= 3.0 + 1e-12


class TestConjugateGradients:
    def test_residual_meets_tolerance(self):
        G = spectrum_matrix(np.linspace(1.0, 10.0, 50), seed=5)
        b = np.random.default_rng(6).standard_normal(50)
        x = cg_solve(G, b, tol=1e-12)
        assert np.linalg.norm(G.matvec(x) - b) <= 2e-12 * np.linalg.norm(b)

    def test_zero_right_hand_side(self):
        np.testing.assert_array_equal(cg_solve(SparseSymMatrix.identity(3), np.zeros(3)), np.zeros(3))

    def test_indefinite_operator_raises(self):
        with pytest.raises(NotPositiveDefiniteError):
            cg_solve(SparseSymMatrix.diagonal_matrix([1.0, -1.0]), np.ones(2))

    def test_wrong_right_hand_side_length(self):
        with pytest.raises(DimensionMismatchError):
            cg_solve(SparseSymMatrix.identity(3), np.ones(2))


class TestConjugateGradientsIllConditioned:
    def test_condition_ten_thousand(self):
        G = spectrum_matrix(np.geomspace(1.0, 1e4, 80), seed=8)
        b = np.random.default_rng(9).standard_normal(80)
        x = cg_solve(G, b, tol=1e-10)
        assert np.linalg.norm(G.matvec(x) - b) <= 1.01e-10 * np.linalg.norm(b)


class TestSmallestEigenvalue:
    def test_inverse_iteration(self):
        G = spectrum_matrix(np.linspace(0.1, 1.0, 20), seed=7)
        assert min_eigenvalue(G).value == pytest.approx(0.1, rel=1e-7)

    def test_condition_number(self):
        G = SparseSymMatrix.diagonal_matrix(np.arange(1.0, 11.0))
        assert estimate_condition(G) == pytest.approx(10.0, rel=1e-6)

    def test_repeated_smallest_eigenvalue(self):
        G = spectrum_matrix(np.concatenate([[1.0, 1.0, 1.0, 1.01], np.linspace(2.0, 10.0, 46)]), seed=3)
        estimate = min_eigenvalue(G)
        assert estimate.value == pytest.approx(1.0, rel=1e-5)
        assert estimate.residual <= 1e-4

    def test_exhausted_budget(self):
        G = spectrum_matrix(np.linspace(0.1, 1.0, 20), seed=7)
        with pytest.raises(ConvergenceError) as info:
            min_eigenvalue(G, max_iter=2)
        assert info.value.estimate.value >= 0.1 * (1.0 - 1e-12)

        accepted = min_eigenvalue(G, max_iter=2, accept_estimate=True)
        assert accepted.iterations == 2
        assert accepted.value == info.value.estimate.value

    def test_random_spd_against_oracle(self):
        rng = np.random.default_rng(31)
        M = rng.standard_normal((50, 50))
        A = M @ M.T / 50.0 + 0.01 * np.eye(50)
        G = SparseSymMatrix.from_dense(0.5 * (A + A.T))
        eigenvalues = spd_eig(G).values

        assert min_eigenvalue(G).value == pytest.approx(eigenvalues[0], rel=1e-5)
        assert spectral_norm(G).value == pytest.approx(eigenvalues[-1], rel=1e-8)


class TestSymmetricOperator:
    def test_bilinear_form_is_symmetric(self):
        rng = np.random.default_rng(21)
        G = SparseSymMatrix.from_lower_triangle(sp.random(80, 80, density=0.05, random_state=rng))
        x, y = rng.standard_normal(80), rng.standard_normal(80)
        assert x @ G.matvec(y) == pytest.approx(y @ G.matvec(x), rel=1e-13, abs=1e-13)

    def test_matrix_market_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(22)
        lower = sp.random(40, 40, density=0.1, random_state=rng) + sp.diags(rng.random(40) + 1.0)
        G = SparseSymMatrix.from_lower_triangle(lower)
        path = tmp_path / "G.mtx"

        write_sparse_sym(G, path)
        loaded = read_sparse_sym(path)

        assert loaded.dim == G.dim
        np.testing.assert_array_equal(loaded.to_dense(), G.to_dense())
