"""
Oracle Tests

Jacobi eigendecomposition, reference matrix functions and the relative
error metric.
"""

import numpy as np
import pytest

from src.analytics import (
    eig_sym,
    generalized_eigs,
    reference_invsqrt,
    reference_matfun,
    reference_sqrt,
    relative_error,
    spd_eig,
)
from src.expansions import Kind
from src.sparse import DenseSymMatrix, SparseSymMatrix
from src.utils.exceptions import DimensionMismatchError, NotPositiveDefiniteError, NotSymmetricError
from tests.conftest import spectrum_matrix


@pytest.fixture(scope="module")
def random_spd():
    return spectrum_matrix(np.geomspace(1e-3, 1.0, 100), seed=21)


class TestEigSym:
    def test_diagonal_sorted(self):
        decomposition = eig_sym(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_array_equal(decomposition.values, [1.0, 2.0, 3.0])

    def test_two_by_two(self):
        decomposition = eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(decomposition.values, [1.0, 3.0], rtol=1e-15)
        np.testing.assert_allclose(np.abs(decomposition.vectors), np.full((2, 2), np.sqrt(0.5)), rtol=1e-15)

    def test_reconstruction_and_orthogonality(self, random_spd):
        decomposition = eig_sym(random_spd)
        A = random_spd.to_dense()
        assert np.linalg.norm(decomposition.reconstruct() - A) <= 1e-12 * np.linalg.norm(A)
        assert np.linalg.norm(decomposition.vectors.T @ decomposition.vectors - np.eye(100)) <= 1e-11
        np.testing.assert_allclose(decomposition.values, np.geomspace(1e-3, 1.0, 100), rtol=1e-9, atol=1e-14)

    def test_indefinite(self):
        A = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, -1.0]])
        np.testing.assert_allclose(eig_sym(A).values, [-2.0, -1.0, 2.0], atol=1e-15)

    def test_accepts_matrix_types(self):
        A = np.array([[2.0, 1.0], [1.0, 2.0]])
        for matrix in (A, SparseSymMatrix.from_dense(A), DenseSymMatrix(A)):
            np.testing.assert_allclose(eig_sym(matrix).values, [1.0, 3.0], rtol=1e-15)

    def test_asymmetric_rejected(self):
        with pytest.raises(NotSymmetricError):
            eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatchError):
            eig_sym(np.ones((2, 3)))

    def test_spd_check(self):
        with pytest.raises(NotPositiveDefiniteError):
            spd_eig(np.diag([1.0, -1.0]))


class TestReferenceFunctions:
    def test_identity(self):
        identity = SparseSymMatrix.identity(4)
        np.testing.assert_array_equal(reference_sqrt(identity).values, np.eye(4))
        np.testing.assert_array_equal(reference_invsqrt(identity).values, np.eye(4))

    def test_diagonal(self):
        G = SparseSymMatrix.diagonal_matrix([4.0, 9.0])
        np.testing.assert_allclose(reference_sqrt(G).values, np.diag([2.0, 3.0]), rtol=1e-15)
        np.testing.assert_allclose(reference_invsqrt(G).values, np.diag([0.5, 1.0 / 3.0]), rtol=1e-15)

    def test_square_of_root(self, random_spd):
        root = reference_sqrt(random_spd).values
        A = random_spd.to_dense()
        assert np.linalg.norm(root @ root - A) <= 1e-12 * np.linalg.norm(A)

    def test_root_times_inverse_root(self, random_spd):
        decomposition = spd_eig(random_spd)
        root = reference_matfun(random_spd, Kind.SQRT, decomposition).values
        inverse = reference_matfun(random_spd, Kind.INVSQRT, decomposition).values
        condition = decomposition.values[-1] / decomposition.values[0]
        assert np.linalg.norm(root @ inverse - np.eye(100), 2) <= 1e-14 * 100 * np.sqrt(condition)


class TestRelativeError:
    def test_identical(self, random_spd):
        F = reference_sqrt(random_spd)
        assert relative_error(F, F) == 0.0

    def test_uniform_scaling(self):
        F = 2.0 * np.eye(5)
        assert relative_error(1.01 * F, F) == pytest.approx(0.01, rel=1e-12)
        assert relative_error(3.0 * F, F) == pytest.approx(2.0, rel=1e-14)

    def test_general_perturbation(self, random_spd):
        F = reference_sqrt(random_spd).values
        E = 1e-6 * spectrum_matrix(np.linspace(-1.0, 1.0, 100), seed=22).to_dense()
        expected = np.linalg.norm(E, 2) / np.linalg.norm(F, 2)
        assert relative_error(F + E, F) == pytest.approx(expected, rel=1e-6)

    def test_zero_reference(self):
        with pytest.raises(ValueError):
            relative_error(np.eye(2), np.zeros((2, 2)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            relative_error(np.eye(2), np.eye(3))


class TestGeneralizedEigs:
    def test_identity_gram(self):
        T = np.array([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(generalized_eigs(T, SparseSymMatrix.identity(2)), [1.0, 3.0], rtol=1e-15)

    def test_gram_against_itself(self, random_spd):
        values = generalized_eigs(random_spd.to_dense(), random_spd)
        np.testing.assert_allclose(values, np.ones(100), atol=1e-9)

    def test_diagonal_pencil(self):
        values = generalized_eigs(np.diag([2.0, 6.0]), SparseSymMatrix.diagonal_matrix([4.0, 2.0]))
        np.testing.assert_allclose(values, [0.5, 3.0], rtol=1e-15)
