"""
Matrix Function Tests

Norm-scaled evaluation of the expansions on SPD matrices, checked against
the eigendecomposition oracle.
"""

import numpy as np
import pytest

from src.analytics import eig_sym, generalized_eigs, reference_invsqrt, reference_sqrt, relative_error
from src.expansions import (
    ExpansionSpec,
    Kind,
    ScaledOperand,
    cpe_order,
    make_expansion,
    matfun,
    matfun_apply,
    matfun_dense,
    normalize_operator,
    resolve_order,
)
from src.mesh import assemble_pyramid_gram, assemble_rwg_gram, icosphere, tetrahedron
from src.sparse import SparseSymMatrix
from src.utils.exceptions import DimensionMismatchError, N0ClassViolationError, UnavailableOrderError
from tests.conftest import spectrum_matrix

ALL_SPECS = [
    {"method": "tse", "order": 4},
    {"method": "cpe1", "order": 6},
    {"method": "cpe2", "order": 6, "n0_class": 0.1},
    {"method": "pae", "order": 4},
]

REFERENCE = {Kind.SQRT: reference_sqrt, Kind.INVSQRT: reference_invsqrt}

MESHES = {
    "tetrahedron": tetrahedron,
    "icosphere1": lambda: icosphere(1),
    "icosphere2": lambda: icosphere(2),
}
GRAMS = {"pyramid": assemble_pyramid_gram, "rwg": assemble_rwg_gram}


@pytest.fixture(scope="module")
def class_matrices():
    """100 x 100 matrices whose spectrum fills [n0_class, 1]."""
    return {n0_class: spectrum_matrix(np.linspace(n0_class, 1.0, 100), seed=11) for n0_class in (0.1, 0.05, 0.01)}


class TestFixedPoints:
    @pytest.mark.parametrize("kwargs", ALL_SPECS)
    @pytest.mark.parametrize("kind", ["sqrt", "invsqrt"])
    def test_identity(self, kwargs, kind):
        G = SparseSymMatrix.identity(5)
        spec = ExpansionSpec(kind=kind, **kwargs)
        np.testing.assert_array_equal(matfun_dense(G, spec).values, np.eye(5))
        np.testing.assert_array_equal(matfun_apply(G, np.arange(5.0), spec), np.arange(5.0))

    def test_scalar_multiple_of_identity(self):
        G = SparseSymMatrix.diagonal_matrix([4.0, 4.0, 4.0])
        sqrt = matfun_dense(G, ExpansionSpec(method="tse", kind="sqrt", order=2))
        inverse = matfun_dense(G, ExpansionSpec(method="pae", kind="invsqrt", order=2))
        np.testing.assert_array_equal(sqrt.values, 2.0 * np.eye(3))
        np.testing.assert_array_equal(inverse.values, 0.5 * np.eye(3))

    @pytest.mark.parametrize("method, order", [("pae", 15), ("cpe1", 40), ("tse", 120)])
    def test_two_by_two_diagonal(self, method, order):
        G = SparseSymMatrix.diagonal_matrix([1.0, 4.0])
        spec = ExpansionSpec(method=method, kind="sqrt", order=order)
        np.testing.assert_allclose(matfun_apply(G, np.ones(2), spec), [1.0, 2.0], rtol=1e-12)
        inverse = spec.with_kind(Kind.INVSQRT)
        np.testing.assert_allclose(matfun_apply(G, np.ones(2), inverse), [1.0, 0.5], rtol=1e-10)


class TestDiagonalCommutation:
    @pytest.mark.parametrize("kwargs", ALL_SPECS)
    @pytest.mark.parametrize("kind", [Kind.SQRT, Kind.INVSQRT])
    def test_matches_scalar_expansion(self, kwargs, kind):
        d = np.linspace(0.3, 1.5, 7)
        G = SparseSymMatrix.diagonal_matrix(d)
        operand = ScaledOperand.from_matrix(G)

        n0 = 0.2 if kwargs["method"] == "cpe1" else None
        spec = ExpansionSpec(kind=kind, n0=n0, **kwargs)
        scalar = operand.prefactor(kind) * make_expansion(spec).evaluate_scalar(d / operand.norm)
        result = matfun_dense(G, spec, operand=operand).values

        np.testing.assert_allclose(np.diag(result), scalar, rtol=1e-13)
        assert np.all(result[~np.eye(7, dtype=bool)] == 0.0)


class TestAccuracy:
    @pytest.mark.parametrize("kind", [Kind.SQRT, Kind.INVSQRT])
    @pytest.mark.parametrize("n0_class", [0.1, 0.05, 0.01])
    @pytest.mark.parametrize("delta", [1e-2, 1e-4, 1e-6])
    def test_tabulated_order_meets_delta(self, class_matrices, kind, n0_class, delta):
        order = cpe_order(kind, n0_class, delta)
        if order is None:
            pytest.skip("no tabulated order")
        G = class_matrices[n0_class]
        spec = ExpansionSpec(method="cpe1", kind=kind, order=order, n0=n0_class)
        assert relative_error(matfun_dense(G, spec), REFERENCE[kind](G)) <= delta

    def test_pade_beats_taylor_on_spectrum(self, spectrum_02):
        reference = reference_sqrt(spectrum_02)
        for order in range(2, 10):
            errors = {
                method: relative_error(
                    matfun_dense(spectrum_02, ExpansionSpec(method=method, kind="sqrt", order=order)), reference
                )
                for method in ("pae", "tse")
            }
            assert errors["pae"] <= errors["tse"]

    def test_inverse_sqrt_against_reference(self, spectrum_02):
        spec = ExpansionSpec(method="cpe1", kind="invsqrt", order=40)
        assert relative_error(matfun_dense(spectrum_02, spec), reference_invsqrt(spectrum_02)) <= 1e-10

    def test_sqrt_and_inverse_are_reciprocal(self, spectrum_02):
        spec = ExpansionSpec(method="pae", kind="sqrt", order=9)
        root = matfun_dense(spectrum_02, spec).values
        inverse = matfun_dense(spectrum_02, spec.with_kind(Kind.INVSQRT)).values
        np.testing.assert_allclose(root @ inverse, np.eye(60), atol=1e-6)

    def test_strict_class_check(self):
        G = spectrum_matrix(np.linspace(0.05, 1.0, 30), seed=2)
        spec = ExpansionSpec(method="cpe2", kind="sqrt", order=8, n0_class=0.1, strict_n0=True)
        with pytest.raises(N0ClassViolationError):
            matfun_dense(G, spec)

    def test_resolve_order(self, spectrum_02):
        assert resolve_order(spectrum_02, "cpe2", "sqrt", 1e-4, n0_class=0.1) == 8
        assert resolve_order(spectrum_02, "cpe1", "sqrt", 1e-6) == 14
        with pytest.raises(UnavailableOrderError):
            resolve_order(spectrum_02, "cpe2", "invsqrt", 1e-2, n0_class=1e-3)

    def test_tabulated_order_past_table_names_range(self, spectrum_02):
        with pytest.raises(UnavailableOrderError, match="orders 0-19"):
            resolve_order(spectrum_02, "cpe2", "sqrt", 1e-4, n0_class=1e-2)
        assert resolve_order(spectrum_02, "cpe1", "sqrt", 1e-4) <= 19


class TestGramSelfConsistency:
    """sqrt(G) and G^(-1/2) from CPE1 at delta = 1e-6 on the bundled meshes."""

    DELTA = 1e-6

    @pytest.mark.parametrize("basis", sorted(GRAMS))
    @pytest.mark.parametrize("mesh", sorted(MESHES))
    def test_roots_reconstruct(self, mesh, basis):
        G = GRAMS[basis](MESHES[mesh]())
        operand = ScaledOperand.from_matrix(G)
        roots = {}
        for kind in ("sqrt", "invsqrt"):
            order = resolve_order(G, "cpe1", kind, self.DELTA)
            roots[kind] = matfun_dense(G, ExpansionSpec(method="cpe1", kind=kind, order=order), operand=operand).values

        root, inverse_root = roots["sqrt"], roots["invsqrt"]
        assert relative_error(root @ root, G) <= 5 * self.DELTA
        assert relative_error(root @ inverse_root, np.eye(G.dim)) <= 5 * self.DELTA


class TestApplyMode:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"method": "tse", "order": 9},
            {"method": "cpe1", "order": 20},
            {"method": "cpe2", "order": 15, "n0_class": 0.1},
            {"method": "pae", "order": 9},
        ],
    )
    @pytest.mark.parametrize("kind", ["sqrt", "invsqrt"])
    def test_apply_matches_dense(self, sparse_spd, kwargs, kind):
        spec = ExpansionSpec(kind=kind, **kwargs)
        v = np.random.default_rng(8).standard_normal(sparse_spd.dim)

        dense = matfun_dense(sparse_spd, spec).values @ v
        applied = matfun_apply(sparse_spd, v, spec)
        assert np.linalg.norm(applied - dense) <= 1e-10 * np.linalg.norm(dense)

    def test_apply_mode_matrix(self):
        G = spectrum_matrix(np.linspace(0.4, 1.0, 12), seed=9)
        dense = matfun(G, ExpansionSpec(method="pae", kind="sqrt", order=6))
        columns = matfun(G, ExpansionSpec(method="pae", kind="sqrt", order=6, mode="apply"))
        np.testing.assert_allclose(columns.values, dense.values, atol=1e-10)

    def test_vector_length_checked(self):
        G = SparseSymMatrix.diagonal_matrix([1.0, 2.0])
        with pytest.raises(DimensionMismatchError):
            matfun_apply(G, np.ones(3), ExpansionSpec(method="tse", kind="sqrt", order=2))


class TestNormalization:
    def test_identity_grams_leave_operator_unchanged(self):
        T = np.random.default_rng(1).standard_normal((4, 3))
        spec = ExpansionSpec(method="pae", kind="invsqrt", order=3)
        result = normalize_operator(T, SparseSymMatrix.identity(4), SparseSymMatrix.identity(3), spec)
        np.testing.assert_array_equal(result, T)

    def test_gram_normalizes_to_identity(self, spectrum_02):
        spec = ExpansionSpec(method="cpe1", kind="sqrt", order=40)
        result = normalize_operator(spectrum_02.to_dense(), spectrum_02, spectrum_02, spec)
        np.testing.assert_allclose(result, np.eye(60), atol=1e-8)

    @pytest.mark.parametrize("gram", ["pyramid", "rwg"])
    def test_eigenvalues_match_generalized_problem(self, sphere, gram):
        G = assemble_pyramid_gram(sphere) if gram == "pyramid" else assemble_rwg_gram(sphere)
        rng = np.random.default_rng(12)
        T = rng.standard_normal((G.dim, G.dim))
        T = T + T.T

        order = resolve_order(G, "cpe1", "invsqrt", 1e-12)
        spec = ExpansionSpec(method="cpe1", kind="invsqrt", order=order)
        normalized = normalize_operator(T, G, G, spec)

        expected = generalized_eigs(T, G)
        actual = eig_sym(0.5 * (normalized + normalized.T)).values
        np.testing.assert_allclose(actual, expected, rtol=0.0, atol=1e-8 * np.max(np.abs(expected)))

    def test_shape_mismatch(self):
        spec = ExpansionSpec(method="tse", kind="invsqrt", order=2)
        with pytest.raises(DimensionMismatchError):
            normalize_operator(np.ones((2, 2)), SparseSymMatrix.identity(3), SparseSymMatrix.identity(2), spec)
