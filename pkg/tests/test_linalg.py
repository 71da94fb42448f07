from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from derham.linalg import (
    Factorization,
    InconsistentSubspaceError,
    IncrementalEchelon,
    RationalMatrix,
    SubspaceBasis,
    as_rational,
    column_space,
    format_rational,
    is_independent,
    nullspace,
    quotient_basis,
    rank,
    rref,
    solve,
)
from oracles import dense_rank

# boundary of the 3-vertex circle: edges (0,1), (0,2), (1,2) against vertices 0, 1, 2
CIRCLE_D1 = RationalMatrix.from_dense([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])


@st.composite
def sparse_matrices(draw, max_dim=40):
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    cells = st.tuples(st.integers(0, max(rows - 1, 0)), st.integers(0, max(cols - 1, 0)))
    values = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    entries = draw(st.dictionaries(cells, values, max_size=min(rows * cols, 60))) if rows and cols else {}
    return RationalMatrix(rows, cols, entries)


def test_rational_parsing_and_format():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational(-2) == Fraction(-2)
    assert format_rational(Fraction(-4, 2)) == "-2/1"
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_matrix_drops_zeros_and_keeps_sorted_entries():
    A = RationalMatrix(2, 2, {(1, 1): 3, (0, 0): 0, (0, 1): "1/2"})
    assert A.nnz == 2
    assert [k for k, _ in A.entries()] == [(0, 1), (1, 1)]
    with pytest.raises(IndexError):
        RationalMatrix(1, 1, {(1, 0): 1})


def test_matmul_and_transpose():
    A = RationalMatrix.from_dense([[1, 2], [3, 4]])
    B = RationalMatrix.from_dense([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[2, 1], [4, 3]]
    assert A.T.to_dense() == [[1, 3], [2, 4]]
    assert A @ [1, 1] == [3, 7]


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (RationalMatrix.identity(2), 2),
        (RationalMatrix.zeros(3, 4), 0),
        (CIRCLE_D1, 2),
    ],
)
def test_rank_examples(matrix, expected):
    assert rank(matrix) == expected
    assert dense_rank(matrix.to_dense()) == expected


def test_nullspace_examples():
    assert len(nullspace(RationalMatrix.identity(4))) == 0
    assert len(nullspace(RationalMatrix.zeros(2, 3))) == 3
    (z,) = nullspace(CIRCLE_D1).vectors
    # the cycle (0,1) + (1,2) - (0,2), up to scale
    scale = z[0]
    assert [x / scale for x in z] == [1, -1, 1]


def test_rref_pivot_rule_prefers_largest_weight():
    A = RationalMatrix.from_dense([[1, 0], [3, 1], [-3, 2]])
    R, pivots = rref(A)
    assert pivots == (0, 1)
    assert R.to_dense()[:2] == [[1, 0], [0, 1]]


def test_solve_examples():
    b = [Fraction(3), Fraction(-1, 2)]
    assert solve(RationalMatrix.identity(2), b) == b
    assert solve(RationalMatrix.zeros(2, 2), [1, 0]) is None
    # δ_0 on circle(3) is the transpose of ∂_1; b = δ_0 g
    delta0 = CIRCLE_D1.T
    g = [Fraction(2), Fraction(-1, 3), Fraction(5)]
    b = delta0 @ g
    x = solve(delta0, b)
    assert x is not None
    assert [a - c for a, c in zip(delta0 @ x, b)] == [0, 0, 0]
    with pytest.raises(ValueError):
        solve(delta0, [1, 2])


def test_factorization_reuse():
    A = RationalMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    fac = Factorization(A)
    assert fac.rank == 2
    for b in ([1, 0], [0, 1], [Fraction(2, 3), -5]):
        x = fac.solve(b)
        assert A @ x == [as_rational(v) for v in b]


def test_quotient_basis_examples():
    Z = SubspaceBasis(3, ((1, 0, 0), (0, 1, 0)))
    assert len(quotient_basis(Z, Z)) == 0
    assert len(quotient_basis(Z, SubspaceBasis(3, ()))) == 2
    with pytest.raises(InconsistentSubspaceError):
        quotient_basis(Z, SubspaceBasis(3, ((0, 0, 1),)))


def test_quotient_basis_torus_one_cycles():
    from derham.complex import torus

    K = torus()
    Z = nullspace(K.boundary_matrix(1))
    B = column_space(K.boundary_matrix(2))
    reps = quotient_basis(Z, B)
    # rank-nullity oracle: dim Z_1 = 27 - rank ∂_1, dim B_1 = rank ∂_2
    expected = (27 - dense_rank(K.boundary_matrix(1).to_dense())) - dense_rank(K.boundary_matrix(2).to_dense())
    assert len(reps) == expected == 2


def test_incremental_echelon():
    ech = IncrementalEchelon(3)
    assert ech.add([0, 1, 1])
    assert ech.add([1, 1, 0])
    assert not ech.add([1, 2, 1])
    assert ech.contains([2, 1, -1])
    assert is_independent([[1, 0], [1, 1]], 2)
    assert not is_independent([[1, 2], [2, 4]], 2)


@settings(max_examples=40, deadline=None)
@given(sparse_matrices())
def test_rank_nullity_and_kernel(A):
    basis = nullspace(A)
    assert rank(A) + len(basis) == A.cols
    for v in basis:
        assert not any(A @ v)
    assert is_independent(basis.vectors, A.cols)


@settings(max_examples=25, deadline=None)
@given(sparse_matrices(max_dim=12))
def test_rank_matches_sympy(A):
    assert rank(A) == sympy.Matrix(A.rows, A.cols, lambda i, j: sympy.Rational(str(A[i, j]))).rank()


@settings(max_examples=40, deadline=None)
@given(sparse_matrices(), st.data())
def test_solve_recovers_image_vectors(A, data):
    x0 = data.draw(st.lists(st.fractions(-3, 3, max_denominator=5), min_size=A.cols, max_size=A.cols))
    b = A @ x0
    x = solve(A, b)
    assert x is not None and A @ x == b


@settings(max_examples=40, deadline=None)
@given(sparse_matrices(max_dim=15), st.data())
def test_quotient_classes_independent_modulo_b(A, data):
    Z = nullspace(A)
    k = data.draw(st.integers(0, len(Z)))
    # B: combinations of some kernel vectors, so B ⊆ Z
    B_vecs = [tuple(a + b for a, b in zip(Z[i], Z[(i + 1) % len(Z)])) for i in range(k)] if Z.vectors else []
    ech = IncrementalEchelon(A.cols)
    B = SubspaceBasis(A.cols, tuple(v for v in B_vecs if ech.add(v)))
    Q = quotient_basis(Z, B)
    assert len(Q) == len(Z) - len(B)
    assert rank(RationalMatrix.from_columns(list(B) + list(Q), A.cols)) == len(B) + len(Q)


def test_deterministic_bases():
    A = RationalMatrix.from_dense([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 0, 1]])
    assert nullspace(A) == nullspace(A)
    assert nullspace(A).vectors == nullspace(RationalMatrix.from_dense(A.to_dense())).vectors
