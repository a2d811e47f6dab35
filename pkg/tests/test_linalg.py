from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from cdga_config.linalg import (
    SparseMatrix,
    betti_numbers,
    in_span,
    invert,
    kernel_basis,
    quotient_data,
    rank,
    rref,
    solve,
)

from oracles import dense_rank


def mat(rows):
    return SparseMatrix.from_rows([[F(v) for v in r] for r in rows])


# --- worked examples ---------------------------------------------------------


def test_rref_identity():
    m = SparseMatrix.identity(2)
    reduced, pivots, rk = rref(m)
    assert reduced == m
    assert pivots == [0, 1]
    assert rk == 2


def test_rref_zero():
    m = SparseMatrix(3, 3)
    reduced, pivots, rk = rref(m)
    assert reduced.is_zero()
    assert pivots == []
    assert rk == 0


def test_rref_rank_one():
    reduced, pivots, rk = rref(mat([[1, 2], [2, 4]]))
    assert reduced == mat([[1, 2], [0, 0]])
    assert pivots == [0]
    assert rk == 1


def test_kernel_identity_empty():
    assert kernel_basis(SparseMatrix.identity(4)) == []


def test_kernel_zero_matrix_standard_basis():
    vecs = kernel_basis(SparseMatrix(2, 3))
    assert vecs == [
        [F(1), F(0), F(0)],
        [F(0), F(1), F(0)],
        [F(0), F(0), F(1)],
    ]


def test_kernel_single_row():
    (vec,) = kernel_basis(mat([[1, 1]]))
    # 1-dimensional kernel spanned by (1, -1) up to scale
    assert vec[0] == -vec[1] != 0


def test_solve_identity():
    b = [F(3), F(-2)]
    assert solve(SparseMatrix.identity(2), b) == b


def test_solve_inconsistent():
    assert solve(SparseMatrix(2, 2), [F(1), F(0)]) is None


def test_solve_scalar():
    assert solve(mat([[2]]), [F(1)]) == [F(1, 2)]


def test_quotient_empty_subspace():
    reps, proj = quotient_data([], 3)
    assert reps == [[F(1), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    assert proj == SparseMatrix.identity(3)


def test_quotient_full_subspace():
    reps, proj = quotient_data([[F(1), F(0)], [F(0), F(1)]], 2)
    assert reps == []
    assert proj.rows == 0 and proj.cols == 2


def test_quotient_line_in_plane():
    reps, proj = quotient_data([[F(1), F(1)]], 2)
    assert len(reps) == 1
    assert rank(proj) == 1
    # projection vanishes exactly on the subspace generator
    assert proj.apply([F(1), F(1)]) == [F(0)]
    # projection restricted to the representative is the identity
    assert proj.apply(reps[0]) == [F(1)]


def test_invert_and_singular():
    m = mat([[1, 1], [0, 2]])
    inv = invert(m)
    assert inv.matmul(m) == SparseMatrix.identity(2)
    assert invert(mat([[1, 2], [2, 4]])) is None


def test_in_span():
    coeffs = in_span([[F(1), F(0)], [F(1), F(1)]], [F(3), F(2)], 2)
    assert coeffs == [F(1), F(2)]
    assert in_span([[F(1), F(0)]], [F(0), F(1)], 2) is None


def test_betti_numbers_two_term_acyclic():
    # Q --id--> Q has no cohomology
    dims = {0: 1, 1: 1}
    blocks = {0: SparseMatrix.identity(1)}
    assert betti_numbers(dims, blocks) == {0: 0, 1: 0}


# --- properties --------------------------------------------------------------

entries = st.integers(min_value=-4, max_value=4).map(F)


@st.composite
def matrices(draw, max_dim=5):
    rows = draw(st.integers(min_value=1, max_value=max_dim))
    cols = draw(st.integers(min_value=1, max_value=max_dim))
    data = draw(
        st.lists(
            st.lists(entries, min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return SparseMatrix.from_rows(data)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    reduced, pivots, rk = rref(m)
    again, pivots2, rk2 = rref(reduced)
    assert again == reduced
    assert pivots2 == pivots and rk2 == rk


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_dense_oracle(m):
    assert rank(m) == dense_rank(m.dense_rows())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_vectors_annihilate(m):
    for vec in kernel_basis(m):
        assert all(v == 0 for v in m.apply(vec))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve_produces_solutions(m, coeffs):
    # build a guaranteed-consistent right-hand side
    x = coeffs[: m.cols]
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None
    assert m.apply(sol) == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(entries, min_size=4, max_size=4), min_size=0, max_size=3))
def test_quotient_projection_properties(subspace):
    reps, proj = quotient_data([list(map(F, v)) for v in subspace], 4)
    for v in subspace:
        assert all(c == 0 for c in proj.apply(list(map(F, v))))
    # projection restricted to representatives is the identity matrix
    for q, rep in enumerate(reps):
        image = proj.apply(rep)
        assert image[q] == 1 and all(c == 0 for i, c in enumerate(image) if i != q)
    assert len(reps) == 4 - dense_rank(subspace or [[0, 0, 0, 0]])
