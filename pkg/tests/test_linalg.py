"""Exact linear algebra: rank, inverse, structured builders, block ops."""

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from wsec.errors import FormatError, SingularMatrixError
from wsec.fields import make_tower
from wsec.linalg import (FMatrix, cauchy, format_matrix, null_space,
                         parse_matrix, solve, take_rows, take_thick_cols,
                         vandermonde, vstack)

T5 = make_tower(5)
T13 = make_tower(13)


def mat(tower, grid):
    return FMatrix(tower, [[tower.scalar(v) for v in row] for row in grid],
                   cols=len(grid[0]) if grid else 0)


def random_matrix(tower, rows, cols, rng):
    return FMatrix(tower, [[tower.element(rng.randrange(tower.order))
                            for _ in range(cols)] for _ in range(rows)], cols=cols)


def det_by_permutations(m):
    """Leibniz-formula determinant; independent of Gaussian elimination."""
    n = m.rows
    total = m.tower.zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = m.tower.one
        for i in range(n):
            term = term * m[i, perm[i]]
        total = total + (term if sign > 0 else -term)
    return total


# -- construction and access --------------------------------------------------


def test_shape_validation():
    with pytest.raises(ValueError):
        FMatrix(T5, [[T5.one], [T5.one, T5.zero]])
    with pytest.raises(ValueError):
        FMatrix(T5, [])
    with pytest.raises(ValueError):
        FMatrix(T5, [[1, 2]])
    with pytest.raises(ValueError):
        FMatrix(T5, [[make_tower(7).one]])


def test_zero_row_matrix():
    m = FMatrix(T5, [], cols=3)
    assert (m.rows, m.cols) == (0, 3)
    assert m.rank() == 0
    assert m.transpose().cols == 0


def test_access():
    m = mat(T5, [[1, 2], [3, 4]])
    assert m[1, 0] == T5.scalar(3)
    assert m.row(0) == (T5.one, T5.scalar(2))
    assert m.column(1) == (T5.scalar(2), T5.scalar(4))


# -- rank ----------------------------------------------------------------------


def test_rank_identity():
    assert FMatrix.identity(T5, 4).rank() == 4


def test_rank_zero_matrix():
    assert FMatrix.zeros(T5, 3, 5).rank() == 0


def test_rank_vandermonde_123():
    pts = [T5.scalar(v) for v in (1, 2, 3)]
    vm = vandermonde(pts, 3)
    assert vm.rank() == 3
    # determinant by the product formula: (2-1)(3-1)(3-2) = 2
    assert det_by_permutations(vm) == T5.scalar(2)


def test_rank_dependent_rows():
    m = mat(T5, [[1, 2, 3], [2, 4, 6], [1, 0, 0]])
    assert m.rank() == 2


@given(st.integers(min_value=0, max_value=10_000))
def test_rank_equals_rank_of_transpose(seed):
    rng = random.Random(seed)
    m = random_matrix(T5, rng.randrange(1, 6), rng.randrange(1, 6), rng)
    assert m.rank() == m.transpose().rank()


@given(st.integers(min_value=0, max_value=10_000))
def test_vstack_rank_subadditive(seed):
    rng = random.Random(seed)
    cols = rng.randrange(1, 5)
    a = random_matrix(T5, rng.randrange(1, 4), cols, rng)
    b = random_matrix(T5, rng.randrange(1, 4), cols, rng)
    assert vstack(a, b).rank() <= a.rank() + b.rank()


def test_vstack_rank_equality_iff_trivial_intersection():
    a = mat(T5, [[1, 0, 0, 0], [0, 1, 0, 0]])
    b = mat(T5, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert vstack(a, b).rank() == a.rank() + b.rank()
    c = mat(T5, [[1, 1, 0, 0]])  # inside rowspace(a)
    assert vstack(a, c).rank() < a.rank() + c.rank()


# -- inverse -------------------------------------------------------------------


def test_inverse_identity():
    ident = FMatrix.identity(T5, 3)
    assert ident.inverse() == ident


def test_inverse_diag():
    m = mat(T5, [[2, 0], [0, 3]])
    assert m.inverse() == mat(T5, [[3, 0], [0, 2]])


def test_inverse_involution_and_product():
    rng = random.Random(7)
    for _ in range(20):
        while True:
            m = random_matrix(T5, 4, 4, rng)
            if m.rank() == 4:
                break
        inv = m.inverse()
        assert m @ inv == FMatrix.identity(T5, 4)
        assert inv.inverse() == m


def test_inverse_singular_reports_rank():
    m = mat(T5, [[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError) as exc:
        m.inverse()
    assert exc.value.rank == 1


def test_inverse_requires_square():
    with pytest.raises(ValueError):
        mat(T5, [[1, 2, 3]]).inverse()


# -- solve and null space --------------------------------------------------------


def test_solve_particular_plus_null_space():
    m = mat(T5, [[1, 1, 0], [0, 1, 1]])
    rhs = (T5.scalar(3), T5.scalar(1))
    x = solve(m, rhs)
    assert m.mul_vec(x) == rhs
    basis = null_space(m)
    assert len(basis) == 1
    zero = (T5.zero, T5.zero)
    for v in basis:
        assert m.mul_vec(v) == zero


def test_solve_inconsistent():
    m = mat(T5, [[1, 1], [2, 2]])
    with pytest.raises(SingularMatrixError):
        solve(m, (T5.one, T5.scalar(3)))


@given(st.integers(min_value=0, max_value=10_000))
def test_null_space_dimension(seed):
    rng = random.Random(seed)
    m = random_matrix(T5, rng.randrange(1, 4), rng.randrange(1, 5), rng)
    assert len(null_space(m)) == m.cols - m.rank()


# -- structured builders -------------------------------------------------------


def test_vandermonde_examples():
    assert vandermonde([T5.one], 1) == mat(T5, [[1]])
    vm = vandermonde([T5.one, T5.scalar(2)], 2)
    assert vm == mat(T5, [[1, 1], [1, 2]])
    assert vm.rank() == 2


def test_vandermonde_zero_point_gives_unit_column():
    vm = vandermonde([T5.zero, T5.scalar(2)], 3)
    assert vm.column(0) == (T5.one, T5.zero, T5.zero)


def test_vandermonde_rejects_duplicates():
    with pytest.raises(ValueError):
        vandermonde([T5.one, T5.one], 2)


def test_square_vandermonde_always_invertible():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randrange(1, 6)
        pts = [T13.element(i) for i in rng.sample(range(13), n)]
        assert vandermonde(pts, n).rank() == n


def test_cauchy_singletons():
    c = cauchy([T5.zero], [T5.one])
    assert c == mat(T5, [[4]])


def test_cauchy_2x2_frozen():
    c = cauchy([T5.zero, T5.one], [T5.scalar(2), T5.scalar(3)])
    assert c == mat(T5, [[2, 3], [4, 2]])


def test_cauchy_rejects_collisions():
    with pytest.raises(ValueError):
        cauchy([T5.zero, T5.zero], [T5.one, T5.scalar(2)])
    with pytest.raises(ValueError):
        cauchy([T5.zero], [T5.zero])


def test_cauchy_all_square_submatrices_invertible():
    xs = [T13.element(i) for i in range(6)]
    ys = [T13.element(i) for i in range(6, 12)]
    c = cauchy(xs, ys)
    checked = 0
    for size in range(1, 7):
        for ri in itertools.combinations(range(6), size):
            for ci in itertools.combinations(range(6), size):
                assert c.submatrix(ri, ci).rank() == size
                checked += 1
    assert checked == sum(
        len(list(itertools.combinations(range(6), s))) ** 2 for s in range(1, 7))


# -- block operations -----------------------------------------------------------


def test_vstack_example():
    m = vstack(FMatrix.identity(T5, 2), FMatrix.zeros(T5, 1, 2))
    assert (m.rows, m.cols, m.rank()) == (3, 2, 2)


def test_vstack_rejects_mismatch():
    with pytest.raises(ValueError):
        vstack(FMatrix.identity(T5, 2), FMatrix.identity(T5, 3))
    with pytest.raises(ValueError):
        vstack(FMatrix.identity(T5, 2), FMatrix.identity(T13, 2))
    with pytest.raises(ValueError):
        vstack()


def test_matmul_identity():
    rng = random.Random(11)
    m = random_matrix(T5, 3, 4, rng)
    assert m @ FMatrix.identity(T5, 4) == m
    assert FMatrix.identity(T5, 3) @ m == m


def test_mul_vec():
    m = mat(T5, [[1, 2], [3, 4]])
    assert m.mul_vec((T5.one, T5.one)) == (T5.scalar(3), T5.scalar(2))
    with pytest.raises(ValueError):
        m.mul_vec((T5.one,))


def test_take_rows():
    m = mat(T5, [[1, 2], [3, 4], [0, 1]])
    assert take_rows(m, [2, 0]) == mat(T5, [[0, 1], [1, 2]])
    assert take_rows(m, []).rows == 0
    with pytest.raises(ValueError):
        take_rows(m, [3])


def test_take_thick_cols_picks_last_block():
    m = mat(T5, [[1, 2, 3, 4], [0, 1, 0, 1]])
    assert take_thick_cols(m, [2], 2) == mat(T5, [[3, 4], [0, 1]])


def test_take_thick_cols_order_and_errors():
    m = mat(T5, [[1, 2, 3, 4]])
    assert take_thick_cols(m, [2, 1], 2) == mat(T5, [[3, 4, 1, 2]])
    with pytest.raises(ValueError):
        take_thick_cols(m, [3], 2)
    with pytest.raises(ValueError):
        take_thick_cols(m, [1], 3)


def test_scale_column():
    m = mat(T5, [[1, 2], [3, 4]])
    assert m.scale_column(1, T5.scalar(2)) == mat(T5, [[1, 4], [3, 3]])


def test_embed_into_preserves_rank():
    rng = random.Random(5)
    top = make_tower(5, [2, 3])
    for _ in range(10):
        m = random_matrix(T5, 3, 4, rng)
        lifted = m.embed_into(top)
        assert lifted.tower is top
        assert lifted.rank() == m.rank()


def test_submatrix():
    m = mat(T5, [[1, 2, 3], [4, 0, 1], [2, 2, 2]])
    assert m.submatrix((0, 2), (1, 2)) == mat(T5, [[2, 3], [2, 2]])


# -- serialization --------------------------------------------------------------


def test_matrix_round_trip():
    rng = random.Random(13)
    for tower in (T5, make_tower(5, [2]), make_tower(2, [2])):
        m = random_matrix(tower, 3, 4, rng)
        assert parse_matrix(format_matrix(m)) == m


def test_zero_row_matrix_round_trip():
    m = FMatrix(T5, [], cols=4)
    again = parse_matrix(format_matrix(m))
    assert again == m
    assert again.cols == 4


def test_matrix_format_shape():
    m = mat(T5, [[1, 2], [3, 4]])
    lines = format_matrix(m).splitlines()
    assert lines[0].startswith("GF p=5")
    assert lines[1] == "2 2"
    assert lines[2] == "1 2"


def test_parse_matrix_rejects_bad_input():
    good = format_matrix(mat(T5, [[1, 2], [3, 4]]))
    for bad in (
        good.replace("2 2", "3 2"),
        good.replace("2 2", "2"),
        good + "5 5\n",
        "GF p=5 degs= mods=\n",
    ):
        with pytest.raises(FormatError):
            parse_matrix(bad)
