from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flechains.intlin import (
    as_int_matrix,
    frac,
    identity,
    integer_inverse,
    lex_sign,
    mat,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_vec,
    primitive_vector,
    smith_normal_form,
    solve_integer,
    solve_rational,
)

small_entries = st.integers(min_value=-6, max_value=6)


def int_matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_entries, min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows: tuple(tuple(row) for row in rows))
        )
    )


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        frac(0.5)
    assert frac("1/3") == Fraction(1, 3)
    assert frac(7) == 7


def test_mat_vec_and_mul():
    m = mat([[1, 2], [3, 4]])
    assert mat_vec(m, (1, 1)) == (3, 7)
    assert mat_mul(m, identity(2)) == m
    assert mat_mul(m, mat([[0], [1]])) == ((2,), (4,))


def test_mat_mul_empty_inner_needs_cols():
    with pytest.raises(ValueError):
        mat_mul(((),), ())
    assert mat_mul(((),), (), cols=3) == ((0, 0, 0),)


def test_inverse_and_rank():
    m = mat([[1, 1], [0, 1]])
    inv = mat_inverse(m)
    assert mat_mul(m, inv) == identity(2)
    assert mat_rank(m) == 2
    with pytest.raises(ValueError):
        mat_inverse(mat([[1, 2], [2, 4]]))


def test_solve_rational():
    a = mat([[2, 0], [0, 3]])
    assert solve_rational(a, (1, 1)) == (Fraction(1, 2), Fraction(1, 3))
    assert solve_rational(mat([[1, 1], [1, 1]]), (0, 1)) is None


def test_lex_sign():
    assert lex_sign((0, 0)) == 0
    assert lex_sign((0, -2)) == -1
    assert lex_sign((1, -100)) == 1


def test_primitive_vector():
    assert primitive_vector((Fraction(1, 2), Fraction(3, 2))) == (1, 3)
    assert primitive_vector((4, 6)) == (2, 3)
    assert primitive_vector((-2,)) == (-1,)


def test_solve_integer_examples():
    assert solve_integer(((2,),), (4,)) == (2,)
    assert solve_integer(((2,),), (3,)) is None
    a = ((2, 0), (0, 2))
    assert solve_integer(a, (4, 6)) == (2, 3)
    assert solve_integer(a, (1, 0)) is None


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_smith_normal_form_properties(a):
    rows, cols = len(a), len(a[0])
    u, d, v = smith_normal_form(a, rows, cols)
    # u a v == d
    lhs = mat_mul(mat(u), mat_mul(mat(a), mat(v)))
    assert as_int_matrix(lhs) == d
    # diagonal, nonnegative, divisibility chain, zeros at the tail
    diag = [d[i][i] for i in range(min(rows, cols))]
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert d[i][j] == 0
    seen_zero = False
    for i, entry in enumerate(diag):
        assert entry >= 0
        if entry == 0:
            seen_zero = True
        else:
            assert not seen_zero
            if i + 1 < len(diag) and diag[i + 1]:
                assert diag[i + 1] % entry == 0
    # unimodularity: integer inverses exist
    integer_inverse(u)
    integer_inverse(v)


@settings(max_examples=100, deadline=None)
@given(int_matrices(3), st.lists(small_entries, min_size=3, max_size=3))
def test_solve_integer_consistency(a, x):
    rows, cols = len(a), len(a[0])
    x = tuple(x[:cols]) + (0,) * max(0, cols - len(x))
    b = tuple(sum(a[i][j] * x[j] for j in range(cols)) for i in range(rows))
    solution = solve_integer(a, b)
    assert solution is not None
    assert tuple(sum(a[i][j] * solution[j] for j in range(cols)) for i in range(rows)) == b
