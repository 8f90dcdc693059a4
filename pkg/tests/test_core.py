import pytest
from hypothesis import given, strategies as st

from collat.core import (ExactMatrix, GaussianRational, field, format_scalar, gq, kernel_vectors, nullspace,
                         parse_scalar, rref, solve_linear, sparse)
from collat.errors import DimensionError, ParseError
from collat.subspace import Subspace

from conftest import e, matrices, scalars

J = ExactMatrix.jordan_block
I = ExactMatrix.identity


# --- scalars --------------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    ("3", gq(3)), ("-1/2", gq(-1) / 2), ("3+1/2i", gq(3, gq(1) / 2)), ("-i", gq(0, -1)),
    ("i", gq(0, 1)), ("2/3i", gq(0, gq(2) / 3)), ("-1-i", gq(-1, -1)), ("0", gq(0)),
])
def test_parse_scalar_grammar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "1.5", "i2", "1+i+i", "abc", "1/-2", "--1"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


@given(scalars)
def test_scalar_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


def test_real_values_collapse_to_rationals():
    z = gq(1, 1) * gq(1, -1)
    assert z == 2 and hash(z) == hash(field(2))
    assert not isinstance(field(z), GaussianRational)


# --- rref -----------------------------------------------------------------------

def test_rref_examples():
    assert rref(I(2)) == (I(2), 2, [0, 1])
    R, rank, piv = rref(ExactMatrix([[1, 2], [2, 4]]))
    assert R == ExactMatrix([[1, 2], [0, 0]]) and rank == 1 and piv == [0]
    assert rref(ExactMatrix([[gq(0, 1)]])) == (ExactMatrix([[1]]), 1, [0])


@given(matrices())
def test_rref_idempotent(M):
    R = rref(M)[0]
    assert rref(R)[0] == R


@given(matrices())
def test_rank_nullity(M):
    assert M.rank() + nullspace(M).dim == M.cols


@given(matrices(), st.lists(st.sampled_from([1, -1, 2, gq(0, 1), gq(1, 1)]), min_size=4, max_size=4))
def test_rref_invariant_under_row_scaling(M, ds):
    D = ExactMatrix.diag(ds[:M.rows])
    assert rref(D @ M)[0] == rref(M)[0]


@given(matrices())
def test_nullspace_is_annihilated(M):
    for v in nullspace(M).vectors:
        assert not any(M @ v)


def test_nullspace_examples():
    assert nullspace(J(2)) == Subspace.span([e(2, 1)])
    assert nullspace(I(4)).dim == 0
    assert nullspace(ExactMatrix.block_diag(J(2), J(2))) == Subspace.span([e(4, 1), e(4, 3)])


def test_kernel_vectors_of_sparse_rows():
    ker = kernel_vectors([sparse((1, 1, 0)), sparse((0, 0, 1))], 3)
    assert Subspace.from_sparse(ker, 3) == Subspace.span([(1, -1, 0)])


# --- linear systems -------------------------------------------------------------

def test_solve_linear_examples():
    sol = solve_linear(I(2), (1, 2))
    assert sol.particular == (1, 2) and sol.unique
    sol = solve_linear(ExactMatrix([[1, 1], [0, 0]]), (1, 0))
    assert sol.particular == (1, 0)
    assert sol.homogeneous == Subspace.span([(1, -1)])
    assert solve_linear(ExactMatrix([[1], [1]]), (1, 0)) is None


@given(matrices(), st.data())
def test_solve_linear_solutions_are_solutions(M, data):
    x = data.draw(st.lists(st.integers(-3, 3), min_size=M.cols, max_size=M.cols))
    b = M @ tuple(x)
    sol = solve_linear(M, b)
    assert sol is not None and M @ sol.particular == b
    for h in sol.homogeneous.vectors:
        assert not any(M @ h)


# --- matrix algebra -------------------------------------------------------------

@given(matrices(rows=st.just(3), cols=st.just(3)))
def test_inverse(M):
    if M.is_invertible():
        assert M @ M.inverse() == I(3) == M.inverse() @ M


def test_jordan_powers_and_shapes():
    assert J(3) ** 3 == ExactMatrix.zeros(3)
    assert (J(3) ** 2)[0, 2] == 1
    with pytest.raises(DimensionError):
        I(2) @ I(3)
    assert ExactMatrix.from_vec(2, 3, I(1).vec() * 0 + tuple(range(6))).vec() == tuple(range(6))


def test_gaussian_arithmetic_in_matrices():
    R = ExactMatrix([[0, -1], [1, 0]])
    w = R @ (gq(0, 1), 1)
    assert w == (-1, gq(0, 1))
