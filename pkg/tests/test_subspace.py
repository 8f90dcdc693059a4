from hypothesis import given, strategies as st

from collat.core import ExactMatrix
from collat.subspace import (Relation, Subspace, compare, image, intersect, is_invariant, join, preimage,
                             span_of)
from collat.structure import cyclic_subspace

from conftest import e, vectors

J = ExactMatrix.jordan_block
N22 = ExactMatrix.block_diag(J(2), J(2))


@st.composite
def subspaces(draw, n=4):
    k = draw(st.integers(0, 3))
    return span_of([draw(vectors(n)) for _ in range(k)], n)


def test_span_examples():
    assert span_of([e(3, 1), (2, 0, 0)], 3) == Subspace.span([e(3, 1)]) and span_of([e(3, 1)], 3).dim == 1
    assert span_of([], 3) == Subspace.zero(3)
    assert span_of([e(4, 1, 3), e(4, 2, 4)]).dim == 2


def test_join_meet_examples():
    assert join(span_of([e(2, 1)]), span_of([e(2, 2)])) == Subspace.full(2)
    assert intersect(span_of([e(3, 1), e(3, 2)]), span_of([e(3, 2), e(3, 3)])) == span_of([e(3, 2)])
    assert intersect(span_of([e(4, 1, 3), e(4, 2, 4)]), span_of([e(4, 1), e(4, 3)])) == span_of([e(4, 1, 3)])


def test_compare_examples():
    assert compare(Subspace.zero(2), span_of([e(2, 1)])) is Relation.LESS
    assert compare(span_of([e(2, 1)]), Subspace.full(2)) is Relation.LESS
    assert compare(span_of([e(2, 1)]), span_of([e(2, 2)])) is Relation.INCOMPARABLE
    assert compare(Subspace.full(2), Subspace.full(2)) is Relation.EQUAL


def test_invariance_examples():
    assert is_invariant(J(2), span_of([e(2, 1)]))
    assert not is_invariant(J(2), span_of([e(2, 2)]))
    assert is_invariant(N22, span_of([e(4, 1, 3), e(4, 2, 4)]))


def test_preimage_examples():
    assert preimage(N22, span_of([e(4, 1)])) == span_of([e(4, 1), e(4, 2), e(4, 3)])
    S = span_of([(1, 2, 0)])
    assert preimage(ExactMatrix.identity(3), S) == S
    assert preimage(ExactMatrix.zeros(3), S) == Subspace.full(3)


@given(subspaces(), subspaces(), subspaces())
def test_lattice_laws(a, b, c):
    assert join(a, b) == join(b, a) and intersect(a, b) == intersect(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
    assert join(a, a) == a == intersect(a, a)
    assert join(a, intersect(a, b)) == a == intersect(a, join(a, b))


@given(subspaces(), subspaces())
def test_dimension_formula(a, b):
    assert join(a, b).dim + intersect(a, b).dim == a.dim + b.dim


@given(subspaces(), subspaces())
def test_order_matches_lattice(a, b):
    assert (a <= b) == (join(a, b) == b) == (intersect(a, b) == a)


@given(vectors(4), vectors(4))
def test_invariant_subspaces_closed_under_lattice_ops(x, y):
    a, b = cyclic_subspace(N22, x), cyclic_subspace(N22, y)
    assert is_invariant(N22, join(a, b)) and is_invariant(N22, intersect(a, b))


@given(subspaces())
def test_constraints_cut_out_subspace(S):
    for row in S.constraints():
        for v in S.vectors:
            assert sum(c * v[j] for j, c in row.items()) == 0
    assert len(S.constraints()) == S.ambient_dim - S.dim


@given(subspaces(), st.data())
def test_preimage_and_image_adjoint(S, data):
    A = ExactMatrix([[data.draw(st.integers(-2, 2)) for _ in range(4)] for _ in range(4)])
    P = preimage(A, S)
    assert image(A, P) <= S
    for v in data.draw(st.lists(vectors(4), max_size=3)):
        assert P.contains(v) == S.contains(A @ v)


def test_interval_preserved_by_fixing_maps():
    # T fixing M and N^{-1}(M) maps every subspace between them into the interval
    M = span_of([e(4, 1, 3)])
    top = preimage(N22, M)
    T = ExactMatrix([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 2, 0], [0, 0, 0, 2]])
    assert image(T, M) == M and image(T, top) == top
    for v in [e(4, 1), e(4, 3), e(4, 2, 4), (1, 3, -1, 3)]:
        W = join(M, span_of([v]))
        if W <= top:
            assert M <= image(T, W) <= top
