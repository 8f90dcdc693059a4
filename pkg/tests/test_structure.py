import random

import pytest
from hypothesis import given, strategies as st

from collat.core import ExactMatrix, gq
from collat.errors import NotNilpotentError, SpectrumError
from collat.opspaces import commutant, commutant_blockwise
from collat.structure import (JordanType, VectorSample, cycle_check, cyclic_chain, cyclic_subspace,
                              group_by_similarity, jordan_basis, jordan_type, jordan_types, nil_index,
                              nilpotent_similarity, partitions, primary_decompose)
from collat.subspace import Subspace, compare, image, intersect, is_invariant, join, preimage, span_of

from conftest import e, random_invertible

J = ExactMatrix.jordan_block
Z = ExactMatrix.zeros
bd = ExactMatrix.block_diag
N22 = bd(J(2), J(2))


def conjugate(N, seed):
    P = random_invertible(N.rows, random.Random(seed))
    return P @ N @ P.inverse()


def test_nil_index_examples():
    assert nil_index(J(3)) == 3
    assert nil_index(N22) == 2
    assert nil_index(Z(3)) == 1
    with pytest.raises(NotNilpotentError):
        nil_index(ExactMatrix.identity(2))


def test_jordan_type_examples():
    assert jordan_type(bd(J(3), J(2))) == JordanType((3, 2))
    assert jordan_type(Z(3)) == JordanType((1, 1, 1))
    assert jordan_type(J(4)) == JordanType((4,))
    assert str(JordanType((2, 2))) == "{2,2}"


def test_partitions_counts():
    assert [len(list(partitions(n))) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]
    assert len(jordan_types(8)) == sum([1, 2, 3, 5, 7, 11, 15, 22])


@pytest.mark.parametrize("jt", jordan_types(6), ids=str)
def test_jordan_basis_reconstructs_type(jt):
    N = conjugate(jt.matrix(), hash(jt.block_sizes) % 1000)
    P, found = jordan_basis(N)
    assert found == jt
    assert P.inverse() @ N @ P == jt.matrix()
    S = nilpotent_similarity(N, jt.matrix())
    assert S is not None and S @ N == jt.matrix() @ S


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_commutant_dimension_formula(sizes):
    jt = JordanType(tuple(sizes))
    assert commutant(jt.matrix()).dim == jt.commutant_dim() == sum(min(a, b) for a in sizes for b in sizes)


def test_cyclic_examples():
    c = cyclic_chain(J(3), e(3, 3))
    assert c.top == Subspace.full(3) and c.height == 2
    assert c.chain == (span_of([e(3, 1)]), span_of([e(3, 1), e(3, 2)]), Subspace.full(3))
    c = cyclic_chain(J(3), e(3, 1))
    assert c.top == span_of([e(3, 1)]) and c.height == 0
    c = cyclic_chain(N22, e(4, 2, 4))
    assert c.top == span_of([e(4, 1, 3), e(4, 2, 4)]) and c.height == 1
    # y = e1 + e2 in (J3)_{e3}: (I + N) is invertible, so (N)_y is a chain member
    assert cyclic_subspace(J(3), e(3, 1, 2)) == span_of([e(3, 1), e(3, 2)])


def test_cycle_check_examples():
    assert cycle_check(J(3), e(3, 3)).passed
    assert cycle_check(N22, e(4, 2)).passed


@pytest.mark.parametrize("jt", jordan_types(4), ids=str)
def test_cycle_property_small_types(jt):
    N = jt.matrix()
    sample = VectorSample(random_count=4, seed=3, grid=(0, 1, -1))
    for x in sample.nonzero_vectors(N.rows)[:12]:
        assert cycle_check(N, x, sample).passed


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_join_of_invariant_subspaces_equal_to_cyclic(x, y):
    # if two invariant subspaces of (N)_x join to (N)_x then one of them is (N)_x
    top = cyclic_subspace(N22, x)
    m1 = cyclic_subspace(N22, y)
    m1 = intersect(m1, top)
    for m2 in (cyclic_subspace(N22, N22 @ x), Subspace.zero(4), top):
        if join(m1, m2) == top:
            assert top in (m1, m2)


def test_primary_decompose_examples():
    pd = primary_decompose(ExactMatrix([[1, 1], [0, 2]]), [1, 2])
    assert pd.components == (span_of([e(2, 1)]), span_of([e(2, 1, 2)]))
    assert all(p.restriction.is_zero() for p in pd.nilpotent_parts)
    pd = primary_decompose(J(2), [0])
    assert pd.components == (Subspace.full(2),) and pd.nilpotent_parts[0].restriction == J(2)
    pd = primary_decompose(ExactMatrix.diag([gq(0, 1)] * 2), [gq(0, 1)])
    assert pd.components == (Subspace.full(2),) and pd.exponents == (1,)


def test_primary_decompose_rejects_wrong_spectrum():
    with pytest.raises(SpectrumError):
        primary_decompose(ExactMatrix([[1, 1], [0, 2]]), [1])
    with pytest.raises(SpectrumError):
        primary_decompose(ExactMatrix([[1, 1], [0, 2]]), [1, 2, 3])


@pytest.mark.parametrize("seed", range(6))
def test_primary_decomposition_frame(seed):
    rng = random.Random(seed)
    lams = [0, 1, gq(1, 1)][: rng.randint(2, 3)]
    blocks = [ExactMatrix.identity(jt.dim).scale(l) + jt.matrix()
              for l, jt in zip(lams, rng.sample(jordan_types(3), len(lams)))]
    A0 = bd(*blocks)
    P = random_invertible(A0.rows, rng)
    A = P @ A0 @ P.inverse()
    pd = primary_decompose(A, lams)
    Q = pd.change_of_basis
    assert Q.inverse() @ A @ Q == pd.canonical_form()
    for V in pd.components:
        assert is_invariant(A, V)


def test_nilpotent_similarity_examples():
    N = bd(J(2), Z(1))
    assert nilpotent_similarity(J(2), J(2)) is not None
    M = conjugate(N, 5)
    S = nilpotent_similarity(N, M)
    assert S is not None and S.is_invertible() and S @ N == M @ S
    assert nilpotent_similarity(N, J(3)) is None


def test_group_by_similarity_examples():
    I2 = ExactMatrix.identity(2)
    pd = primary_decompose(bd(J(2), I2 + J(2)), [0, 1])
    assert group_by_similarity(pd) == [[0, 1]]
    pd = primary_decompose(bd(J(2), ExactMatrix([[2]])), [0, 2])
    assert group_by_similarity(pd) == [[0], [1]]
    pd = primary_decompose(ExactMatrix.diag([1, 2, 3]), [1, 2, 3])
    assert group_by_similarity(pd) == [[0, 1, 2]]


def test_interval_decomposition_on_j2j2():
    # every invariant subspace M lies between K = N M and N^{-1}(K)
    from collat.collineation import lat_j2j2_sample

    for el in lat_j2j2_sample(1):
        M = el.realized
        K = image(N22, M)
        assert K <= M <= preimage(N22, K)


def test_vector_sample_is_deterministic():
    a, b = VectorSample(seed=4), VectorSample(seed=4)
    assert a.vectors(3) == b.vectors(3)
    assert VectorSample(seed=5).random_vectors(3) != a.random_vectors(3)
    assert len(VectorSample(random_count=0).grid_vectors(7)) == 5000
    g = VectorSample(random_count=0).grid_vectors(3)
    assert len(g) == 4 ** 3 and g[0] == (0, 0, 0)
