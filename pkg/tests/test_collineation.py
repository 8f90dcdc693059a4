import random

import pytest
from hypothesis import given, settings, strategies as st

from collat.collineation import (ColParamJ2J2, Verdict, build_swap_collineation, col_check, col_check_sampled,
                                 col_j2j2_decide, col_single_chain_decide, commutant_witness, eq66_check,
                                 extract_permutation, lat_j2j2_sample, theo01_separator)
from collat.core import ExactMatrix
from collat.errors import NotSimilarError, PreconditionError
from collat.opspaces import alg_lat_commutant, commutant, hyperinvariant_generators
from collat.structure import JordanType, VectorSample, jordan_types, primary_decompose
from collat.subspace import Subspace, image, is_invariant, span_of

from conftest import e

J = ExactMatrix.jordan_block
I = ExactMatrix.identity
bd = ExactMatrix.block_diag
N22 = bd(J(2), J(2))
D1112 = ExactMatrix.diag([1, 1, 1, 2])
K = span_of([e(4, 1, 3), e(4, 2, 4)])
SMALL = VectorSample(random_count=8, seed=1, grid=(0, 1, -1))


def random_invertible_in(space, rng):
    while True:
        T = space.random_element(rng)
        if T.is_invertible():
            return T


def test_col_check_examples():
    v = col_check(J(2), ExactMatrix([[1, 1], [0, 2]]))
    assert v.verdict is Verdict.MEMBER_EXACT
    assert any("single-chain: invertible upper-triangular" in s for s in v.decision_path)

    v = col_check(N22, D1112)
    assert v.verdict is Verdict.NON_MEMBER and v.witness.subspace == K
    assert v.witness.verify(N22, D1112)

    A = ExactMatrix.diag([0, 1])
    v = col_check(A, ExactMatrix([[0, 1], [1, 0]]))
    assert v.verdict is Verdict.MEMBER_EXACT and v.permutation == (1, 0)


def test_col_check_not_invertible():
    assert col_check(J(2), ExactMatrix([[0, 1], [0, 0]])).verdict is Verdict.NOT_INVERTIBLE


def test_col_check_sampled_examples():
    assert col_check_sampled(N22, ExactMatrix.diag([1, 2, 1, 2])).passed
    res = col_check_sampled(N22, D1112)
    assert not res.passed and res.witness.verify(N22, D1112)
    for jt in jordan_types(4):
        assert col_check_sampled(jt.matrix(), I(jt.dim), SMALL).passed


def test_col_j2j2_decide_examples():
    p = col_j2j2_decide(I(4))
    assert p.t == 1 and p.gamma == (1, 0, 0, 0, 0, 0, 1, 0)
    p = col_j2j2_decide(ExactMatrix.diag([1, 2, 1, 2]))
    assert p.t == 2 and p.gamma == (1, 0, 0, 0, 0, 0, 1, 0)
    assert col_j2j2_decide(D1112) is None


@given(st.integers(1, 3), st.lists(st.integers(-2, 2), min_size=8, max_size=8))
@settings(max_examples=25)
def test_j2j2_closed_form_agrees_with_sampler(t, gamma):
    p = ColParamJ2J2(t, gamma)
    if not p.valid:
        return
    T = p.matrix()
    assert col_j2j2_decide(T) == p
    assert col_check_sampled(N22, T, SMALL).passed


def test_j2j2_off_form_members_are_refuted():
    rng = random.Random(3)
    A = alg_lat_commutant(N22)
    refuted = 0
    for _ in range(20):
        T = random_invertible_in(A, rng)
        if col_j2j2_decide(T) is None:
            v = col_check(N22, T)
            assert v.verdict is Verdict.NON_MEMBER and v.witness.verify(N22, T)
            refuted += 1
    assert refuted > 0


def test_single_chain_examples():
    rng = random.Random(0)
    upper = random_invertible_in(alg_lat_commutant(J(3)), rng)
    assert col_single_chain_decide(J(3), upper)
    N = bd(J(2), ExactMatrix.zeros(1))
    T = random_invertible_in(alg_lat_commutant(N), rng)
    assert col_single_chain_decide(N, T)
    assert not col_single_chain_decide(J(3), J(3) + J(3) @ J(3))


@pytest.mark.parametrize("jt", [t for t in jordan_types(5) if t.count_at_least(2) <= 1], ids=str)
def test_single_chain_decider_agrees_with_sampler(jt):
    rng = random.Random(jt.dim)
    N = jt.matrix()
    for _ in range(3):
        T = random_invertible_in(alg_lat_commutant(N), rng)
        assert col_single_chain_decide(N, T) == col_check_sampled(N, T, SMALL).passed


def test_separator_examples():
    s = theo01_separator(N22)
    assert s.D == D1112 and s.K == K
    assert image(s.D, s.K) == span_of([e(4, 1, 3), (0, 1, 0, 2)])
    assert s.certificates(N22) == (True, True, True)
    s = theo01_separator(bd(J(3), J(2)))
    assert s.D == ExactMatrix.diag([1, 1, 1, 1, 2]) and s.K == span_of([e(5, 1, 4), e(5, 2, 5)])
    with pytest.raises(PreconditionError):
        theo01_separator(bd(J(2), ExactMatrix.zeros(1)))


@pytest.mark.parametrize("jt", [t for t in jordan_types(7) if t.count_at_least(2) >= 2], ids=str)
def test_separator_certificates(jt):
    assert all(theo01_separator(jt.matrix()).certificates(jt.matrix()))


def test_commutant_witness_examples():
    w = commutant_witness(J(2), ExactMatrix([[1, 1], [0, 2]]), e(2, 2))
    assert w.B == ExactMatrix([[2, 1], [0, 2]]) and w.identity_holds
    assert commutant_witness(N22, I(4), (1, 2, 0, 1)).B == I(4)
    # solvable at x = e2 + e4, but the B found does not reproduce T on (N)_x
    w = commutant_witness(N22, D1112, e(4, 2, 4))
    assert w.B @ e(4, 2, 4) == D1112 @ e(4, 2, 4) and not w.identity_holds


def test_eq66_examples():
    r = eq66_check(N22, ExactMatrix.diag([1, 2, 1, 2]), e(4, 2))
    assert r.passed and r.height == 1
    assert eq66_check(J(3), I(3), e(3, 3)).passed
    r = eq66_check(N22, D1112, e(4, 2, 4))
    assert not r.passed and not r.rows[1].image_equals_cyclic


def test_permutation_examples():
    A = ExactMatrix.diag([0, 1])
    assert extract_permutation(A, I(2)) == (0, 1)
    assert extract_permutation(A, ExactMatrix([[0, 1], [1, 0]])) == (1, 0)
    pd = primary_decompose(A, [0, 1])
    assert build_swap_collineation(A, pd, 0, 1) == ExactMatrix([[0, 1], [1, 0]])
    A = bd(J(2), I(2) + J(2))
    T = build_swap_collineation(A, primary_decompose(A, [0, 1]), 0, 1)
    Z = ExactMatrix.zeros(2)
    assert T == ExactMatrix.vstack(ExactMatrix.hstack(Z, I(2)), ExactMatrix.hstack(I(2), Z))
    assert col_check(A, T).is_member
    A = bd(J(2), ExactMatrix([[2]]))
    with pytest.raises(NotSimilarError):
        build_swap_collineation(A, primary_decompose(A, [0, 2]), 0, 1)


def test_lattice_sample_examples():
    from collat.collineation import _j2j2_element

    assert _j2j2_element("dim1", (1, 0)).realized == span_of([e(4, 1)])
    assert _j2j2_element("dim2", (1, 1, 0, 0)).realized == K
    assert _j2j2_element("preimage3", (1, 0)).realized == span_of([e(4, 1), e(4, 2), e(4, 3)])
    els = lat_j2j2_sample(2)
    assert len(els) == 651
    assert all(is_invariant(N22, el.realized) for el in els)


# --- properties over members ----------------------------------------------------------

def _members(seed, count=6):
    rng = random.Random(seed)
    out = []
    for jt in jordan_types(4):
        N = jt.matrix()
        C = commutant(N)
        for _ in range(count):
            out.append((N, random_invertible_in(C, rng)))
    return out


@pytest.mark.parametrize("N,T", _members(7, 2), ids=lambda x: "")
def test_commutant_members_are_exact(N, T):
    v = col_check(N, T)
    assert v.verdict is Verdict.MEMBER_EXACT
    assert all(f.rule == "prop08" for f in v.factors)


@pytest.mark.parametrize("jt", jordan_types(4), ids=str)
def test_members_fix_hyperinvariant_subspaces(jt):
    N = jt.matrix()
    rng = random.Random(11)
    closure = hyperinvariant_generators(N).closure
    for _ in range(5):
        T = random_invertible_in(alg_lat_commutant(N), rng)
        if col_check(N, T, SMALL).is_member:
            assert all(image(T, M) == M for M in closure)


@pytest.mark.parametrize("jt", jordan_types(4), ids=str)
def test_group_closure(jt):
    N = jt.matrix()
    rng = random.Random(2)
    A = alg_lat_commutant(N)
    members = []
    while len(members) < 2:
        T = random_invertible_in(A, rng)
        if col_check(N, T, SMALL).verdict is Verdict.MEMBER_EXACT:
            members.append(T)
    T1, T2 = members
    assert col_check(N, T1 @ T2, SMALL).is_member
    assert col_check(N, T1.inverse(), SMALL).is_member


@pytest.mark.parametrize("seed", range(8))
def test_refutations_are_sound(seed):
    rng = random.Random(seed)
    jt = rng.choice([t for t in jordan_types(5) if t.count_at_least(2) >= 1])
    N = jt.matrix()
    T = ExactMatrix([[rng.randint(-2, 2) for _ in range(jt.dim)] for _ in range(jt.dim)])
    v = col_check(N, T, SMALL)
    if v.verdict is Verdict.NON_MEMBER and v.witness is not None:
        M, W = v.witness.subspace, v.witness.image
        S = T if v.witness.direction == "forward" else T.inverse()
        assert is_invariant(N, M) and image(S, M) == W and not is_invariant(N, W)


@pytest.mark.parametrize("seed", range(5))
def test_members_split_across_similarity_groups(seed):
    rng = random.Random(seed)
    A0 = bd(J(2), I(1).scale(3), I(2) + J(2))
    P = ExactMatrix([[rng.randint(-2, 2) for _ in range(5)] for _ in range(5)])
    while not P.is_invertible():
        P = ExactMatrix([[rng.randint(-2, 2) for _ in range(5)] for _ in range(5)])
    A = P @ A0 @ P.inverse()
    pd = primary_decompose(A, [0, 3, 1])
    T = build_swap_collineation(A, pd, 0, 2)
    assert col_check(A, T, spectrum=[0, 3, 1]).is_member
    assert extract_permutation(A, T, [0, 3, 1]) == (2, 1, 0)
    Q = pd.change_of_basis
    Tc = Q.inverse() @ T @ Q
    # component 1 (eigenvalue 3) forms its own similarity group
    assert all(Tc[i, 2] == 0 for i in (0, 1, 3, 4)) and all(Tc[2, j] == 0 for j in (0, 1, 3, 4))
