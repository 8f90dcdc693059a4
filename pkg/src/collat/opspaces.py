"""Linear spaces of matrices: commutants, intertwiners and reflexive covers.

An :class:`OperatorSpace` of ``m x n`` matrices is a :class:`Subspace` of
``Q(i)^{mn}`` under row-major vectorisation, so canonical equality, joins and
meets come for free.  Spaces defined by linear conditions (``AT = TB``, or
``T`` mapping a subspace into another) are computed as kernels of the
linearised system; the Jordan-block closed forms are built directly and serve
as independent checks on the solver.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .core import ONE, ZERO, Echelon, GaussianRational, ExactMatrix, field, kernel_vectors, nullspace, sparse
from .errors import DimensionError, PreconditionError
from .structure import JordanType, VectorSample, nil_index, PrimaryDecomposition
from .subspace import Subspace, intersect, is_invariant, join, range_of


class OperatorSpace:
    __slots__ = ("shape", "space")

    def __init__(self, shape: tuple[int, int], space: Subspace):
        m, n = shape
        if space.ambient_dim != m * n:
            raise DimensionError("vectorised space does not match the shape")
        self.shape = (m, n)
        self.space = space

    @classmethod
    def from_matrices(cls, matrices: Iterable[ExactMatrix], shape: tuple[int, int]) -> OperatorSpace:
        m, n = shape
        mats = list(matrices)
        if any(M.shape != (m, n) for M in mats):
            raise DimensionError("matrices do not share the given shape")
        return cls((m, n), Subspace.span([M.vec() for M in mats], m * n))

    @classmethod
    def from_sparse(cls, vectors: Iterable[dict], shape: tuple[int, int]) -> OperatorSpace:
        return cls(shape, Subspace.from_sparse(vectors, shape[0] * shape[1]))

    @classmethod
    def solve(cls, rows: Iterable[dict], shape: tuple[int, int]) -> OperatorSpace:
        """Space of matrices whose row-major vectorisation solves ``rows``."""
        mn = shape[0] * shape[1]
        return cls.from_sparse(kernel_vectors(rows, mn), shape)

    @classmethod
    def full(cls, m: int, n: int | None = None) -> OperatorSpace:
        n = m if n is None else n
        return cls((m, n), Subspace.full(m * n))

    @classmethod
    def zero(cls, m: int, n: int | None = None) -> OperatorSpace:
        n = m if n is None else n
        return cls((m, n), Subspace.zero(m * n))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[ExactMatrix]:
        m, n = self.shape
        return [ExactMatrix.from_vec(m, n, v) for v in self.space.vectors]

    def contains(self, T: ExactMatrix) -> bool:
        if T.shape != self.shape:
            raise DimensionError(f"expected a {self.shape[0]}x{self.shape[1]} matrix")
        return self.space.contains(T.vec())

    __contains__ = contains

    def combination(self, coeffs: Sequence) -> ExactMatrix:
        if len(coeffs) != self.dim:
            raise DimensionError("need one coefficient per basis element")
        m, n = self.shape
        acc = [ZERO] * (m * n)
        for c, v in zip(coeffs, self.space.vectors):
            c = field(c)
            if c:
                for k, a in enumerate(v):
                    if a:
                        acc[k] = acc[k] + c * a
        return ExactMatrix.from_vec(m, n, acc)

    def random_element(self, rng: random.Random, low: int = -3, high: int = 3) -> ExactMatrix:
        return self.combination([rng.randint(low, high) for _ in range(self.dim)])

    def random_invertible(self, rng: random.Random, low: int = -3, high: int = 3, tries: int = 200) -> ExactMatrix:
        if self.shape[0] != self.shape[1]:
            raise DimensionError("invertible elements need square matrices")
        for _ in range(tries):
            T = self.random_element(rng, low, high)
            if T.is_invertible():
                return T
        raise PreconditionError("no invertible element found; the space may be singular")

    def __eq__(self, other):
        if not isinstance(other, OperatorSpace):
            return NotImplemented
        return self.shape == other.shape and self.space == other.space

    def __hash__(self):
        return hash((self.shape, self.space))

    def __le__(self, other: OperatorSpace) -> bool:
        return self.shape == other.shape and self.space <= other.space

    def __and__(self, other: OperatorSpace) -> OperatorSpace:
        if self.shape != other.shape:
            raise DimensionError("operator spaces of different shapes")
        return OperatorSpace(self.shape, intersect(self.space, other.space))

    def __add__(self, other: OperatorSpace) -> OperatorSpace:
        if self.shape != other.shape:
            raise DimensionError("operator spaces of different shapes")
        return OperatorSpace(self.shape, join(self.space, other.space))

    def __repr__(self):
        return f"OperatorSpace({self.shape[0]}x{self.shape[1]}, dim={self.dim})"


def block_assemble(row_sizes: Sequence[int], col_sizes: Sequence[int],
                   blocks: Mapping[tuple[int, int], OperatorSpace]) -> OperatorSpace:
    """Space of block matrices whose ``(i, j)`` block ranges over ``blocks[i, j]``.

    Missing blocks are zero.
    """
    m, n = sum(row_sizes), sum(col_sizes)
    roff = list(itertools.accumulate([0] + list(row_sizes[:-1])))
    coff = list(itertools.accumulate([0] + list(col_sizes[:-1])))
    vectors = []
    for (i, j), sp in sorted(blocks.items()):
        bm, bn = sp.shape
        if (bm, bn) != (row_sizes[i], col_sizes[j]):
            raise DimensionError(f"block ({i},{j}) has shape {bm}x{bn}")
        for v in sp.space.vectors:
            vec = {}
            for k, a in enumerate(v):
                if a:
                    r, c = divmod(k, bn)
                    vec[(roff[i] + r) * n + coff[j] + c] = a
            vectors.append(vec)
    return OperatorSpace.from_sparse(vectors, (m, n))


def direct_sum(*spaces: OperatorSpace) -> OperatorSpace:
    """Block-diagonal direct sum of square-or-rectangular operator spaces."""
    rows = [s.shape[0] for s in spaces]
    cols = [s.shape[1] for s in spaces]
    return block_assemble(rows, cols, {(i, i): s for i, s in enumerate(spaces)})


# --- spaces defined by linear conditions -----------------------------------------

def intertwiners(A: ExactMatrix, B: ExactMatrix) -> OperatorSpace:
    """``{T : A T = T B}`` for square ``A`` (m x m) and ``B`` (n x n)."""
    if not (A.is_square() and B.is_square()):
        raise DimensionError("intertwiners need square matrices")
    m, n = A.rows, B.rows
    rows = []
    for i in range(m):
        Ai = A.row(i)
        for k in range(n):
            eq: dict = {}
            for j in range(m):
                if Ai[j]:
                    eq[j * n + k] = Ai[j]
            for j in range(n):
                b = B[j, k]
                if b:
                    idx = i * n + j
                    val = eq.get(idx, ZERO) - b
                    if val:
                        eq[idx] = val
                    else:
                        eq.pop(idx, None)
            if eq:
                rows.append(eq)
    return OperatorSpace.solve(rows, (m, n))


def commutant(A: ExactMatrix) -> OperatorSpace:
    """``(A)' = {T : A T = T A}``."""
    return intertwiners(A, A)


def mapping_constraints(source: Subspace, target: Subspace, n: int) -> list[dict]:
    """Linear conditions on ``T`` (row-major, ``n`` columns) for ``T source <= target``.

    One equation ``c . T . b = 0`` per complement constraint ``c`` of the target
    and basis vector ``b`` of the source.
    """
    rows = []
    for c in target.constraints():
        for b in source.vectors:
            eq = {}
            for i, ci in c.items():
                for j, bj in enumerate(b):
                    if bj:
                        eq[i * n + j] = ci * bj
            if eq:
                rows.append(eq)
    return rows


def alg_of(subspaces: Iterable[Subspace], n: int) -> OperatorSpace:
    """``Alg F``: all ``n x n`` matrices leaving every member of ``F`` invariant."""
    rows = []
    for s in subspaces:
        if s.ambient_dim != n:
            raise DimensionError("subspace does not live in the ambient space")
        rows.extend(mapping_constraints(s, s, n))
    return OperatorSpace.solve(rows, (n, n))


def _kernel_range_family(B: ExactMatrix, top: int) -> list[Subspace]:
    fam = []
    P = ExactMatrix.identity(B.rows)
    for _ in range(top):
        P = P @ B
        fam.append(nullspace(P))
        fam.append(range_of(P))
    return fam


def alg_lat_commutant(N: ExactMatrix) -> OperatorSpace:
    """``Alg Lat(N)'`` for nilpotent ``N``.

    The hyperinvariant lattice is generated by the kernels and ranges of the
    powers of ``N``, and invariance under a family passes to sums and
    intersections, so these finitely many subspaces suffice.
    """
    p = nil_index(N)
    return alg_of(_kernel_range_family(N, p - 1), N.rows)


def refl_commutant(pd: PrimaryDecomposition) -> OperatorSpace:
    """Reflexive cover of ``(A)'`` from a primary decomposition of ``A``.

    Uses the kernels and ranges of ``(A - lambda_j)^i``.  For ``i = n_j`` these
    pin down ``V_j`` and its complementary sum, forcing block-diagonal form;
    the lower powers restrict each diagonal block to ``Alg Lat(N_j)'``.
    """
    A = pd.matrix
    fam = []
    for lam, k in zip(pd.eigenvalues, pd.exponents):
        fam.extend(_kernel_range_family(A - ExactMatrix.identity(A.rows).scale(lam), k))
    return alg_of(fam, A.rows)


# --- Jordan-block closed forms -------------------------------------------------------

def jordan_intertwiner_closed_form(m: int, n: int) -> OperatorSpace:
    """``(J_m, J_n)^Int``: ``[0 p(J_m)]`` when ``m <= n``, ``[p(J_n); 0]`` otherwise."""
    if m < 1 or n < 1:
        raise PreconditionError("block sizes must be positive")
    k = min(m, n)
    mats = []
    for power in range(k):
        entries = {}
        for i in range(k - power):
            if m <= n:
                entries[(i, n - m + i + power)] = ONE
            else:
                entries[(i, i + power)] = ONE
        mats.append(_from_entries(m, n, entries))
    return OperatorSpace.from_matrices(mats, (m, n))


def jordan_refl_closed_form(m: int, n: int) -> OperatorSpace:
    """Reflexive cover of ``(J_m, J_n)^Int``: ``[0 V]`` or ``[U; 0]`` with ``U, V`` upper triangular."""
    if m < 1 or n < 1:
        raise PreconditionError("block sizes must be positive")
    k = min(m, n)
    shift = n - m if m <= n else 0
    mats = [_from_entries(m, n, {(i, j + shift): ONE}) for i in range(k) for j in range(i, k)]
    return OperatorSpace.from_matrices(mats, (m, n))


def _from_entries(m: int, n: int, entries: Mapping) -> ExactMatrix:
    rows = [[ZERO] * n for _ in range(m)]
    for (i, j), v in entries.items():
        rows[i][j] = field(v)
    return ExactMatrix._raw(tuple(map(tuple, rows)), m, n)


def _blockwise(jt: JordanType, closed_form) -> OperatorSpace:
    sizes = jt.block_sizes
    blocks = {(i, j): closed_form(a, b) for i, a in enumerate(sizes) for j, b in enumerate(sizes)}
    return block_assemble(sizes, sizes, blocks)


def refl_blockwise(jt: JordanType) -> OperatorSpace:
    """``Refl(N)'`` for ``N`` in canonical form, assembled from the per-block closed forms."""
    return _blockwise(jt, jordan_refl_closed_form)


def commutant_blockwise(jt: JordanType) -> OperatorSpace:
    """``(N)'`` for ``N`` in canonical form, assembled from Toeplitz intertwiner blocks."""
    return _blockwise(jt, jordan_intertwiner_closed_form)


def refl_sampled_superset(S: OperatorSpace, sample: VectorSample = VectorSample()) -> OperatorSpace:
    """``{T : T x in S x}`` intersected over the sampled ``x``.

    Always contains the reflexive cover of ``S``; it is an upper bound whose
    tightness is only known where closed forms exist.
    """
    m, n = S.shape
    basis = S.basis
    e = Echelon(m * n)
    for x in sample.nonzero_vectors(n):
        Sx = Subspace.span([B @ x for B in basis], m)
        for c in Sx.constraints():
            eq = {}
            for i, ci in c.items():
                for j, xj in enumerate(x):
                    if xj:
                        eq[i * n + j] = ci * xj
            e.add(eq)
        if e.rank == m * n:
            break
    return OperatorSpace.solve(e.rows(), (m, n))


# --- the Hankel witness ------------------------------------------------------------

def hankel_coefficients(V: ExactMatrix, y: Sequence) -> list:
    """Coefficients ``xi`` of ``p(z) = sum xi[l] z^l`` with ``p(J_m) y = V y``.

    ``V`` is upper triangular.  With ``k`` the last index where ``y`` is
    nonzero the system is anti-triangular in ``xi[0..k]`` and solved by
    back-substitution; higher coefficients are zero.  ``y = 0`` gives ``p = 0``.
    """
    m = len(y)
    xi = [ZERO] * m
    k = max((i for i in range(m) if y[i]), default=None)
    if k is None:
        return xi
    Vrows = V._rows
    inv = ONE / y[k]
    for i in range(k, -1, -1):
        rhs = ZERO
        row = Vrows[i]
        for j in range(i, k + 1):
            if row[j] and y[j]:
                rhs = rhs + row[j] * y[j]
        for l in range(k - i):
            if xi[l] and y[i + l]:
                rhs = rhs - xi[l] * y[i + l]
        xi[k - i] = rhs * inv
    return xi


def toeplitz_polynomial(xi: Sequence, m: int) -> ExactMatrix:
    """``p(J_m)`` for ``p(z) = sum xi[l] z^l``."""
    return ExactMatrix._raw(tuple(tuple(xi[j - i] if j >= i else ZERO for j in range(m)) for i in range(m)), m, m)


def in_refl_closed_form(T: ExactMatrix, m: int, n: int) -> bool:
    if T.shape != (m, n):
        return False
    k, shift = min(m, n), (n - m if m <= n else 0)
    for i, row in enumerate(T._rows):
        for j, a in enumerate(row):
            if a and not (i < k and shift <= j and j - shift >= i):
                return False
    return True


def is_jordan_intertwiner(S: ExactMatrix) -> bool:
    """Structural check of ``J_m S = S J_n`` (``[0 p(J_m)]`` or ``[p(J_n); 0]`` form)."""
    m, n = S.shape
    k, shift = min(m, n), (n - m if m <= n else 0)
    rows = S._rows
    first = rows[0][shift:shift + k]
    pad = (ZERO,) * shift
    tail = (ZERO,) * (n - shift - k)
    for i in range(k):
        if rows[i] != pad + (ZERO,) * i + first[:k - i] + tail:
            return False
    zero_row = (ZERO,) * n
    return all(r == zero_row for r in rows[k:])


def hankel_witness(m: int, n: int, T: ExactMatrix, x: Sequence) -> ExactMatrix:
    """``S_x`` in ``(J_m, J_n)^Int`` with ``S_x x = T x`` for ``T`` in the reflexive closed form."""
    if m > n:
        raise PreconditionError("hankel_witness needs m <= n")
    if not _in_refl_closed_form_cached(T, m, n):
        raise PreconditionError("T is not in the reflexive closed form [0 V]")
    if len(x) != n:
        raise DimensionError("vector length does not match n")
    off = n - m
    y = [v if type(v) in _FIELD_TYPES else field(v) for v in x[off:]]
    k = m - 1
    while k >= 0 and not y[k]:
        k -= 1
    if k < 0:
        k = None
    pad = (ZERO,) * off
    if k is None:
        row = pad + (ZERO,) * m
        return ExactMatrix._raw((row,) * m, m, n)
    # right-hand side (V y)_i, V being the trailing m x m block of T
    Vy = []
    for i in range(k + 1):
        row = T._rows[i]
        acc = ZERO
        for j in range(i, k + 1):
            a = row[off + j]
            if a and y[j]:
                acc = acc + a * y[j]
        Vy.append(acc)
    inv = ONE / y[k]
    xi = [ZERO] * m
    for i in range(k, -1, -1):
        rhs = Vy[i]
        for l in range(k - i):
            if xi[l] and y[i + l]:
                rhs = rhs - xi[l] * y[i + l]
        xi[k - i] = rhs * inv
    xt = pad + tuple(xi)
    zeros = (ZERO,) * m
    rows = tuple(xt[:off] + zeros[:i] + xt[off:n - i] for i in range(m))
    return ExactMatrix._raw(rows, m, n)


_FIELD_TYPES = (type(ZERO), GaussianRational)


@lru_cache(maxsize=4096)
def _in_refl_closed_form_cached(T: ExactMatrix, m: int, n: int) -> bool:
    return in_refl_closed_form(T, m, n)


# --- hyperinvariant subspaces -----------------------------------------------------

@dataclass(frozen=True)
class HyperinvariantGenerators:
    generators: tuple
    closure: tuple


def lattice_closure(subspaces: Iterable[Subspace]) -> list[Subspace]:
    """Smallest family containing the inputs and closed under sum and intersection."""
    found = set(subspaces)
    frontier = list(found)
    while frontier:
        new = []
        current = list(found)
        for a in frontier:
            for b in current:
                for c in (join(a, b), intersect(a, b)):
                    if c not in found:
                        found.add(c)
                        new.append(c)
        frontier = new
    return sorted(found, key=lambda s: (s.dim, s.pivots, s._rows))


def hyperinvariant_generators(N: ExactMatrix) -> HyperinvariantGenerators:
    p = nil_index(N)
    d = N.rows
    gens = [Subspace.zero(d), Subspace.full(d)] + _kernel_range_family(N, p)
    unique = list(dict.fromkeys(gens))
    return HyperinvariantGenerators(tuple(unique), tuple(lattice_closure(unique)))


def is_hyperinvariant(N: ExactMatrix, M: Subspace) -> bool:
    return all(is_invariant(B, M) for B in commutant(N).basis)
