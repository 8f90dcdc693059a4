"""Nilpotent structure and the primary decomposition.

Covers nil-index and Jordan type (from the rank sequence of powers), explicit
Jordan chains, cyclic subspaces with their chains of cyclic subspaces, and the
splitting of a matrix into generalised eigenspaces for a caller-supplied
spectrum.  The spectrum is an input because root finding over Q(i) is not
something exact arithmetic can do in general; it is verified, never guessed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator, Sequence

from gmpy2 import mpq

from .core import ONE, ZERO, Echelon, ExactMatrix, field, format_scalar, nullspace, sparse
from .errors import DimensionError, NotNilpotentError, SpectrumError
from .subspace import Subspace, join, intersect, compare, Relation


# --- sampling -------------------------------------------------------------------

@dataclass(frozen=True)
class VectorSample:
    """Deterministic grid plus seeded random rational vectors.

    The grid is every vector with entries in ``grid``, listed by increasing
    support size so that the coordinate-degenerate vectors come first; above
    dimension 6 it is truncated to ``cap`` vectors.  The random part has
    ``random_count`` vectors with entries ``p/q``, ``p`` in [-9, 9] and ``q`` in
    [1, 9], drawn from ``random.Random(seed)``.
    """

    random_count: int = 32
    seed: int = 0
    grid: tuple = (0, 1, -1, 2)
    cap: int = 5000

    def grid_vectors(self, dim: int) -> list[tuple]:
        return list(_grid_vectors(self.grid, self.cap, dim))

    def random_vectors(self, dim: int) -> list[tuple]:
        return list(_random_vectors(self.random_count, self.seed, dim))

    def vectors(self, dim: int) -> list[tuple]:
        return self.grid_vectors(dim) + self.random_vectors(dim)

    def nonzero_vectors(self, dim: int) -> list[tuple]:
        return [v for v in self.vectors(dim) if any(v)]

    def __len__(self):  # pragma: no cover - convenience only
        raise TypeError("size depends on the dimension; use len(sample.vectors(dim))")


@lru_cache(maxsize=64)
def _grid_vectors(grid: tuple, cap: int, dim: int) -> tuple:
    values = [mpq(v) for v in grid]
    nonzero = [v for v in values if v]
    has_zero = any(not v for v in values)
    out = []
    limit = cap if dim > 6 else None
    supports = range(dim + 1) if has_zero else [dim]
    for s in supports:
        for pos in itertools.combinations(range(dim), s):
            for vals in itertools.product(nonzero, repeat=s):
                v = [ZERO] * dim
                for p, x in zip(pos, vals):
                    v[p] = x
                out.append(tuple(v))
                if limit is not None and len(out) >= limit:
                    return tuple(out)
    return tuple(out)


@lru_cache(maxsize=64)
def _random_vectors(count: int, seed: int, dim: int) -> tuple:
    rng = random.Random(seed)
    return tuple(tuple(mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(dim)) for _ in range(count))


# --- Jordan types -----------------------------------------------------------------

@dataclass(frozen=True)
class JordanType:
    """Multiset of nilpotent Jordan block sizes, stored in descending order."""

    block_sizes: tuple

    def __post_init__(self):
        sizes = tuple(sorted((int(s) for s in self.block_sizes), reverse=True))
        if any(s < 1 for s in sizes):
            raise ValueError("block sizes must be positive")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def dim(self) -> int:
        return sum(self.block_sizes)

    @property
    def nil_index(self) -> int:
        return self.block_sizes[0] if self.block_sizes else 1

    def count_at_least(self, k: int) -> int:
        return sum(1 for s in self.block_sizes if s >= k)

    def offsets(self) -> list[int]:
        return list(itertools.accumulate((0,) + self.block_sizes[:-1])) if self.block_sizes else []

    def matrix(self) -> ExactMatrix:
        """Canonical nilpotent J_{n_1} + ... + J_{n_k} with blocks in descending order."""
        return ExactMatrix.block_diag(*(ExactMatrix.jordan_block(s) for s in self.block_sizes))

    def commutant_dim(self) -> int:
        return sum(min(a, b) for a in self.block_sizes for b in self.block_sizes)

    def __str__(self):
        return "{" + ",".join(map(str, self.block_sizes)) + "}"


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of ``n`` as descending tuples, in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def jordan_types(max_dim: int, min_dim: int = 1) -> list[JordanType]:
    return [JordanType(p) for d in range(min_dim, max_dim + 1) for p in partitions(d)]


# --- nilpotent analysis -----------------------------------------------------------

def _require_square(M: ExactMatrix):
    if not M.is_square():
        raise DimensionError(f"expected a square matrix, got {M.rows}x{M.cols}")


def _power_ranks(N: ExactMatrix) -> list[int]:
    """rank(N^0), rank(N^1), ... down to the first zero power."""
    _require_square(N)
    d = N.rows
    ranks = [d]
    P = N
    for _ in range(d):
        r = P.rank()
        ranks.append(r)
        if r == 0:
            return ranks
        P = P @ N
    raise NotNilpotentError("matrix is not nilpotent")


def is_nilpotent(N: ExactMatrix) -> bool:
    _require_square(N)
    return (N ** N.rows).is_zero()


def nil_index(N: ExactMatrix) -> int:
    """Smallest ``n >= 1`` with ``N^n = 0``; the zero matrix has nil-index 1."""
    ranks = _power_ranks(N)
    return max(1, len(ranks) - 1)


def jordan_type(N: ExactMatrix) -> JordanType:
    ranks = _power_ranks(N)
    # blocks of size >= k: ranks[k-1] - ranks[k]
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    sizes = []
    for k in range(1, len(ge)):
        sizes += [k] * (ge[k - 1] - ge[k])
    return JordanType(tuple(sizes))


def jordan_basis(N: ExactMatrix) -> tuple[ExactMatrix, JordanType]:
    """Columns forming Jordan chains: ``P^{-1} N P`` is the canonical Jordan matrix.

    Tops are chosen level by level from the highest kernel down, always from the
    canonical basis of ``ker N^i``, so the result is deterministic.  For an
    input already in canonical form this returns the identity.
    """
    _require_square(N)
    d = N.rows
    jt = jordan_type(N)
    p = jt.nil_index if d else 0
    kernels = [Subspace.zero(d)]
    P = ExactMatrix.identity(d)
    for _ in range(p):
        P = P @ N
        kernels.append(nullspace(P))
    tops: list[tuple[tuple, int]] = []
    for level in range(p, 0, -1):
        e = kernels[level - 1].echelon()
        for v, length in tops:
            w = v
            for _ in range(length - level):
                w = N @ w
            e.add(sparse(w))
        for b in kernels[level].vectors:
            if e.add(sparse(b)):
                tops.append((b, level))
    columns = []
    for v, length in tops:
        chain = [v]
        for _ in range(length - 1):
            chain.append(N @ chain[-1])
        columns.extend(reversed(chain))
    if len(columns) != d:  # pragma: no cover - guarded by the rank sequence
        raise AssertionError("Jordan chain construction lost vectors")
    return ExactMatrix.from_columns(columns, d), jt


# --- cyclic subspaces -------------------------------------------------------------

def krylov_basis(A: ExactMatrix, x: Sequence) -> list[tuple]:
    """``x, Ax, A^2 x, ...`` up to (excluding) the first dependent vector."""
    _require_square(A)
    x = tuple(field(v) for v in x)
    if len(x) != A.rows:
        raise DimensionError("vector length does not match the matrix")
    e = Echelon(A.rows)
    out = []
    v = x
    while e.add(sparse(v)):
        out.append(v)
        v = A @ v
    return out


def cyclic_subspace(A: ExactMatrix, x: Sequence) -> Subspace:
    """The smallest A-invariant subspace containing ``x``."""
    return Subspace.span(krylov_basis(A, x), A.rows)


@dataclass(frozen=True)
class CyclicChain:
    """``{0} < (N)_{N^k x} < ... < (N)_{N x} < (N)_x`` for nilpotent ``N``.

    ``chain[j]`` is spanned by ``N^k x, ..., N^{k-j} x`` and has dimension
    ``j + 1``; ``height`` is ``k`` (``None`` when ``x = 0``).
    """

    generator: tuple
    height: int | None
    chain: tuple

    @property
    def top(self) -> Subspace:
        return self.chain[-1]


def cyclic_chain(N: ExactMatrix, x: Sequence) -> CyclicChain:
    x = tuple(field(v) for v in x)
    orbit = krylov_basis(N, x)
    if not orbit:
        return CyclicChain(x, None, ())
    if any(N @ orbit[-1]):
        raise NotNilpotentError("cyclic chains are defined for nilpotent matrices")
    k = len(orbit) - 1
    chain = tuple(Subspace.span(orbit[k - j:], N.rows) for j in range(k + 1))
    return CyclicChain(x, k, chain)


@dataclass
class CycleReport:
    generator: tuple
    height: int | None
    tested: int = 0
    violations: list = dc_field(default_factory=list)
    pairs_tested: int = 0
    pair_violations: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.pair_violations


def cycle_check(N: ExactMatrix, x: Sequence, sample: VectorSample = VectorSample()) -> CycleReport:
    """Check that every sampled invariant subspace inside ``(N)_x`` is a chain member.

    Vectors ``y`` of ``(N)_x`` are drawn as coefficient vectors against the
    orbit ``x, Nx, ...``.  Each ``(N)_y`` must equal the chain member of its
    dimension.  Consecutive samples also exercise the join property: if two
    invariant subspaces join to ``(N)_x`` then one of them is all of it, and
    if the sum is direct the other is zero.
    """
    cc = cyclic_chain(N, x)
    report = CycleReport(cc.generator, cc.height)
    if cc.height is None:
        return report
    orbit = krylov_basis(N, x)
    n = N.rows
    top = cc.top
    subspaces = []
    for coeffs in sample.nonzero_vectors(len(orbit)):
        y = tuple(sum((c * v[i] for c, v in zip(coeffs, orbit) if c), ZERO) for i in range(n))
        My = cyclic_subspace(N, y)
        report.tested += 1
        if My.dim == 0 or My != cc.chain[My.dim - 1]:
            report.violations.append(y)
        subspaces.append(My)
    for a, b, c in zip(subspaces, subspaces[1:], subspaces[2:]):
        for m1, m2 in ((a, b), (a, join(b, c))):
            report.pairs_tested += 1
            if compare(m1, m2) is Relation.INCOMPARABLE:
                report.pair_violations.append((m1, m2))
                continue
            if join(m1, m2) == top and top not in (m1, m2):
                report.pair_violations.append((m1, m2))
            elif join(m1, m2) == top and intersect(m1, m2).dim == 0 and min(m1.dim, m2.dim) != 0:
                report.pair_violations.append((m1, m2))
    return report


# --- primary decomposition -----------------------------------------------------

@dataclass(frozen=True)
class NilpotentPart:
    """Nilpotent part ``N_j`` of one primary component.

    ``restriction`` is ``N_j`` in the canonical basis of ``V_j``;
    ``jordan_frame`` is a ``d x dim V_j`` matrix whose columns are Jordan
    chains, so ``A @ frame = frame @ (lambda I + jordan_type.matrix())``.
    """

    restriction: ExactMatrix
    jordan_type: JordanType
    jordan_frame: ExactMatrix

    @property
    def canonical(self) -> ExactMatrix:
        return self.jordan_type.matrix()


@dataclass(frozen=True)
class PrimaryDecomposition:
    matrix: ExactMatrix
    eigenvalues: tuple
    exponents: tuple
    components: tuple  # Subspace per eigenvalue
    nilpotent_parts: tuple

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.components]

    @property
    def offsets(self) -> list[int]:
        return list(itertools.accumulate([0] + self.dims[:-1]))

    @property
    def change_of_basis(self) -> ExactMatrix:
        """``P`` with ``P^{-1} A P`` equal to :meth:`canonical_form`."""
        return ExactMatrix.hstack(*(np_.jordan_frame for np_ in self.nilpotent_parts))

    def canonical_form(self) -> ExactMatrix:
        blocks = []
        for lam, part in zip(self.eigenvalues, self.nilpotent_parts):
            k = part.jordan_type.dim
            blocks.append(ExactMatrix.identity(k).scale(lam) + part.canonical)
        return ExactMatrix.block_diag(*blocks)

    def describe(self) -> str:
        parts = [f"{format_scalar(l)}^{n} {p.jordan_type}" for l, n, p in
                 zip(self.eigenvalues, self.exponents, self.nilpotent_parts)]
        return "; ".join(parts)


def _shift(A: ExactMatrix, lam) -> ExactMatrix:
    return A - ExactMatrix.identity(A.rows).scale(lam)


def primary_decompose(A: ExactMatrix, spectrum: Sequence) -> PrimaryDecomposition:
    """Split ``A`` into generalised eigenspaces for the given distinct eigenvalues."""
    _require_square(A)
    d = A.rows
    lams = [field(l) for l in spectrum]
    if len(set(lams)) != len(lams):
        raise SpectrumError("duplicate eigenvalue in spectrum")
    if not lams and d:
        raise SpectrumError("empty spectrum")
    prod = ExactMatrix.identity(d)
    for lam in lams:
        prod = prod @ (_shift(A, lam) ** d)
    if not prod.is_zero():
        raise SpectrumError("spectrum incomplete or incorrect: prod (A - lambda I)^d != 0")
    comps, exps, parts = [], [], []
    for lam in lams:
        B = _shift(A, lam)
        Bk = ExactMatrix.identity(d)
        prev = Subspace.zero(d)
        k = 0
        while True:
            Bk = Bk @ B
            K = nullspace(Bk)
            if K.dim == prev.dim:
                break
            prev, k = K, k + 1
        if k == 0:
            raise SpectrumError(f"{format_scalar(lam)} is not an eigenvalue")
        V = prev
        # restriction of B to V in V's canonical basis: coordinates sit at pivots
        images = [B @ v for v in V.vectors]
        R = ExactMatrix.from_columns([V.coordinates(w) for w in images], V.dim)
        Q, jt = jordan_basis(R)
        frame = V.basis @ Q
        comps.append(V)
        exps.append(k)
        parts.append(NilpotentPart(R, jt, frame))
    return PrimaryDecomposition(A, tuple(lams), tuple(exps), tuple(comps), tuple(parts))


def infer_spectrum(A: ExactMatrix) -> list:
    """Spectrum of ``A`` when it can be read off exactly, else ``SpectrumError``.

    Works for triangular matrices (distinct diagonal entries) and for matrices
    with a single eigenvalue ``trace/d``.
    """
    _require_square(A)
    d = A.rows
    if A.is_upper_triangular() or A.is_lower_triangular():
        return list(dict.fromkeys(A[i, i] for i in range(d)))
    lam = A.trace() / d
    if is_nilpotent(_shift(A, lam)):
        return [field(lam)]
    raise SpectrumError("cannot determine the spectrum exactly; supply it explicitly")


def nilpotent_similarity(N1: ExactMatrix, N2: ExactMatrix) -> ExactMatrix | None:
    """Invertible ``S`` with ``S N1 = N2 S``, or ``None`` if the Jordan types differ."""
    P1, t1 = jordan_basis(N1)
    P2, t2 = jordan_basis(N2)
    if t1 != t2:
        return None
    return P2 @ P1.inverse()


def group_by_similarity(pd: PrimaryDecomposition) -> list[list[int]]:
    """Partition component indices (0-based) by similarity of their nilpotent parts."""
    groups: dict[JordanType, list[int]] = {}
    for i, part in enumerate(pd.nilpotent_parts):
        groups.setdefault(part.jordan_type, []).append(i)
    return list(groups.values())
