"""Canonical subspaces of Q(i)^n and the lattice operations on them.

A subspace is stored as the nonzero rows of the reduced row echelon form of any
spanning set.  Transposed, those rows are the reduced column echelon basis, so
two subspaces are equal exactly when their stored rows are equal.

The canonical basis also gives a cheap complement: writing ``P`` for the pivot
coordinates, ``v`` lies in the subspace iff ``v - sum_p v[p] * b_p`` vanishes.
The non-pivot coordinates of that residual are the rows of
:meth:`Subspace.constraints`, a matrix whose kernel is the subspace.  Invariance,
containment, preimages and intersections are all phrased through it.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Sequence

from .core import ZERO, ONE, Echelon, ExactMatrix, dense, field, kernel_vectors, sparse
from .errors import DimensionError


class Subspace:
    __slots__ = ("ambient_dim", "_rows", "pivots", "_constraints", "_hash")

    def __init__(self, ambient_dim: int, rows: tuple, pivots: tuple):
        # use the classmethods; this trusts its input to be canonical
        self.ambient_dim = ambient_dim
        self._rows = rows
        self.pivots = pivots
        self._constraints = None
        self._hash = None

    @classmethod
    def from_echelon(cls, e: Echelon, n: int) -> Subspace:
        rows = e.rows()
        return cls(n, tuple(dense(r, n) for r in rows), tuple(e.pivots))

    @classmethod
    def from_sparse(cls, vectors: Iterable[dict], n: int) -> Subspace:
        return cls.from_echelon(Echelon(n, vectors), n)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int | None = None) -> Subspace:
        vecs = [tuple(field(x) for x in v) for v in vectors]
        if ambient_dim is None:
            if not vecs:
                raise DimensionError("span of no vectors needs ambient_dim")
            ambient_dim = len(vecs[0])
        if any(len(v) != ambient_dim for v in vecs):
            raise DimensionError("vectors have mixed ambient dimensions")
        return cls.from_echelon(Echelon(ambient_dim, (sparse(v) for v in vecs)), ambient_dim)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), tuple(range(n)))

    @classmethod
    def column_space(cls, M: ExactMatrix) -> Subspace:
        return cls.span(M.columns(), M.rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def vectors(self) -> list[tuple]:
        """Canonical basis vectors (the columns of :attr:`basis`)."""
        return list(self._rows)

    @property
    def basis(self) -> ExactMatrix:
        """Reduced column echelon basis, an ``ambient_dim x dim`` matrix."""
        n = self.ambient_dim
        return ExactMatrix._raw(tuple(tuple(r[i] for r in self._rows) for i in range(n)), n, self.dim)

    def constraints(self) -> list[dict]:
        """Sparse rows ``c`` (one per non-pivot coordinate) with ``ker C = self``."""
        if self._constraints is None:
            n = self.ambient_dim
            piv = set(self.pivots)
            cons = []
            for q in range(n):
                if q in piv:
                    continue
                row = {q: ONE}
                for p, b in zip(self.pivots, self._rows):
                    if b[q]:
                        row[p] = -b[q]
                cons.append(row)
            self._constraints = cons
        return self._constraints

    def constraint_matrix(self) -> ExactMatrix:
        n = self.ambient_dim
        cons = self.constraints()
        return ExactMatrix._raw(tuple(dense(c, n) for c in cons), len(cons), n)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        for c in self.constraints():
            acc = ZERO
            for k, a in c.items():
                x = v[k]
                if x:
                    acc = acc + a * x
            if acc:
                return False
        return True

    __contains__ = contains

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` (assumed to lie in the subspace) in the canonical basis."""
        return tuple(field(v[p]) for p in self.pivots)

    def echelon(self) -> Echelon:
        return Echelon(self.ambient_dim, (sparse(r) for r in self._rows))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self._rows))
        return self._hash

    def __le__(self, other: Subspace) -> bool:
        return is_contained(self, other)

    def __lt__(self, other: Subspace) -> bool:
        return self.dim < other.dim and is_contained(self, other)

    def __add__(self, other: Subspace) -> Subspace:
        return join(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def __repr__(self):
        from .core import format_scalar

        vecs = ", ".join("(" + ",".join(format_scalar(x) for x in r) + ")" for r in self._rows)
        return f"Subspace(n={self.ambient_dim}, dim={self.dim}, [{vecs}])"


class Relation(Enum):
    EQUAL = "equal"
    LESS = "less"  # first strictly contained in second
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def _check_ambient(*spaces: Subspace):
    n = spaces[0].ambient_dim
    if any(s.ambient_dim != n for s in spaces):
        raise DimensionError("subspaces live in different ambient spaces")


def span_of(vectors: Sequence[Sequence], ambient_dim: int | None = None) -> Subspace:
    """Canonical span; the empty list spans the zero subspace of ``ambient_dim``."""
    return Subspace.span(vectors, ambient_dim)


def join(s1: Subspace, s2: Subspace) -> Subspace:
    """Lattice join, i.e. the sum ``s1 + s2``."""
    _check_ambient(s1, s2)
    e = s1.echelon()
    for r in s2._rows:
        e.add(sparse(r))
    return Subspace.from_echelon(e, s1.ambient_dim)


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Lattice meet: the kernel of the stacked complement constraints."""
    _check_ambient(s1, s2)
    n = s1.ambient_dim
    return Subspace.from_sparse(kernel_vectors(s1.constraints() + s2.constraints(), n), n)


def is_contained(s1: Subspace, s2: Subspace) -> bool:
    _check_ambient(s1, s2)
    if s1.dim > s2.dim:
        return False
    return all(s2.contains(v) for v in s1._rows)


def compare(s1: Subspace, s2: Subspace) -> Relation:
    le, ge = is_contained(s1, s2), is_contained(s2, s1)
    if le and ge:
        return Relation.EQUAL
    if le:
        return Relation.LESS
    if ge:
        return Relation.GREATER
    return Relation.INCOMPARABLE


def image(T: ExactMatrix, s: Subspace) -> Subspace:
    """``T s`` as a canonical subspace of the codomain."""
    if T.cols != s.ambient_dim:
        raise DimensionError("matrix does not act on this subspace")
    return Subspace.span([T @ v for v in s._rows], T.rows)


def is_invariant(A: ExactMatrix, s: Subspace) -> bool:
    """True iff ``A s`` is contained in ``s``."""
    if not A.is_square() or A.rows != s.ambient_dim:
        raise DimensionError("invariance needs a square matrix acting on the ambient space")
    return all(s.contains(A @ v) for v in s._rows)


def preimage(A: ExactMatrix, s: Subspace) -> Subspace:
    """``{x : A x in s}``, the kernel of (complement projector) o A."""
    if A.rows != s.ambient_dim:
        raise DimensionError("preimage needs A to map into the ambient space of s")
    n = A.cols
    rows = []
    for c in s.constraints():
        acc: dict = {}
        for k, a in c.items():
            for j, x in enumerate(A.row(k)):
                if x:
                    val = acc.get(j, ZERO) + a * x
                    if val:
                        acc[j] = val
                    else:
                        acc.pop(j, None)
        if acc:
            rows.append(acc)
    return Subspace.from_sparse(kernel_vectors(rows, n), n)


def kernel(A: ExactMatrix) -> Subspace:
    from .core import nullspace

    return nullspace(A)


def range_of(A: ExactMatrix) -> Subspace:
    return Subspace.column_space(A)


def embed(s: Subspace, offset: int, ambient_dim: int) -> Subspace:
    """Place ``s`` in coordinates ``offset .. offset+dim`` of a larger space."""
    pad_l = (ZERO,) * offset
    pad_r = (ZERO,) * (ambient_dim - offset - s.ambient_dim)
    rows = tuple(pad_l + r + pad_r for r in s._rows)
    return Subspace(ambient_dim, rows, tuple(p + offset for p in s.pivots))
