"""Exact arithmetic over the Gaussian rationals Q(i).

Scalars come in two flavours.  Real values are stored as ``gmpy2.mpq`` and
non-real values as :class:`GaussianRational`; the two interoperate through the
usual numeric protocol, compare equal when they denote the same number and hash
identically.  :func:`field` normalises anything scalar-like into that
representation.  Keeping the real case on ``mpq`` matters: almost every matrix
this package touches is real, and ``mpq`` is an order of magnitude faster than a
pair of Python fractions.

Row reduction is done on sparse rows (``dict`` column -> nonzero value) through
:class:`Echelon`, which keeps its rows fully reduced at all times.  Sorting
those rows by pivot yields the unique reduced row echelon form, so ``rref`` and
every canonical form downstream are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import DimensionError, ParseError, SingularMatrixError

_MPQ = type(mpq(0))
ZERO = mpq(0)
ONE = mpq(1)


class GaussianRational:
    """The number ``re + im*i`` with rational ``re`` and ``im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, str):
            value = parse_scalar(re)
            if im:
                raise TypeError("string form already carries the imaginary part")
            re, im = real_part(value), imag_part(value)
        self.re = _as_mpq(re)
        self.im = _as_mpq(im)

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re + other.re, self.im + other.im)
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re + o, self.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re - other.re, self.im - other.im)
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re - o, self.im)

    def __rsub__(self, other):
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(o - self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational._make(a * c - b * d, a * d + b * c)
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            c, d = other.re, other.im
            n = c * c + d * d
            if not n:
                raise ZeroDivisionError("division by zero in Q(i)")
            a, b = self.re, self.im
            return GaussianRational._make((a * c + b * d) / n, (b * c - a * d) / n)
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._make(self.re / o, self.im / o)

    def __rtruediv__(self, other):
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(o, ZERO) / self

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        o = _coerce_real(other)
        if o is None:
            return NotImplemented
        return not self.im and self.re == o

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational('{format_scalar(self)}')"

    def __str__(self):
        return format_scalar(self)


def _as_mpq(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, GaussianRational):
        if x.im:
            raise TypeError(f"{x} is not real")
        return x.re
    if isinstance(x, str):
        v = parse_scalar(x)
        if isinstance(v, GaussianRational):
            raise TypeError(f"{x!r} is not real")
        return v
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return mpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _coerce_real(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    return None


def field(x):
    """Normalise ``x`` to the internal representation of an element of Q(i).

    Accepts ints, Fractions, mpq values, GaussianRationals, scalar strings in the
    text grammar, and Python complex numbers whose parts are integral.
    """
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, GaussianRational):
        return x if x.im else x.re
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError("only integral complex literals are accepted; use strings for fractions")
        return field(GaussianRational(int(x.real), int(x.imag)))
    return _as_mpq(x)


def gq(re=0, im=0):
    """Shorthand constructor returning the normalised scalar ``re + im*i``."""
    return field(GaussianRational(re, im))


def real_part(x):
    return x.re if isinstance(x, GaussianRational) else field(x)


def imag_part(x):
    return x.im if isinstance(x, GaussianRational) else ZERO


def _norm(x):
    if isinstance(x, GaussianRational) and not x.im:
        return x.re
    return x


# --- scalar text grammar ---------------------------------------------------

_RAT = r"\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^([+-]?{_RAT})$")
_IMAG_RE = re.compile(rf"^([+-]?)({_RAT})?i$")
_BOTH_RE = re.compile(rf"^([+-]?{_RAT})([+-])({_RAT})?i$")


def _rational(text, sign=""):
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    value = mpq(int(num), int(den) if den else 1)
    return -value if sign == "-" else value


def parse_scalar(text: str):
    """Parse ``3``, ``-1/2``, ``3+1/2i``, ``-i`` and friends into a field element."""
    s = text.strip()
    m = _REAL_RE.match(s)
    if m:
        body = m.group(1)
        sign = "-" if body.startswith("-") else ""
        return _rational(body.lstrip("+-"), sign)
    m = _IMAG_RE.match(s)
    if m:
        im = _rational(m.group(2) or "1", m.group(1))
        return field(GaussianRational(0, im))
    m = _BOTH_RE.match(s)
    if m:
        body = m.group(1)
        re_ = _rational(body.lstrip("+-"), "-" if body.startswith("-") else "")
        im = _rational(m.group(3) or "1", m.group(2))
        return field(GaussianRational(re_, im))
    raise ParseError(f"malformed scalar {text!r}")


def _format_rational(q) -> str:
    return str(q)


def format_scalar(x) -> str:
    x = field(x)
    if not isinstance(x, GaussianRational):
        return _format_rational(x)
    re_, im = x.re, x.im
    mag = abs(im)
    coef = "" if mag == 1 else _format_rational(mag)
    if not re_:
        return ("-" if im < 0 else "") + coef + "i"
    return _format_rational(re_) + ("-" if im < 0 else "+") + coef + "i"


# --- sparse elimination ------------------------------------------------------

def sparse(vec: Sequence) -> dict:
    return {i: x for i, x in enumerate(vec) if x}


def dense(row: dict, n: int) -> tuple:
    return tuple(row.get(i, ZERO) for i in range(n))


class Echelon:
    """Reduced row echelon basis of a growing set of sparse vectors.

    Invariant: every stored row has a 1 in its pivot column and zeros in the
    pivot columns of all other rows.  Reducing a vector is therefore a single
    pass over the pivots it touches.
    """

    __slots__ = ("ncols", "_rows")

    def __init__(self, ncols: int, vectors: Iterable = ()):
        self.ncols = ncols
        self._rows: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[dict]:
        return [self._rows[p] for p in sorted(self._rows)]

    def reduce(self, v) -> dict:
        """Residual of ``v`` (dense or sparse) modulo the stored row space."""
        v = dict(v) if isinstance(v, dict) else sparse(v)
        rows = self._rows
        for p in [k for k in v if k in rows]:
            c = v[p]
            for k, a in rows[p].items():
                val = v.get(k, ZERO) - c * a
                if val:
                    v[k] = val
                else:
                    v.pop(k, None)
        return v

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def add(self, v) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = ONE / r[p]
        r = {k: _norm(a * inv) for k, a in r.items()}
        for row in self._rows.values():
            c = row.get(p)
            if c:
                for k, a in r.items():
                    val = row.get(k, ZERO) - c * a
                    if val:
                        row[k] = _norm(val)
                    else:
                        row.pop(k, None)
        self._rows[p] = r
        return True


# --- dense matrices ------------------------------------------------------------

class ExactMatrix:
    """Immutable dense matrix over Q(i).

    Vectors are plain tuples of field elements; ``M @ v`` accepts any sequence
    and returns a tuple.
    """

    __slots__ = ("rows", "cols", "_rows", "_hash")

    def __init__(self, data, shape: tuple[int, int] | None = None):
        rows = tuple(tuple(field(x) for x in row) for row in data)
        if shape is None:
            if not rows:
                raise DimensionError("empty matrix needs an explicit shape")
            shape = (len(rows), len(rows[0]))
        m, n = shape
        if len(rows) != m or any(len(r) != n for r in rows):
            raise DimensionError(f"entries do not form a {m}x{n} matrix")
        self.rows, self.cols = m, n
        self._rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, rows, m, n):
        obj = object.__new__(cls)
        obj.rows, obj.cols = m, n
        obj._rows = rows
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> ExactMatrix:
        n = m if n is None else n
        return cls._raw(tuple((ZERO,) * n for _ in range(m)), m, n)

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values) -> ExactMatrix:
        vals = [field(v) for v in values]
        n = len(vals)
        return cls._raw(tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def jordan_block(cls, m: int) -> ExactMatrix:
        """Nilpotent Jordan block J_m: ones on the superdiagonal."""
        return cls._raw(tuple(tuple(ONE if j == i + 1 else ZERO for j in range(m)) for i in range(m)), m, m)

    @classmethod
    def unit(cls, m: int, n: int, k: int, l: int) -> ExactMatrix:
        """Standard unit matrix with a single 1 at 0-based position (k, l)."""
        return cls._raw(tuple(tuple(ONE if (i, j) == (k, l) else ZERO for j in range(n)) for i in range(m)), m, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> ExactMatrix:
        cols = [tuple(field(x) for x in c) for c in columns]
        if nrows is None:
            if not cols:
                raise DimensionError("empty column list needs nrows")
            nrows = len(cols[0])
        if any(len(c) != nrows for c in cols):
            raise DimensionError("columns of unequal length")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), nrows, len(cols))

    @classmethod
    def from_vec(cls, m: int, n: int, vec: Sequence) -> ExactMatrix:
        """Inverse of :meth:`vec` (row-major)."""
        v = [field(x) for x in vec]
        if len(v) != m * n:
            raise DimensionError("vector length does not match shape")
        return cls._raw(tuple(tuple(v[i * n:(i + 1) * n]) for i in range(m)), m, n)

    @staticmethod
    def block_diag(*blocks: ExactMatrix) -> ExactMatrix:
        m = sum(b.rows for b in blocks)
        n = sum(b.cols for b in blocks)
        out = [[ZERO] * n for _ in range(m)]
        r = c = 0
        for b in blocks:
            for i, row in enumerate(b._rows):
                out[r + i][c:c + b.cols] = row
            r += b.rows
            c += b.cols
        return ExactMatrix._raw(tuple(map(tuple, out)), m, n)

    direct_sum = block_diag

    @staticmethod
    def hstack(*mats: ExactMatrix) -> ExactMatrix:
        m = mats[0].rows
        if any(x.rows != m for x in mats):
            raise DimensionError("hstack needs equal row counts")
        rows = tuple(tuple(e for x in mats for e in x._rows[i]) for i in range(m))
        return ExactMatrix._raw(rows, m, sum(x.cols for x in mats))

    @staticmethod
    def vstack(*mats: ExactMatrix) -> ExactMatrix:
        n = mats[0].cols
        if any(x.cols != n for x in mats):
            raise DimensionError("vstack needs equal column counts")
        rows = tuple(r for x in mats for r in x._rows)
        return ExactMatrix._raw(rows, len(rows), n)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        return tuple(e for r in self._rows for e in r)

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def vec(self) -> tuple:
        return self.entries

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(rows), len(cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> ExactMatrix:
        return self.submatrix(range(r0, r1), range(c0, c1))

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(r[j] for r in self._rows) for j in range(self.cols)),
                                self.cols, self.rows)

    # predicates
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(x for r in self._rows for x in r)

    def is_upper_triangular(self) -> bool:
        return all(not self._rows[i][j] for i in range(self.rows) for j in range(min(i, self.cols)))

    def is_lower_triangular(self) -> bool:
        return all(not self._rows[i][j] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_diagonal(self) -> bool:
        return self.is_upper_triangular() and self.is_lower_triangular()

    # arithmetic
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._rows))
        return self._hash

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return ExactMatrix._raw(tuple(tuple(_norm(a + b) for a, b in zip(r, s))
                                      for r, s in zip(self._rows, other._rows)), self.rows, self.cols)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return ExactMatrix._raw(tuple(tuple(_norm(a - b) for a, b in zip(r, s))
                                      for r, s in zip(self._rows, other._rows)), self.rows, self.cols)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self.rows, self.cols)

    def scale(self, c) -> ExactMatrix:
        c = field(c)
        return ExactMatrix._raw(tuple(tuple(_norm(c * a) for a in r) for r in self._rows), self.rows, self.cols)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            n = other.cols
            orows = other._rows
            out = []
            for r in self._rows:
                acc = [ZERO] * n
                for k, a in enumerate(r):
                    if a:
                        ok = orows[k]
                        for j in range(n):
                            b = ok[j]
                            if b:
                                acc[j] = acc[j] + a * b
                out.append(tuple(_norm(x) for x in acc))
            return ExactMatrix._raw(tuple(out), self.rows, n)
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} matrix to length-{len(v)} vector")
        out = []
        for r in self._rows:
            acc = ZERO
            for a, b in zip(r, v):
                if a and b:
                    acc = acc + a * b
            if type(acc) is GaussianRational and not acc.im:
                acc = acc.re
            out.append(acc)
        return tuple(out)

    def apply(self, v) -> tuple:
        return self @ v

    def __pow__(self, k: int) -> ExactMatrix:
        if not self.is_square():
            raise DimensionError("powers need a square matrix")
        result = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def rank(self) -> int:
        return Echelon(self.cols, (sparse(r) for r in self._rows)).rank

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> ExactMatrix:
        if not self.is_square():
            raise DimensionError("only square matrices have inverses")
        n = self.rows
        aug = Echelon(2 * n, (sparse(r + tuple(ONE if j == i else ZERO for j in range(n)))
                              for i, r in enumerate(self._rows)))
        if aug.pivots != list(range(n)):
            raise SingularMatrixError("matrix is singular")
        rows = aug.rows()
        return ExactMatrix._raw(tuple(tuple(row.get(n + j, ZERO) for j in range(n)) for row in rows), n, n)

    def trace(self):
        return _norm(sum((self._rows[i][i] for i in range(min(self.rows, self.cols))), ZERO))

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self._rows)
        return f"ExactMatrix({self.rows}x{self.cols} [{body}])"


def _dot(r, v):
    acc = ZERO
    for a, b in zip(r, v):
        if a and b:
            acc = acc + a * b
    return acc


def vector(*xs) -> tuple:
    """Build a vector (tuple of field elements); accepts varargs or one iterable."""
    if len(xs) == 1 and not isinstance(xs[0], (int, str, Fraction, _MPQ, GaussianRational)):
        xs = tuple(xs[0])
    return tuple(field(x) for x in xs)


def basis_vector(n: int, i: int) -> tuple:
    """The standard basis vector e_{i+1} of length ``n`` (``i`` is 0-based)."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def vadd(u, v) -> tuple:
    return tuple(_norm(a + b) for a, b in zip(u, v))


def vscale(c, v) -> tuple:
    return tuple(_norm(c * a) for a in v)


def is_zero_vector(v) -> bool:
    return not any(v)


# --- elimination ops --------------------------------------------------------------

def rref(M: ExactMatrix) -> tuple[ExactMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns of ``M``."""
    e = Echelon(M.cols, (sparse(r) for r in M._rows))
    rows = [dense(r, M.cols) for r in e.rows()]
    rank = len(rows)
    rows += [(ZERO,) * M.cols] * (M.rows - rank)
    return ExactMatrix._raw(tuple(rows), M.rows, M.cols), rank, e.pivots


def kernel_vectors(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Sparse basis of the solution space of the homogeneous system ``rows``."""
    e = Echelon(ncols, rows)
    piv = e._rows
    free = [c for c in range(ncols) if c not in piv]
    # column index -> list of (pivot, coefficient) for fast assembly
    by_col: dict[int, list] = {}
    for p, row in piv.items():
        for k, a in row.items():
            if k != p:
                by_col.setdefault(k, []).append((p, a))
    out = []
    for f in free:
        v = {f: ONE}
        for p, a in by_col.get(f, ()):
            v[p] = -a
        out.append(v)
    return out


def nullspace(M: ExactMatrix):
    """Kernel of ``M`` as a canonical :class:`~collat.subspace.Subspace`."""
    from .subspace import Subspace

    return Subspace.from_sparse(kernel_vectors((sparse(r) for r in M._rows), M.cols), M.cols)


@dataclass(frozen=True)
class AffineSolution:
    """All solutions of ``A x = b``: ``particular + homogeneous``."""

    particular: tuple
    homogeneous: object  # Subspace

    @property
    def unique(self) -> bool:
        return self.homogeneous.dim == 0


def solve_linear(A: ExactMatrix, b: Sequence) -> AffineSolution | None:
    """Solve ``A x = b`` exactly; ``None`` when the system is inconsistent.

    The particular solution sets every free variable to zero.
    """
    b = tuple(field(x) for x in b)
    if len(b) != A.rows:
        raise DimensionError("right-hand side length does not match A")
    n = A.cols
    e = Echelon(n + 1, (sparse(r + (bi,)) for r, bi in zip(A._rows, b)))
    if n in e._rows:
        return None
    x = [ZERO] * n
    for p, row in e._rows.items():
        x[p] = row.get(n, ZERO)
    return AffineSolution(tuple(x), nullspace(A))
