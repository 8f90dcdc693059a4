"""Text formats for matrices, vectors, subspaces and operator spaces.

Matrix file::

    2 2
    1 1/2
    0 -i
    spectrum: 0 1+i

Line 1 holds ``rows cols``; then one line of whitespace-separated scalars per
row; an optional trailing ``spectrum:`` line lists eigenvalues.  Blank lines and
lines starting with ``#`` are ignored.  A subspace is written as the line
``subspace <n>`` followed by its canonical ``n x dim`` basis matrix; an operator
space as ``opspace <m> <n> <dim>`` followed by its basis matrices.
"""

from __future__ import annotations

from typing import Sequence

from .core import ExactMatrix, format_scalar, parse_scalar
from .errors import ParseError
from .opspaces import OperatorSpace
from .subspace import Subspace


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            out.append((no, line))
    return out


def _parse_scalar_at(token: str, line: int, column: int):
    try:
        return parse_scalar(token)
    except ParseError as exc:
        raise ParseError(str(exc), line, column) from None


def _tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out, col, n = [], 0, len(line)
    while col < n:
        while col < n and line[col].isspace():
            col += 1
        start = col
        while col < n and not line[col].isspace():
            col += 1
        if col > start:
            out.append((start + 1, line[start:col]))
    return out


def _parse_header(lines, pos: int, what: str, count: int) -> list[int]:
    if pos >= len(lines):
        raise ParseError(f"missing {what} header", None)
    no, line = lines[pos]
    toks = _tokens(line)
    if len(toks) != count:
        raise ParseError(f"{what} header needs {count} integers", no, 1)
    vals = []
    for col, t in toks:
        if not t.isdigit():
            raise ParseError(f"expected a non-negative integer, got {t!r}", no, col)
        vals.append(int(t))
    return vals


def _parse_matrix_lines(lines, pos: int) -> tuple[ExactMatrix, int]:
    rows, cols = _parse_header(lines, pos, "matrix", 2)
    pos += 1
    data = []
    for r in range(rows):
        if cols == 0:
            data.append([])
            continue
        if pos >= len(lines):
            raise ParseError(f"expected {rows} rows, found {r}", lines[-1][0] if lines else None)
        no, line = lines[pos]
        toks = _tokens(line)
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries, found {len(toks)}", no, 1)
        data.append([_parse_scalar_at(t, no, col) for col, t in toks])
        pos += 1
    return ExactMatrix(data, (rows, cols)), pos


def _parse_spectrum_line(no: int, line: str) -> list:
    body = line.split(":", 1)[1]
    offset = line.index(":") + 1
    return [_parse_scalar_at(t, no, offset + col) for col, t in _tokens(body)]


def parse_matrix(text: str) -> tuple[ExactMatrix, list | None]:
    """Parse a matrix file; returns the matrix and the optional spectrum."""
    lines = _content_lines(text)
    M, pos = _parse_matrix_lines(lines, 0)
    spectrum = None
    if pos < len(lines):
        no, line = lines[pos]
        if line.strip().startswith("spectrum:"):
            spectrum = _parse_spectrum_line(no, line)
            pos += 1
        if pos < len(lines):
            no, line = lines[pos]
            raise ParseError("unexpected trailing content", no, 1)
    return M, spectrum


def format_matrix(M: ExactMatrix, spectrum: Sequence | None = None) -> str:
    out = [f"{M.rows} {M.cols}"]
    out += [" ".join(format_scalar(x) for x in row) for row in M._rows] if M.cols else [""] * 0
    if spectrum is not None:
        out.append("spectrum: " + " ".join(format_scalar(s) for s in spectrum))
    return "\n".join(out) + "\n"


def inline_matrix(M: ExactMatrix) -> str:
    """One-line form used in reports: ``2x2 [1 0; 0 1]``."""
    body = "; ".join(" ".join(format_scalar(x) for x in row) for row in M._rows)
    return f"{M.rows}x{M.cols} [{body}]"


def inline_vector(v: Sequence) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v) + ")"


def inline_subspace(S: Subspace) -> str:
    return f"dim {S.dim} span{{{', '.join(inline_vector(v) for v in S.vectors)}}}"


def parse_vector(text: str) -> tuple:
    """A vector given as a comma list (``1,0,-1/2``) or whitespace-separated scalars."""
    body = " ".join(line for _, line in _content_lines(text))
    toks = _tokens(body.replace(",", " "))
    if not toks:
        raise ParseError("empty vector", 1, 1)
    return tuple(_parse_scalar_at(t, 1, col) for col, t in toks)


def format_vector(v: Sequence) -> str:
    return ",".join(format_scalar(x) for x in v) + "\n"


def format_subspace(S: Subspace) -> str:
    return f"subspace {S.ambient_dim}\n" + format_matrix(S.basis)


def parse_subspace(text: str) -> Subspace:
    lines = _content_lines(text)
    if not lines or not lines[0][1].split()[0] == "subspace":
        raise ParseError("expected 'subspace <n>'", lines[0][0] if lines else None, 1)
    no, line = lines[0]
    toks = line.split()
    if len(toks) != 2 or not toks[1].isdigit():
        raise ParseError("expected 'subspace <n>'", no, 1)
    n = int(toks[1])
    B, pos = _parse_matrix_lines(lines, 1)
    if B.rows != n:
        raise ParseError(f"basis has {B.rows} rows, expected {n}", lines[1][0], 1)
    if pos < len(lines):
        raise ParseError("unexpected trailing content", lines[pos][0], 1)
    return Subspace.span(B.columns(), n)


def format_opspace(S: OperatorSpace) -> str:
    m, n = S.shape
    return f"opspace {m} {n} {S.dim}\n" + "".join(format_matrix(B) for B in S.basis)


def parse_opspace(text: str) -> OperatorSpace:
    lines = _content_lines(text)
    if not lines or lines[0][1].split()[0] != "opspace":
        raise ParseError("expected 'opspace <m> <n> <dim>'", lines[0][0] if lines else None, 1)
    no, line = lines[0]
    toks = line.split()
    if len(toks) != 4 or not all(t.isdigit() for t in toks[1:]):
        raise ParseError("expected 'opspace <m> <n> <dim>'", no, 1)
    m, n, dim = map(int, toks[1:])
    pos = 1
    mats = []
    for _ in range(dim):
        B, pos = _parse_matrix_lines(lines, pos)
        if B.shape != (m, n):
            raise ParseError(f"basis matrix is {B.rows}x{B.cols}, expected {m}x{n}", lines[pos - 1][0], 1)
        mats.append(B)
    if pos < len(lines):
        raise ParseError("unexpected trailing content", lines[pos][0], 1)
    return OperatorSpace.from_matrices(mats, (m, n))
