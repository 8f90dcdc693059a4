"""Command-line front end.

Every subcommand prints a report of ``key: value`` lines in a fixed order::

    command: colcheck
    input.A: j2j2.mat sha256:3f1c...
    seed: 0
    outcome: NonMember
    ...
    timing: 0.012s

Re-running with the same inputs and seed reproduces the report exactly, apart
from the final ``timing`` line.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import collineation, opspaces, structure
from .core import parse_scalar
from .errors import CollatError, DimensionError, NoWitnessError, ParseError, PreconditionError
from .formats import inline_matrix, inline_subspace, parse_matrix, parse_vector
from .structure import VectorSample

EXIT_OK, EXIT_REFUTED, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: list = dc_field(default_factory=list)  # (name, source, digest)
    seed: int | None = None
    outcome: str = ""
    fields: list = dc_field(default_factory=list)  # (key, value)
    seconds: float | None = None

    def add(self, key: str, value) -> None:
        self.fields.append((key, str(value)))

    def lines(self, timing: bool = True) -> list[str]:
        out = [f"command: {self.command}"]
        out += [f"input.{name}: {src} sha256:{digest}" for name, src, digest in self.inputs]
        if self.seed is not None:
            out.append(f"seed: {self.seed}")
        out.append(f"outcome: {self.outcome}")
        out += [f"{k}: {v}" for k, v in self.fields]
        if timing and self.seconds is not None:
            out.append(f"timing: {self.seconds:.3f}s")
        return out

    def render(self, timing: bool = True) -> str:
        return "\n".join(self.lines(timing)) + "\n"


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(report: RunReport, name: str, path: str):
    text = _read(path)
    report.inputs.append((name, path, _digest(text)))
    try:
        return parse_matrix(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_vector(report: RunReport, name: str, arg: str) -> tuple:
    text = _read(arg) if Path(arg).is_file() else arg
    report.inputs.append((name, arg, _digest(text)))
    return parse_vector(text)


def _parse_spectrum(text: str | None):
    if text is None:
        return None
    return [parse_scalar(t.strip()) for t in text.split(",") if t.strip()]


def _add_space(report: RunReport, S: opspaces.OperatorSpace) -> None:
    report.add("dim", S.dim)
    for i, B in enumerate(S.basis):
        report.add(f"basis[{i}]", inline_matrix(B))


# --- subcommands -----------------------------------------------------------------------

def cmd_commutant(args, report):
    A, _ = _load_matrix(report, "A", args.A)
    _add_space(report, opspaces.commutant(A))
    report.outcome = "ok"
    return EXIT_OK


def cmd_intertwine(args, report):
    A, _ = _load_matrix(report, "A", args.A)
    B, _ = _load_matrix(report, "B", args.B)
    _add_space(report, opspaces.intertwiners(A, B))
    report.outcome = "ok"
    return EXIT_OK


def cmd_alglat(args, report):
    N, spectrum = _load_matrix(report, "N", args.N)
    spectrum = _parse_spectrum(args.spectrum) or spectrum
    if spectrum is None and structure.is_nilpotent(N):
        S = opspaces.alg_lat_commutant(N)
    else:
        S = collineation.refl_commutant(N, spectrum)
    _add_space(report, S)
    report.outcome = "ok"
    return EXIT_OK


def cmd_jordan(args, report):
    N, _ = _load_matrix(report, "N", args.N)
    P, jt = structure.jordan_basis(N)
    report.add("jordan_type", jt)
    report.add("nil_index", jt.nil_index)
    report.add("change_of_basis", inline_matrix(P))
    report.outcome = "ok"
    return EXIT_OK


def cmd_decompose(args, report):
    A, spectrum = _load_matrix(report, "A", args.A)
    spectrum = _parse_spectrum(args.spectrum) or spectrum or structure.infer_spectrum(A)
    pd = structure.primary_decompose(A, spectrum)
    report.add("components", pd.describe())
    report.add("dims", " ".join(map(str, pd.dims)))
    report.add("groups", " ".join("{" + ",".join(map(str, g)) + "}" for g in structure.group_by_similarity(pd)))
    report.add("change_of_basis", inline_matrix(pd.change_of_basis))
    report.add("canonical_form", inline_matrix(pd.canonical_form()))
    report.outcome = "ok"
    return EXIT_OK


def cmd_colcheck(args, report):
    A, spectrum = _load_matrix(report, "A", args.A)
    T, _ = _load_matrix(report, "T", args.T)
    spectrum = _parse_spectrum(args.spectrum) or spectrum
    sample = VectorSample(random_count=args.samples, seed=args.seed)
    report.seed = args.seed
    v = collineation.col_check(A, T, sample, spectrum)
    report.outcome = str(v.verdict)
    for i, step in enumerate(v.decision_path):
        report.add(f"path[{i}]", step)
    if v.permutation is not None:
        report.add("permutation", collineation._format_perm(v.permutation))
    if v.sample_stats is not None:
        report.add("vectors_tested", v.sample_stats.vectors_tested)
        report.add("subspaces_tested", v.sample_stats.subspaces_tested)
    if v.witness is not None:
        w = v.witness
        report.add("witness.direction", w.direction)
        report.add("witness.source", w.source)
        report.add("witness.subspace", inline_subspace(w.subspace))
        report.add("witness.image", inline_subspace(w.image))
    return EXIT_OK if v.is_member else EXIT_REFUTED


def cmd_witness(args, report):
    N, _ = _load_matrix(report, "N", args.N)
    T, _ = _load_matrix(report, "T", args.T)
    x = _load_vector(report, "x", args.x)
    try:
        cw = collineation.commutant_witness(N, T, x)
    except NoWitnessError as exc:
        report.outcome = "refuted"
        report.add("reason", exc)
        return EXIT_REFUTED
    report.add("B", inline_matrix(cw.B))
    report.add("identity_holds", cw.identity_holds)
    if structure.is_nilpotent(N):
        eq = collineation.eq66_check(N, T, x)
        report.add("height", eq.height)
        for row in eq.rows:
            report.add(f"row[{row.j}]", f"image_equals_cyclic={row.image_equals_cyclic} "
                                        f"cyclic_commute={row.cyclic_commute}")
        report.add("annihilated", eq.annihilated)
    report.outcome = "ok" if cw.identity_holds else "refuted"
    return EXIT_OK if cw.identity_holds else EXIT_REFUTED


def cmd_separator(args, report):
    N, _ = _load_matrix(report, "N", args.N)
    sep = collineation.theo01_separator(N)
    certs = sep.certificates(N)
    report.add("D", inline_matrix(sep.D))
    report.add("K", inline_subspace(sep.K))
    report.add("D_in_alg_lat", certs[0])
    report.add("K_invariant", certs[1])
    report.add("DK_not_invariant", certs[2])
    report.outcome = "ok" if all(certs) else "refuted"
    return EXIT_OK if all(certs) else EXIT_REFUTED


def cmd_sample_lattice(args, report):
    elems = collineation.lat_j2j2_sample(grid=args.grid)
    report.add("count", len(elems))
    for i, e in enumerate(elems):
        report.add(f"elem[{i}]", f"{e.label()} {inline_subspace(e.realized)}")
    report.outcome = "ok"
    return EXIT_OK


def cmd_verify(args, report):
    from .acceptance import CRITERIA, run_all

    selected = None
    if args.suite not in (None, "all"):
        try:
            selected = [int(s) for s in args.suite.split(",")]
        except ValueError:
            raise ParseError(f"suite must be 'all' or a comma list of criterion numbers, got {args.suite!r}")
        unknown = [k for k in selected if k not in CRITERIA]
        if unknown:
            raise ParseError(f"unknown criteria {unknown}")
    results = run_all(selected)
    for r in results:
        report.add(f"criterion[{r.number}]", f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}")
    ok = all(r.ok for r in results)
    report.outcome = f"{sum(r.ok for r in results)}/{len(results)} passed"
    return EXIT_OK if ok else EXIT_REFUTED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="collat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *positional, help=None):
        sp = sub.add_parser(name, help=help)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=func)
        return sp

    add("commutant", cmd_commutant, "A", help="basis of the commutant of A")
    add("intertwine", cmd_intertwine, "A", "B", help="basis of {T : A T = T B}")
    add("alglat", cmd_alglat, "N", help="reflexive cover of the commutant").add_argument("--spectrum")
    add("jordan", cmd_jordan, "N", help="Jordan type and basis of a nilpotent matrix")
    add("decompose", cmd_decompose, "A", help="primary decomposition").add_argument(
        "--spectrum", help="distinct eigenvalues, comma separated")
    cc = add("colcheck", cmd_colcheck, "A", "T", help="decide T in Col(A)")
    cc.add_argument("--seed", type=int, default=0)
    cc.add_argument("--samples", type=int, default=VectorSample().random_count)
    cc.add_argument("--spectrum")
    add("witness", cmd_witness, "N", "T", "x", help="commutant element agreeing with T at x")
    add("separator", cmd_separator, "N", help="diagonal separator for two blocks of size >= 2")
    add("sample-lattice-j2j2", cmd_sample_lattice, help="grid sample of Lat(J2+J2)").add_argument(
        "--grid", type=int, default=2)
    add("verify", cmd_verify, help="run acceptance criteria").add_argument("suite", nargs="?", default="all")
    return p


def dispatch(argv: list[str] | None = None, out=None, err=None) -> tuple[int, RunReport]:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    report = RunReport(args.command)
    start = time.perf_counter()
    try:
        code = args.func(args, report)
    except (ParseError, DimensionError) as exc:
        report.outcome, code = "input error", EXIT_INPUT
        print(f"error: {exc}", file=err)
    except PreconditionError as exc:
        report.outcome, code = "precondition error", EXIT_PRECONDITION
        print(f"error: {exc}", file=err)
    except CollatError as exc:  # pragma: no cover - remaining library refutations
        report.outcome, code = "refuted", EXIT_REFUTED
        print(f"error: {exc}", file=err)
    report.seconds = time.perf_counter() - start
    out.write(report.render())
    return code, report


def main(argv: list[str] | None = None) -> int:
    return dispatch(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
