import io

import pytest
from hypothesis import given, strategies as st

from collat.cli import dispatch
from collat.core import ExactMatrix
from collat.errors import ParseError
from collat.formats import (format_matrix, format_opspace, format_subspace, format_vector, parse_matrix,
                            parse_opspace, parse_subspace, parse_vector)
from collat.opspaces import OperatorSpace, alg_lat_commutant
from collat.subspace import span_of

from conftest import gaussians, matrices, scalars

J2J2 = "4 4\n0 1 0 0\n0 0 0 0\n0 0 0 1\n0 0 0 0\n"
D1112 = "4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 2\n"


@given(matrices(entries=scalars), st.lists(gaussians, max_size=3))
def test_matrix_roundtrip(M, eigs):
    assert parse_matrix(format_matrix(M)) == (M, None)
    assert parse_matrix(format_matrix(M, eigs)) == (M, eigs)


@given(st.lists(scalars, min_size=1, max_size=5))
def test_vector_roundtrip(v):
    assert parse_vector(format_vector(v)) == tuple(v)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), max_size=3))
def test_subspace_roundtrip(vs):
    S = span_of(vs, 3)
    assert parse_subspace(format_subspace(S)) == S


def test_opspace_roundtrip():
    S = alg_lat_commutant(ExactMatrix.jordan_block(3))
    assert parse_opspace(format_opspace(S)) == S
    Z = OperatorSpace.zero(2, 3)
    assert parse_opspace(format_opspace(Z)) == Z


def test_comments_and_blank_lines():
    M, eigs = parse_matrix("# a comment\n\n2 2\n1 i\n\n0 -1/2\nspectrum: 1 -1/2\n")
    assert M == ExactMatrix([[1, parse_vector("i")[0]], [0, parse_vector("-1/2")[0]]]) and eigs == [1, M[1, 1]]


@pytest.mark.parametrize("text, line, column", [
    ("2 2\n1 x\n0 1\n", 2, 3),
    ("2 2\n1 0\n", None, None),
    ("2 2\n1 0 0\n0 1\n", 2, 1),
    ("2 two\n", 1, 3),
    ("1 1\n1\nextra\n", 3, 1),
])
def test_parse_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_matrix(text)
    if line is not None:
        assert exc.value.line == line and exc.value.column == column


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code, report = dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"j2j2.mat": J2J2, "diag1112.mat": D1112, "id3.mat": "3 3\n1 0 0\n0 1 0\n0 0 1\n",
                       "bad.mat": "2 2\n1 1/0\n0 1\n", "swap.mat": "2 2\n0 1\n1 0\n",
                       "a01.mat": "2 2\n0 0\n0 1\nspectrum: 0 1\n"}.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def fields(out):
    return dict(line.split(": ", 1) for line in out.splitlines())


def test_cli_colcheck_refutes_with_witness(files):
    code, out, _ = run(["colcheck", files["j2j2.mat"], files["diag1112.mat"]])
    f = fields(out)
    assert code == 1 and f["outcome"] == "NonMember" and f["seed"] == "0"
    assert f["witness.subspace"] == "dim 2 span{(1, 0, 1, 0), (0, 1, 0, 1)}"


def test_cli_colcheck_permutation(files):
    code, out, _ = run(["colcheck", files["a01.mat"], files["swap.mat"]])
    assert code == 0 and fields(out)["permutation"] == "[1 0]"


def test_cli_alglat_and_commutant(files):
    code, out, _ = run(["alglat", files["j2j2.mat"]])
    assert code == 0 and fields(out)["dim"] == "12"
    code, out, _ = run(["commutant", files["id3.mat"]])
    assert code == 0 and fields(out)["dim"] == "9"


def test_cli_exit_codes(files):
    code, _, err = run(["commutant", files["bad.mat"]])
    assert code == 2 and "line 2, column 3" in err
    assert run(["commutant", "/nonexistent.mat"])[0] == 2
    assert run(["separator", files["id3.mat"]])[0] == 3
    assert run(["intertwine", files["id3.mat"], files["j2j2.mat"]])[0] == 0
    assert run(["witness", files["j2j2.mat"], files["diag1112.mat"], "0,1,0,1"])[0] == 1
    assert run(["witness", files["j2j2.mat"], files["diag1112.mat"], "0,1,0"])[0] == 2


def test_cli_other_commands(files):
    code, out, _ = run(["separator", files["j2j2.mat"]])
    assert code == 0 and fields(out)["D"] == "4x4 [1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 2]"
    code, out, _ = run(["jordan", files["j2j2.mat"]])
    assert fields(out)["jordan_type"] == "{2,2}"
    code, out, _ = run(["decompose", files["diag1112.mat"], "--spectrum", "1,2"])
    assert fields(out)["components"] == "1^1 {1,1,1}; 2^1 {1}"
    code, out, _ = run(["sample-lattice-j2j2", "--grid", "1"])
    assert fields(out)["count"] == "91"


def test_cli_reports_are_deterministic(files):
    argv = ["colcheck", files["j2j2.mat"], files["diag1112.mat"], "--seed", "3", "--samples", "5"]
    a, b = run(argv)[1], run(argv)[1]
    strip = lambda s: [l for l in s.splitlines() if not l.startswith("timing:")]
    assert strip(a) == strip(b)
    assert a.splitlines()[-1].startswith("timing:")


def test_cli_verify_subset():
    code, out, _ = run(["verify", "1,9"])
    assert code == 0 and fields(out)["outcome"] == "2/2 passed"
    assert run(["verify", "99"])[0] == 2
