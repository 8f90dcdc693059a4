"""The eleven acceptance criteria as runnable checks.

Each ``criterion_<k>`` returns a :class:`CriterionResult` with the pass flag,
a short detail line, the elapsed wall time and the time limit.  ``passed``
covers correctness only; callers compare ``seconds`` with ``limit`` separately
so a slow machine reports a timing miss instead of a wrong answer.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .collineation import (ColParamJ2J2, Verdict, build_swap_collineation, col_check, col_check_sampled,
                           col_j2j2_decide, eq66_check, extract_permutation, lat_j2j2_sample,
                           refl_commutant, theo01_separator)
from .core import ExactMatrix, gq
from .opspaces import (OperatorSpace, alg_lat_commutant, commutant, direct_sum, hankel_witness,
                       intertwiners, is_jordan_intertwiner, jordan_intertwiner_closed_form,
                       jordan_refl_closed_form, refl_blockwise)
from .structure import JordanType, VectorSample, cycle_check, jordan_types, partitions, primary_decompose


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def within_limit(self) -> bool:
        return self.seconds <= self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_limit

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.2f}s/{self.limit:.0f}s"
        return f"[{status}] criterion {self.number:2d} {self.name}: {self.detail} ({timing})"


def _timed(number: int, name: str, limit: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    passed, detail = body()
    return CriterionResult(number, name, passed, detail, time.perf_counter() - t0, limit)


J = ExactMatrix.jordan_block


def _units(m: int, n: int, positions) -> OperatorSpace:
    return OperatorSpace.from_matrices([ExactMatrix.unit(m, n, i, j) for i, j in positions], (m, n))


def _random_invertible(rng: random.Random, d: int, low: int = -2, high: int = 2) -> ExactMatrix:
    while True:
        M = ExactMatrix([[rng.randint(low, high) for _ in range(d)] for _ in range(d)])
        if M.is_invertible():
            return M


# --- 1 ---------------------------------------------------------------------------

def criterion_1() -> CriterionResult:
    def body():
        bad = []
        for m in range(1, 7):
            for n in range(1, 7):
                solved = intertwiners(J(m), J(n))
                closed = jordan_intertwiner_closed_form(m, n)
                if solved != closed or solved.dim != min(m, n):
                    bad.append((m, n))
        return not bad, f"36 pairs, mismatches {bad}" if bad else "36 pairs (m,n) <= 6 agree, dim = min(m,n)"

    return _timed(1, "intertwiner closed form", 5, body)


# --- 2 ---------------------------------------------------------------------------

def criterion_2() -> CriterionResult:
    def body():
        bad = []
        types = jordan_types(8)
        for jt in types:
            if alg_lat_commutant(jt.matrix()) != refl_blockwise(jt):
                bad.append(str(jt))
        j22 = alg_lat_commutant(JordanType((2, 2)).matrix())
        zero = {(1, 0), (1, 2), (3, 0), (3, 2)}
        pattern = _units(4, 4, [(i, j) for i in range(4) for j in range(4) if (i, j) not in zero])
        dim32 = alg_lat_commutant(JordanType((3, 2)).matrix()).dim
        ok = not bad and j22.dim == 12 and j22 == pattern and dim32 == 15
        return ok, (f"{len(types)} types, mismatches {bad}; dim{{2,2}}={j22.dim}, "
                    f"pattern {'matches' if j22 == pattern else 'differs'}; dim{{3,2}}={dim32}")

    return _timed(2, "reflexive cover of commutants", 20, body)


# --- 3 ---------------------------------------------------------------------------

def _j2j2_commutant_display() -> OperatorSpace:
    E = lambda *pos: sum((ExactMatrix.unit(4, 4, i, j) for i, j in pos[1:]), ExactMatrix.unit(4, 4, *pos[0]))
    mats = [E((0, 0), (1, 1)), E((0, 1)), E((0, 2), (1, 3)), E((0, 3)),
            E((2, 0), (3, 1)), E((2, 1)), E((2, 2), (3, 3)), E((2, 3))]
    return OperatorSpace.from_matrices(mats, (4, 4))


def criterion_3() -> CriterionResult:
    def body():
        c22 = commutant(JordanType((2, 2)).matrix())
        types = jordan_types(8)
        bad = [str(jt) for jt in types if commutant(jt.matrix()).dim != jt.commutant_dim()]
        ok = c22.dim == 8 and c22 == _j2j2_commutant_display() and not bad
        return ok, f"dim (J2+J2)' = {c22.dim}; {len(types)} types, sum-min mismatches {bad}"

    return _timed(3, "commutant dimensions", 10, body)


# --- 4 ---------------------------------------------------------------------------

def criterion_4(members_per_type: int = 100) -> CriterionResult:
    def body():
        separated = chains = 0
        problems = []
        sample = VectorSample()
        for jt in jordan_types(7):
            N = jt.matrix()
            if jt.count_at_least(2) >= 2:
                sep = theo01_separator(N)
                if not all(sep.certificates(N)):
                    problems.append(f"separator {jt}")
                separated += 1
                continue
            chains += 1
            alg = alg_lat_commutant(N)
            rng = random.Random(400 + sum(b * 10 ** i for i, b in enumerate(jt.block_sizes)))
            for _ in range(members_per_type):
                T = alg.random_invertible(rng)
                verdict = col_check(N, T, sample)
                sampled = col_check_sampled(N, T, sample)
                if verdict.verdict is not Verdict.MEMBER_EXACT or not sampled.passed:
                    problems.append(f"member {jt}")
                    break
        detail = (f"{separated} separated types certified, {chains} single-chain types x "
                  f"{members_per_type} members exact and sample-clean")
        return not problems, detail + (f"; problems {problems}" if problems else "")

    return _timed(4, "two-block dichotomy", 30, body)


# --- 5 ---------------------------------------------------------------------------

def random_j2j2_param(rng: random.Random, low: int = -3, high: int = 3) -> ColParamJ2J2:
    while True:
        p = ColParamJ2J2(rng.randint(low, high), [rng.randint(low, high) for _ in range(8)])
        if p.valid:
            return p


def criterion_5(count: int = 500) -> CriterionResult:
    def body():
        N = JordanType((2, 2)).matrix()
        grid = [e.realized for e in lat_j2j2_sample(2)]
        sample = VectorSample(random_count=1000)
        rng = random.Random(5)
        member_ok = 0
        for _ in range(count):
            T = random_j2j2_param(rng).matrix()
            if col_j2j2_decide(T) is not None and col_check_sampled(N, T, sample, grid).passed:
                member_ok += 1
        alg = alg_lat_commutant(N)
        refuted = 0
        while refuted < count:
            T = alg.random_invertible(rng)
            if col_j2j2_decide(T) is not None:
                continue
            v = col_check(N, T, sample)
            if v.verdict is not Verdict.NON_MEMBER or v.witness is None or not v.witness.verify(N, T):
                break
            refuted += 1
        ok = member_ok == count and refuted == count
        return ok, f"closed-form members passing {member_ok}/{count}; non-closed-form refuted {refuted}/{count}"

    return _timed(5, "J2+J2 characterisation", 30, body)


# --- 6 ---------------------------------------------------------------------------

def criterion_6(count: int = 200) -> CriterionResult:
    def body():
        types = jordan_types(6)
        bad = []
        for jt in types:
            N = jt.matrix()
            comm = commutant(N)
            rng = random.Random(600 + jt.dim * 31 + len(jt.block_sizes))
            for _ in range(count):
                T = comm.random_invertible(rng)
                v = col_check(N, T)
                if v.verdict is not Verdict.MEMBER_EXACT or any(f.rule != "prop08" for f in v.factors):
                    bad.append(str(jt))
                    break
        return not bad, f"{len(types)} types x {count} commutant elements MemberExact via prop08; failures {bad}"

    return _timed(6, "invertible commutant elements", 10, body)


# --- 7 ---------------------------------------------------------------------------

def _certified_members(rng: random.Random, count: int) -> list[tuple[ExactMatrix, ExactMatrix]]:
    pool = [jt for jt in jordan_types(6, 2) if jt.nil_index >= 2]
    out = []
    i = 0
    while len(out) < count:
        jt = pool[i % len(pool)]
        i += 1
        N = jt.matrix()
        if jt == JordanType((2, 2)) and i % 2:
            T = random_j2j2_param(rng).matrix()
        elif jt.count_at_least(2) <= 1 and i % 2:
            T = alg_lat_commutant(N).random_invertible(rng)
        else:
            T = commutant(N).random_invertible(rng)
        if col_check(N, T).verdict is Verdict.MEMBER_EXACT:
            out.append((N, T))
    return out


def criterion_7(members: int = 100, vectors: int = 100) -> CriterionResult:
    def body():
        rng = random.Random(7)
        failures = 0
        checked = 0
        for idx, (N, T) in enumerate(_certified_members(rng, members)):
            xs = VectorSample(random_count=vectors, seed=idx, grid=()).vectors(N.rows)
            for x in xs:
                rep = eq66_check(N, T, x)
                checked += 1
                if not rep.passed:
                    failures += 1
        return failures == 0, f"{checked} (member, x) pairs, identity or annihilation failures {failures}"

    return _timed(7, "cyclic image identities", 10, body)


# --- 8 ---------------------------------------------------------------------------

def _random_nilpotent(rng: random.Random, jt: JordanType) -> ExactMatrix:
    P = _random_invertible(rng, jt.dim, -1, 1)
    return P @ jt.matrix() @ P.inverse()


def criterion_8(count: int = 50) -> CriterionResult:
    def body():
        rng = random.Random(8)
        bad = 0
        for _ in range(count):
            s = rng.randint(1, 3)
            sizes = []
            budget = 8
            for _ in range(s):
                if budget - (s - len(sizes) - 1) < 1:
                    break
                k = rng.randint(1, min(4, budget - (s - len(sizes) - 1)))
                sizes.append(k)
                budget -= k
            eigen = []
            while len(eigen) < len(sizes):
                lam = gq(rng.randint(-3, 3), rng.randint(-3, 3))
                if lam not in eigen:
                    eigen.append(lam)
            blocks, nilps = [], []
            for k, lam in zip(sizes, eigen):
                parts = [JordanType(p) for p in partitions(k)]
                Nj = _random_nilpotent(rng, rng.choice(parts))
                nilps.append(Nj)
                blocks.append(ExactMatrix.identity(k).scale(lam) + Nj)
            A = ExactMatrix.block_diag(*blocks)
            comm_ok = commutant(A) == direct_sum(*(commutant(B) for B in blocks))
            refl_ok = refl_commutant(A, eigen) == direct_sum(*(alg_lat_commutant(Nj) for Nj in nilps))
            if not (comm_ok and refl_ok):
                bad += 1
        return bad == 0, f"{count} block-diagonal matrices, commutant/reflexive-cover splitting failures {bad}"

    return _timed(8, "primary decomposition splittings", 10, body)


# --- 9 ---------------------------------------------------------------------------

def criterion_9(count: int = 20) -> CriterionResult:
    def body():
        rng = random.Random(9)
        bad = 0
        for idx in range(count):
            three = idx % 2 == 1
            k = rng.randint(1, 3)
            jt = JordanType(rng.choice(list(partitions(k))))
            eig = [0, 1, 2] if three else [0, 1]
            rng.shuffle(eig)
            blocks = [ExactMatrix.identity(k).scale(e) + _random_nilpotent(rng, jt) for e in eig[:2]]
            if three:
                other = rng.randint(1, 3)
                blocks.append(ExactMatrix.identity(other).scale(eig[2]) + _random_nilpotent(
                    rng, JordanType((other,))))
            A = ExactMatrix.block_diag(*blocks)
            spectrum = eig
            pd = primary_decompose(A, spectrum)
            # locate the two similar components in decomposition order
            j, l = sorted(pd.eigenvalues.index(e) for e in eig[:2])
            T = build_swap_collineation(A, pd, j, l)
            v = col_check(A, T, spectrum=spectrum)
            perm = extract_permutation(A, T, spectrum)
            expected = list(range(pd.size))
            expected[j], expected[l] = l, j
            if not v.is_member or perm != tuple(expected) or v.permutation != tuple(expected):
                bad += 1
        return bad == 0, f"{count} swap collineations certified with the intended transposition; failures {bad}"

    return _timed(9, "permutation machinery", 5, body)


# --- 10 --------------------------------------------------------------------------

def criterion_10() -> CriterionResult:
    def body():
        sample = VectorSample()
        checked = bad = 0
        for n in range(1, 7):
            xs = sample.vectors(n)
            for m in range(1, n + 1):
                for T in jordan_refl_closed_form(m, n).basis:
                    for x in xs:
                        S = hankel_witness(m, n, T, x)
                        checked += 1
                        if not (is_jordan_intertwiner(S) and S @ x == T @ x):
                            bad += 1
        return bad == 0, f"{checked} (m, n, T, x) cases, failures {bad}"

    return _timed(10, "Hankel witness", 10, body)


# --- 11 --------------------------------------------------------------------------

CYCLE_SAMPLE = VectorSample(random_count=8, seed=11, grid=(0, 1, -1))


def criterion_11() -> CriterionResult:
    def body():
        rng = random.Random(11)
        runs = violations = tested = pairs = 0
        for jt in jordan_types(6):
            N = jt.matrix()
            d = jt.dim
            tops = [[0] * d for _ in jt.block_sizes]
            for b, off in enumerate(jt.offsets()):
                tops[b][off + jt.block_sizes[b] - 1] = 1
            xs = tops + [[sum(col) for col in zip(*tops)], [rng.randint(-3, 3) for _ in range(d)]]
            for x in xs:
                if not any(x):
                    continue
                rep = cycle_check(N, x, CYCLE_SAMPLE)
                runs += 1
                tested += rep.tested
                pairs += rep.pairs_tested
                violations += len(rep.violations) + len(rep.pair_violations)
        return violations == 0, (f"{runs} generators, {tested} cyclic subspaces and {pairs} join pairs; "
                                 f"violations {violations}")

    return _timed(11, "cycle property", 5, body)


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


def run_all(selected=None) -> list[CriterionResult]:
    keys = sorted(CRITERIA) if selected is None else list(selected)
    return [CRITERIA[k]() for k in keys]
