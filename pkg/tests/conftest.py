import random

from hypothesis import HealthCheck, settings, strategies as st

from collat.core import ExactMatrix, gq

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-3, max_value=3)
rationals = st.builds(lambda p, q: gq(p) / q, st.integers(-6, 6), st.integers(1, 4))
gaussians = st.builds(gq, rationals, rationals)
scalars = st.one_of(rationals, gaussians)


@st.composite
def matrices(draw, rows=st.integers(1, 4), cols=st.integers(1, 4), entries=small_ints):
    m, n = draw(rows), draw(cols)
    return ExactMatrix([[draw(entries) for _ in range(n)] for _ in range(m)], (m, n))


@st.composite
def vectors(draw, n, entries=small_ints):
    return tuple(draw(entries) for _ in range(n))


def random_invertible(n, rng: random.Random, lo=-3, hi=3):
    while True:
        P = ExactMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if P.is_invertible():
            return P


def e(n, *idx):
    """Sum of standard basis vectors ``e_i`` (1-based) in dimension ``n``."""
    v = [0] * n
    for i in idx:
        v[i - 1] += 1
    return tuple(v)
