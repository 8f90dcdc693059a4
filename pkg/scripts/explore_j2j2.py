"""Explore Col(J2 + J2): sample Alg Lat(N)' and compare the closed form with the sampler.

Draws seeded invertible matrices, half from the closed-form family and half
from the reflexive cover of the commutant, decides each one with the closed-form test and with the sampled lattice test,
and tabulates agreement.  Refuted elements report their witness subspace.
"""

import argparse
import collections
import random

from collat import ColParamJ2J2, ExactMatrix, VectorSample, alg_lat_commutant, col_check_sampled, col_j2j2_decide
from collat.formats import inline_matrix, inline_subspace

N = ExactMatrix.block_diag(ExactMatrix.jordan_block(2), ExactMatrix.jordan_block(2))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-vectors", type=int, default=64)
    p.add_argument("--show", type=int, default=3, help="refuted examples to print")
    args = p.parse_args()

    rng = random.Random(args.seed)
    space = alg_lat_commutant(N)
    sample = VectorSample(random_count=args.random_vectors, seed=args.seed)
    table = collections.Counter()
    shown = 0
    drawn = 0
    while drawn < args.count:
        if rng.random() < 0.5:
            T = ColParamJ2J2(rng.randint(-3, 3), [rng.randint(-3, 3) for _ in range(8)]).matrix()
        else:
            T = space.random_element(rng)
        if not T.is_invertible():
            continue
        drawn += 1
        closed = col_j2j2_decide(T) is not None
        res = col_check_sampled(N, T, sample)
        table[closed, res.passed] += 1
        if not res.passed and shown < args.show:
            shown += 1
            print(f"T = {inline_matrix(T)}")
            print(f"  M = {inline_subspace(res.witness.subspace)} ({res.witness.direction}, {res.witness.source})")
            print(f"  image = {inline_subspace(res.witness.image)}")
    print(f"{'closed form':>12} {'sampler':>8} {'count':>6}")
    for (closed, passed), c in sorted(table.items()):
        print(f"{str(closed):>12} {str(passed):>8} {c:>6}")
    disagree = table[True, False] + table[False, True]
    print(f"disagreements: {disagree}")


if __name__ == "__main__":
    main()
