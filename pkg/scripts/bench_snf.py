"""Time Smith normal form and the per-depth homology on the dihedral tower."""

import argparse
import random
import time

from selfsim.abelian import check_snf, int_matrix, snf
from selfsim.group import dihedral
from selfsim.homology import depth_module, group_homology


def bench_random(n: int, trials: int, seed: int) -> None:
    rng = random.Random(seed)
    t0 = time.perf_counter()
    for _ in range(trials):
        a = int_matrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)], shape=(n, n))
        assert check_snf(a, snf(a))
    dt = time.perf_counter() - t0
    print(f"random {n}x{n}: {trials} matrices in {dt:.2f}s")


def bench_tower(k_max: int, degree: int) -> None:
    G = dihedral()
    for k in range(k_max + 1):
        m = depth_module(G, k)
        t0 = time.perf_counter()
        labels = [str(group_homology(m, p).group) for p in range(degree + 1)]
        print(f"depth {k} (rank {m.rank}): {time.perf_counter() - t0:.2f}s  {labels}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=16)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--depth", type=int, default=7)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bench_random(args.size, args.trials, args.seed)
    bench_tower(args.depth, args.degree)


if __name__ == "__main__":
    main()
