"""Prime zeta kernel: closed form against the ball embedding, and the
first-coordinate gap |r - b_1 2^{-s}| over a grid.

    python scripts/prime_zeta_kernel.py --tol 1e-7 --points 50
"""

import argparse
import math

import numpy as np

from pickdirichlet import kernel_eval, prime_kernel_eval, prime_zeta
from pickdirichlet.embedding import coordinate_gap
from pickdirichlet.families import prime_embedding


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=1e-7)
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for sigma in (2.0, 3.0, 4.0, 10.0):
        print(f"P({sigma:g}) = {prime_zeta(sigma, min(args.tol, 1e-6)):.12f}")

    E = prime_embedding(args.tol)
    print(f"embedding: {E.K} primes, sum b_k^2 = {float(E.weight_budget):.15f}")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.points):
        s, u = rng.uniform(0.1, 3, 2) + 1j * rng.uniform(-5, 5, 2)
        worst = max(worst, abs(prime_kernel_eval(s, u, args.tol) - kernel_eval(E, s, u).value))
    print(f"max |closed form - embedding| over {args.points} pairs: {worst:.2e}")

    re = np.linspace(0, 10, 102)[1:-1]
    im = np.linspace(0, 2 * math.pi / math.log(2), 100, endpoint=False)
    grid = (re[:, None] + 1j * im[None, :]).ravel()
    b1 = float(E.b[0])
    for r in (0.8, 0.9, 1.0):
        print(f"r={r}: min |r - b_1 2^-s| = {coordinate_gap(E, r, grid):.6f}   r - b_1 = {r - b1:.6f}")


if __name__ == "__main__":
    main()
