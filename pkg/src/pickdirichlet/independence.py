"""Multiplicative independence of integer generators.

``log n_1, ..., log n_d`` are linearly independent over Q exactly when the
prime-exponent vectors of the ``n_i`` are, by unique factorization. All
decisions below use exact integer arithmetic on those vectors; no floating
point logarithm enters the decision path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .embedding import Embedding
from .series import MultiIndex, factor


@dataclass(frozen=True)
class ExponentMatrix:
    """One row per generator: its prime exponents over ``primes`` (the column labels)."""

    rows: tuple
    primes: tuple

    def reconstruct(self, i: int) -> int:
        return math.prod(p**e for p, e in zip(self.primes, self.rows[i]))

    def to_json(self) -> dict:
        return {"primes": list(self.primes), "rows": [list(r) for r in self.rows]}


def _check_generators(n_list: Sequence[int]) -> tuple:
    out = tuple(int(n) for n in n_list)
    if not out:
        raise ValueError("need at least one generator")
    bad = [n for n in out if n < 2]
    if bad:
        raise ValueError(f"generators must be >= 2, got {bad[0]}")
    return out


def exponent_matrix(n_list: Sequence[int]) -> ExponentMatrix:
    gens = _check_generators(n_list)
    factored = [factor(n) for n in gens]
    primes = tuple(sorted({p for mi in factored for p in mi.generators}))
    rows = tuple(mi.over(primes) for mi in factored)
    return ExponentMatrix(rows, primes)


def bareiss_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(map(int, row)) for row in matrix]
    if not M or not M[0]:
        return 0
    rows, cols = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, rows):
            for c in range(col + 1, cols):
                M[r][c] = (p * M[r][c] - M[r][col] * M[rank][c]) // prev
            M[r][col] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def multiplicative_rank(n_list: Sequence[int]) -> tuple[int, ExponentMatrix]:
    """Number of multiplicatively independent generators and the exponent matrix."""
    mat = exponent_matrix(n_list)
    return bareiss_rank(mat.rows), mat


def independence_check(n_list: Sequence[int]) -> bool:
    rank, mat = multiplicative_rank(n_list)
    return rank == len(mat.rows)


def integer_relation(mat: ExponentMatrix) -> Optional[tuple]:
    """First integer vector ``k`` with ``sum_i k_i row_i = 0``, or None.

    Taken from the first free column of the reduced row echelon form of the
    transposed matrix, scaled to coprime integers with its first nonzero
    entry positive.
    """
    d = len(mat.rows)
    # columns are generators, rows are primes
    A = [[Fraction(mat.rows[i][j]) for i in range(d)] for j in range(len(mat.primes))]
    pivots = []
    r = 0
    for col in range(d):
        pivot = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        pv = A[r][col]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(d) if c not in pivots]
    if not free:
        return None
    f = free[0]
    vec = [Fraction(0)] * d
    vec[f] = Fraction(1)
    for row, pc in enumerate(pivots):
        vec[pc] = -A[row][f]
    lcm = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * lcm) for v in vec]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class Witness:
    """Relation ``sum_{i in I} k_i log n_i = sum_{j in J} k_j log n_j`` and its polynomial.

    Indices are 0-based positions in ``n_list``. ``kappa`` is dense over all
    generators (zero outside ``I`` and ``J``). The witness polynomial is
    ``q(z) = b_nu z^mu - b_mu z^nu``.
    """

    n_list: tuple
    b: tuple
    I: tuple
    J: tuple
    kappa: tuple

    @property
    def mu(self) -> tuple:
        return tuple(self.kappa[i] if i in self.I else 0 for i in range(len(self.n_list)))

    @property
    def nu(self) -> tuple:
        return tuple(self.kappa[j] if j in self.J else 0 for j in range(len(self.n_list)))

    @property
    def mu_index(self) -> MultiIndex:
        return MultiIndex(self.mu, self.n_list)

    @property
    def nu_index(self) -> MultiIndex:
        return MultiIndex(self.nu, self.n_list)

    @property
    def b_mu(self) -> float:
        return math.prod(b**e for b, e in zip(self.b, self.mu))

    @property
    def b_nu(self) -> float:
        return math.prod(b**e for b, e in zip(self.b, self.nu))

    @property
    def terms(self) -> tuple:
        """``((b_nu, mu), (-b_mu, nu))``: coefficient and exponent of each monomial."""
        return ((self.b_nu, self.mu), (-self.b_mu, self.nu))

    def products(self) -> tuple[int, int]:
        left = math.prod(self.n_list[i] ** self.kappa[i] for i in self.I)
        right = math.prod(self.n_list[j] ** self.kappa[j] for j in self.J)
        return left, right

    def holds(self) -> bool:
        """Exact big-integer check of the multiplicative relation."""
        left, right = self.products()
        return left == right and self.mu != self.nu

    def q(self, z: Sequence[complex]) -> complex:
        z = [complex(v) for v in z]
        zmu = math.prod(z[i] ** self.kappa[i] for i in self.I)
        znu = math.prod(z[j] ** self.kappa[j] for j in self.J)
        return self.b_nu * zmu - self.b_mu * znu

    def to_json(self) -> dict:
        return {
            "n": list(self.n_list),
            "I": list(self.I),
            "J": list(self.J),
            "kappa": list(self.kappa),
            "mu": list(self.mu),
            "nu": list(self.nu),
            "b_mu": self.b_mu,
            "b_nu": self.b_nu,
        }


def dependence_witness(n_list: Sequence[int], b: Optional[Sequence[float]] = None) -> Optional[Witness]:
    """Witness of multiplicative dependence, or None when the list is independent."""
    gens = _check_generators(n_list)
    if b is None:
        b = [1.0 / math.sqrt(len(gens))] * len(gens)
    b = tuple(float(x) for x in b)
    if len(b) != len(gens) or any(x <= 0 for x in b):
        raise ValueError("b must be positive and match n_list in length")
    rel = integer_relation(exponent_matrix(gens))
    if rel is None:
        return None
    I = tuple(i for i, k in enumerate(rel) if k > 0)
    J = tuple(j for j, k in enumerate(rel) if k < 0)
    w = Witness(gens, b, I, J, tuple(abs(k) for k in rel))
    if not w.holds():
        raise RuntimeError(f"relation {rel} does not hold for {gens}")
    return w


def verify_witness(w: Witness, E: Embedding, points: Sequence[complex]) -> float:
    """``max |q(f(s))|`` over ``points`` for the embedding ``E``.

    Raises:
        IndexError: if the witness refers to generators ``E`` does not carry.
    """
    if len(w.kappa) != len(w.n_list) or any(i >= len(w.n_list) for i in w.I + w.J):
        raise IndexError("witness indices out of range")
    pos = {g: k for k, g in enumerate(E.n)}
    missing = [g for g in w.n_list if g not in pos]
    if missing:
        raise IndexError(f"generator {missing[0]} not in the embedding")
    idx = np.array([pos[g] for g in w.n_list])
    worst = 0.0
    for s in points:
        z = (E.b * E.powers(s))[idx]
        worst = max(worst, abs(w.q(z)))
    return worst
