"""Brute-force reference values, independent of the series pipeline.

Nothing here calls ``invert`` or ``convolve``; these are the closed forms and
enumerations the pipeline is checked against.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator


def ordered_factorizations(n: int) -> Iterator[tuple]:
    """Every tuple ``(d_1, ..., d_r)`` of integers >= 2 with product ``n`` (``()`` for 1)."""
    if n == 1:
        yield ()
        return
    for d in range(2, n + 1):
        if n % d == 0:
            for rest in ordered_factorizations(n // d):
                yield (d,) + rest


@lru_cache(maxsize=None)
def ordered_factorization_count(n: int) -> int:
    return sum(1 for _ in ordered_factorizations(n))


def _smallest_prime_factor(n: int) -> int:
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return d
    return n


def von_mangoldt(n: int) -> float:
    """``log p`` if ``n = p^k`` for a prime ``p``, else 0."""
    if n < 2:
        return 0.0
    p = _smallest_prime_factor(n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def is_squarefree(n: int) -> bool:
    return all(n % (d * d) for d in range(2, math.isqrt(n) + 1))


def mobius(n: int) -> int:
    if not is_squarefree(n):
        return 0
    count, m, d = 0, n, 2
    while d * d <= m:
        if m % d == 0:
            count += 1
            m //= d
        d += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def divisor_count(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def trial_division_primes(K: int) -> list[int]:
    """First ``K`` primes by trial division against earlier primes."""
    out: list[int] = []
    n = 2
    while len(out) < K:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out
