"""The brute-force references are themselves checked against known values."""

import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from pickdirichlet import oracles

# ordered factorization counts, n = 1..24
ORDERED = [1, 1, 1, 2, 1, 3, 1, 4, 2, 3, 1, 8, 1, 3, 3, 8, 1, 8, 1, 8, 3, 3, 1, 20]


def test_ordered_factorization_counts():
    assert [oracles.ordered_factorization_count(n) for n in range(1, 25)] == ORDERED


def test_ordered_factorizations_enumerated():
    assert sorted(oracles.ordered_factorizations(12)) == sorted(
        [(12,), (2, 6), (6, 2), (3, 4), (4, 3), (2, 2, 3), (2, 3, 2), (3, 2, 2)]
    )
    assert list(oracles.ordered_factorizations(1)) == [()]


@given(st.integers(2, 3000))
def test_von_mangoldt_exponentiates_to_n(n):
    # sum over d | n of Lambda(d) equals log n
    total = sum(oracles.von_mangoldt(d) for d in range(1, n + 1) if n % d == 0)
    assert total == pytest.approx(math.log(n), abs=1e-9)


@given(st.integers(1, 3000))
def test_mobius_sums_to_delta(n):
    assert sum(oracles.mobius(d) for d in range(1, n + 1) if n % d == 0) == (1 if n == 1 else 0)


def test_squarefree_density():
    count = sum(oracles.is_squarefree(n) for n in range(1, 20001))
    assert count / 20000 == pytest.approx(6 / math.pi**2, abs=2e-3)


@pytest.mark.parametrize("n", [1, 12, 36, 97, 360])
def test_divisor_count(n):
    assert oracles.divisor_count(n) == int(mpmath.fsum(1 for d in range(1, n + 1) if n % d == 0))


def test_trial_division_primes():
    primes = oracles.trial_division_primes(168)
    assert primes[-1] == 997
    assert sum(p ** -2.0 for p in oracles.trial_division_primes(2000)) == pytest.approx(
        float(mpmath.primezeta(2)), abs=1e-5
    )
