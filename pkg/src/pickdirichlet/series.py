"""Truncated Dirichlet series and the number theory underneath them.

A series ``sum a_n n^{-s}`` is stored as its coefficient prefix ``(a_1, ..., a_N)``.
Dirichlet convolution at index ``n`` only reads indices dividing ``n``, so every
operation here is exact on the retained prefix; no analytic error tracking is
needed at the coefficient level.

Two scalar modes are supported: exact rationals (:class:`fractions.Fraction`)
and IEEE doubles. Mixing them promotes to doubles.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import NonUnitError

#: default magnitude below which a REAL64 leading coefficient counts as zero
ZERO_TOL = 1e-12


class Mode(str, Enum):
    EXACT_RATIONAL = "rational"
    REAL64 = "real64"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        key = str(value).lower()
        for mode in cls:
            if key in (mode.value, mode.name.lower()):
                return mode
        raise ValueError(f"unknown scalar mode {value!r}")


def to_fraction(value) -> Fraction:
    """Coerce ``value`` to a Fraction; strings may be ``"p/q"`` or decimal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in rational mode")
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as a rational scalar")


def to_real(value) -> float:
    if isinstance(value, str):
        return float(Fraction(value)) if "/" in value else float(value)
    return float(value)


def format_scalar(value) -> "str | float":
    """Rationals as ``"p/q"`` strings (``"p"`` when integral), reals as floats."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return float(value)


@dataclass(frozen=True)
class DirichletSeries:
    """Coefficient prefix ``(a_1, ..., a_N)`` of a Dirichlet series.

    ``coeffs[0]`` is the coefficient of ``1^{-s}``. All entries share ``mode``;
    rational entries are Fractions (always in lowest terms), real ones floats.
    """

    coeffs: tuple
    mode: Mode = Mode.EXACT_RATIONAL

    def __post_init__(self):
        mode = Mode.parse(self.mode)
        if len(self.coeffs) < 1:
            raise ValueError("a Dirichlet series needs at least one coefficient")
        conv = to_fraction if mode is Mode.EXACT_RATIONAL else to_real
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "coeffs", tuple(conv(v) for v in self.coeffs))

    @classmethod
    def from_values(cls, values: Iterable, mode: "Mode | str | None" = None) -> "DirichletSeries":
        """Build a series, inferring the mode when not given (any float -> REAL64)."""
        values = list(values)
        if mode is None:
            mode = Mode.REAL64 if any(isinstance(v, float) for v in values) else Mode.EXACT_RATIONAL
        return cls(tuple(values), Mode.parse(mode))

    @classmethod
    def delta(cls, N: int, mode: "Mode | str" = Mode.EXACT_RATIONAL) -> "DirichletSeries":
        """The convolution identity ``(1, 0, 0, ...)``."""
        return cls((1,) + (0,) * (N - 1), mode)

    @classmethod
    def ones(cls, N: int, mode: "Mode | str" = Mode.EXACT_RATIONAL) -> "DirichletSeries":
        """Coefficients of zeta(s)."""
        return cls((1,) * N, mode)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def coeff(self, n: int):
        """1-based coefficient access: ``coeff(n) == a_n``."""
        if not 1 <= n <= self.N:
            raise IndexError(f"index {n} outside 1..{self.N}")
        return self.coeffs[n - 1]

    def truncate(self, N: int) -> "DirichletSeries":
        if N < 1 or N > self.N:
            raise ValueError(f"cannot truncate depth {self.N} series to {N}")
        return DirichletSeries(self.coeffs[:N], self.mode)

    def as_mode(self, mode: "Mode | str") -> "DirichletSeries":
        mode = Mode.parse(mode)
        if mode is self.mode:
            return self
        return DirichletSeries(self.coeffs, mode)

    def to_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.coeffs], dtype=float)

    def __neg__(self) -> "DirichletSeries":
        return DirichletSeries(tuple(-v for v in self.coeffs), self.mode)

    def __add__(self, other: "DirichletSeries") -> "DirichletSeries":
        a, b, N = _align(self, other)
        return DirichletSeries(tuple(x + y for x, y in zip(a.coeffs[:N], b.coeffs[:N])), a.mode)

    def __sub__(self, other: "DirichletSeries") -> "DirichletSeries":
        return self + (-other)

    def scale(self, factor) -> "DirichletSeries":
        if self.mode is Mode.EXACT_RATIONAL and not isinstance(factor, float):
            f = to_fraction(factor)
            return DirichletSeries(tuple(v * f for v in self.coeffs), self.mode)
        return DirichletSeries(tuple(float(v) * float(factor) for v in self.coeffs), Mode.REAL64)

    def evaluate(self, s: complex) -> complex:
        """Partial sum ``sum_{n<=N} a_n n^{-s}`` in double precision."""
        n = np.arange(1, self.N + 1, dtype=float)
        return complex(np.sum(self.to_array() * np.exp(-complex(s) * np.log(n))))

    def to_json(self) -> dict:
        return {"N": self.N, "mode": self.mode.value, "coeffs": [format_scalar(v) for v in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "DirichletSeries":
        coeffs = list(data["coeffs"])
        if "N" in data and int(data["N"]) != len(coeffs):
            raise ValueError(f"N={data['N']} but {len(coeffs)} coefficients given")
        return cls(tuple(coeffs), Mode.parse(data.get("mode", "rational")))


def _align(a: DirichletSeries, b: DirichletSeries):
    if a.mode is not b.mode:
        a, b = a.as_mode(Mode.REAL64), b.as_mode(Mode.REAL64)
    return a, b, min(a.N, b.N)


def _is_integral(values: Sequence[Fraction]) -> bool:
    return all(v.denominator == 1 for v in values)


def convolve(a: DirichletSeries, b: DirichletSeries) -> DirichletSeries:
    """Dirichlet convolution ``(a*b)_n = sum_{d|n} a_d b_{n/d}``, truncated to min depth."""
    a, b, N = _align(a, b)
    if a.mode is Mode.REAL64:
        x, y = a.to_array()[:N], b.to_array()[:N]
        out = np.zeros(N)
        for d in range(1, N + 1):
            ad = x[d - 1]
            if ad != 0.0:
                out[d - 1 :: d] += ad * y[: N // d]
        return DirichletSeries(tuple(out.tolist()), Mode.REAL64)

    x, y = a.coeffs[:N], b.coeffs[:N]
    if _is_integral(x) and _is_integral(y):
        x, y = [int(v) for v in x], [int(v) for v in y]
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        ad = x[d - 1]
        if not ad:
            continue
        for m in range(1, N // d + 1):
            bm = y[m - 1]
            if bm:
                out[d * m] += ad * bm
    return DirichletSeries(tuple(out[1:]), Mode.EXACT_RATIONAL)


def invert(a: DirichletSeries, zero_tol: float = ZERO_TOL) -> DirichletSeries:
    """Dirichlet inverse: ``c_1 = 1/a_1``, ``c_n = -(1/a_1) sum_{d<n, d|n} a_{n/d} c_d``.

    Raises:
        NonUnitError: if ``a_1 == 0`` (or ``|a_1| <= zero_tol`` in REAL64 mode).
    """
    N = a.N
    if a.mode is Mode.REAL64:
        x = a.to_array()
        a1 = x[0]
        if abs(a1) <= zero_tol:
            raise NonUnitError(f"a_1 = {a1!r} is zero within {zero_tol}")
        c = np.zeros(N)
        acc = np.zeros(N)
        c[0] = 1.0 / a1
        for d in range(1, N + 1):
            if d > 1:
                c[d - 1] = -acc[d - 1] / a1
            cd = c[d - 1]
            if cd != 0.0 and 2 * d <= N:
                acc[2 * d - 1 :: d] += cd * x[1 : N // d]
        return DirichletSeries(tuple(c.tolist()), Mode.REAL64)

    vals = a.coeffs
    a1 = vals[0]
    if a1 == 0:
        raise NonUnitError("a_1 = 0: series is not a unit")
    # integer coefficients with a_1 = +-1 invert over the integers
    if _is_integral(vals) and a1 in (1, -1):
        work, inv1 = [int(v) for v in vals], int(a1)
    else:
        work, inv1 = list(vals), 1 / a1
    c = [0] * (N + 1)
    acc = [0] * (N + 1)
    c[1] = inv1
    for d in range(1, N + 1):
        if d > 1:
            c[d] = -inv1 * acc[d]
        cd = c[d]
        if not cd:
            continue
        for m in range(2, N // d + 1):
            am = work[m - 1]
            if am:
                acc[d * m] += am * cd
    return DirichletSeries(tuple(c[1:]), Mode.EXACT_RATIONAL)


# --------------------------------------------------------------------------
# primes


def prime_sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` (sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_prime_blocks(limit: int, block: int = 1 << 22) -> Iterator[np.ndarray]:
    """Yield the primes ``<= limit`` in increasing blocks (segmented sieve).

    Memory stays O(block + sqrt(limit)) however large ``limit`` is.
    """
    root = math.isqrt(limit)
    base = prime_sieve(root)
    if limit <= block:
        yield prime_sieve(limit)
        return
    yield base
    lo = root + 1
    while lo <= limit:
        hi = min(lo + block - 1, limit)
        flags = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            flags[start - lo :: p] = False
        yield np.flatnonzero(flags).astype(np.int64) + lo
        lo = hi + 1


class _PrimeCache:
    """Monotonically growing table of small primes.

    A single writer extends the table under a lock; readers that only need an
    already-covered prefix slice the current array without locking.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._limit = 1
        self._primes = np.zeros(0, dtype=np.int64)

    def below(self, limit: int) -> np.ndarray:
        primes, covered = self._primes, self._limit
        if limit <= covered:
            return primes[: np.searchsorted(primes, limit, side="right")]
        with self._lock:
            if limit > self._limit:
                new_limit = max(limit, 2 * self._limit)
                self._primes = prime_sieve(new_limit)
                self._limit = new_limit
            primes = self._primes
        return primes[: np.searchsorted(primes, limit, side="right")]


_PRIMES = _PrimeCache()


def primes_below(limit: int) -> np.ndarray:
    """Cached primes ``<= limit`` (do not mutate the returned array)."""
    return _PRIMES.below(limit)


def _nth_prime_upper(K: int) -> int:
    if K < 6:
        return 13
    return int(K * (math.log(K) + math.log(math.log(K)))) + 1


def primes_up_to(K: int) -> list[int]:
    """The first ``K`` primes, in increasing order."""
    if K < 1:
        raise ValueError("K must be >= 1")
    primes = primes_below(_nth_prime_upper(K))
    return [int(p) for p in primes[:K]]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


# --------------------------------------------------------------------------
# multi-indices


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector ``mu`` over a generator list, standing for ``n(mu) = prod g_k^{mu_k}``.

    Trailing zero exponents are trimmed, so ``MultiIndex(())`` is ``n = 1``.
    With no generators given, the first ``len(exponents)`` primes are used.
    """

    exponents: tuple = ()
    generators: tuple = ()

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        gens = tuple(int(g) for g in self.generators)
        if not gens and exps:
            gens = tuple(primes_up_to(len(exps)))
        if len(gens) != len(exps):
            raise ValueError("exponents and generators differ in length")
        if any(g < 2 for g in gens):
            raise ValueError("generators must be >= 2")
        k = len(exps)
        while k and exps[k - 1] == 0:
            k -= 1
        object.__setattr__(self, "exponents", exps[:k])
        object.__setattr__(self, "generators", gens[:k])

    @property
    def value(self) -> int:
        out = 1
        for g, e in zip(self.generators, self.exponents):
            out *= g**e
        return out

    @property
    def degree(self) -> int:
        """``|mu| = sum mu_k``."""
        return sum(self.exponents)

    @property
    def factorial(self) -> int:
        """``mu! = prod mu_k!``."""
        return math.prod(math.factorial(e) for e in self.exponents)

    @property
    def multinomial(self) -> int:
        """``|mu|! / mu!``, the number of orderings of the factors."""
        return math.factorial(self.degree) // self.factorial

    def over(self, generators: Sequence[int]) -> tuple:
        """Dense exponent vector over ``generators`` (which must cover ours)."""
        pos = {int(g): i for i, g in enumerate(generators)}
        out = [0] * len(pos)
        for g, e in zip(self.generators, self.exponents):
            if e and g not in pos:
                raise KeyError(f"generator {g} not in target list")
            if e:
                out[pos[g]] += e
        return tuple(out)


def factor(n: int) -> MultiIndex:
    """Prime factorization of ``n`` by trial division.

    The result lists only the primes dividing ``n`` (increasing); use
    :meth:`MultiIndex.over` with :func:`primes_up_to` for the dense vector over
    the global prime enumeration.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gens, exps = [], []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            gens.append(d)
            exps.append(e)
        d += 1 if d == 2 else 2
    if m > 1:
        gens.append(m)
        exps.append(1)
    return MultiIndex(tuple(exps), tuple(gens))


def divisors(n: int) -> list[int]:
    """Divisors of ``n`` in increasing order, by trial division up to sqrt(n)."""
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]
