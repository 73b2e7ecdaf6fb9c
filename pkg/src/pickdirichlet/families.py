"""Concrete complete Pick kernels built from the zeta and prime zeta functions.

Each family is defined by the Dirichlet series of ``1/k``; the kernel
coefficients are obtained by running that series through :func:`invert`.
The closed forms of the coefficients (ordered factorizations, von Mangoldt,
squarefree indicator) are deliberately not used here; tests use them as
independent oracles.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .embedding import Embedding
from .errors import DepthError, DomainError, ModeError
from .pick import CoefficientEnvelope, KernelSpec
from .series import DirichletSeries, Mode, convolve, invert, iter_prime_blocks, primes_below

#: largest prime cutoff prime_zeta will stream through
MAX_STREAM_CUTOFF = 10**9
#: largest prime cutoff kept in memory for kernel evaluation and embeddings
MAX_CACHED_CUTOFF = 10**8
#: tolerance for P(2) inside the PRIME_ZETA kernel coefficients
FAMILY_PRIME_TOL = 1e-8


class FamilyId(str, Enum):
    ZETA_RECIPROCAL = "zeta1"  # 1/(2 - zeta(s))
    ZETA_LOGDERIV = "zeta2"  # zeta(s)/(zeta(s) + zeta'(s))
    ZETA_SQUAREFREE = "zeta3"  # zeta(2s)/(2 zeta(2s) - zeta(s))
    PRIME_ZETA = "prime"  # P(2)/(P(2) - P(2+s+conj(u)))

    @classmethod
    def parse(cls, value: "str | FamilyId") -> "FamilyId":
        if isinstance(value, FamilyId):
            return value
        for fam in cls:
            if value in (fam.value, fam.name, fam.name.lower()):
                return fam
        raise ValueError(f"unknown family {value!r}")


_ENVELOPES = {
    FamilyId.ZETA_RECIPROCAL: CoefficientEnvelope(1.0),
    FamilyId.ZETA_LOGDERIV: CoefficientEnvelope(1.0, log_power=1),
    FamilyId.ZETA_SQUAREFREE: CoefficientEnvelope(1.0),
}


def _square_indicator(N: int, mode: Mode) -> DirichletSeries:
    """Coefficients of zeta(2s): 1 at perfect squares."""
    vals = [0] * N
    for m in range(1, math.isqrt(N) + 1):
        vals[m * m - 1] = 1
    return DirichletSeries(tuple(vals), mode)


def inverse_kernel_series(family: "FamilyId | str", N: int, mode: "Mode | str" = Mode.REAL64) -> DirichletSeries:
    """Dirichlet coefficients of ``1/k`` for the family, to depth ``N``."""
    family, mode = FamilyId.parse(family), Mode.parse(mode)
    if N < 1:
        raise ValueError("N must be >= 1")
    if family in (FamilyId.ZETA_LOGDERIV, FamilyId.PRIME_ZETA) and mode is Mode.EXACT_RATIONAL:
        raise ModeError(f"family {family.value} has transcendental coefficients; use real64")

    if family is FamilyId.ZETA_RECIPROCAL:
        return DirichletSeries((1,) + (-1,) * (N - 1), mode)
    if family is FamilyId.ZETA_LOGDERIV:
        zeta = DirichletSeries.ones(N, mode)
        zeta_plus_deriv = DirichletSeries(tuple(1.0 - math.log(n) for n in range(1, N + 1)), mode)
        return convolve(zeta_plus_deriv, invert(zeta))
    if family is FamilyId.ZETA_SQUAREFREE:
        zeta2 = _square_indicator(N, mode)
        numer = zeta2.scale(2) - DirichletSeries.ones(N, mode)
        return convolve(numer, invert(zeta2))

    p2 = prime_zeta(2.0, FAMILY_PRIME_TOL)
    g = np.zeros(N)
    primes = primes_below(N)
    g[primes - 1] = 1.0 / (p2 * primes.astype(float) ** 2)
    g[0] = -1.0
    return DirichletSeries(tuple((0.0 - g).tolist()), Mode.REAL64)


def family_coefficients(family: "FamilyId | str", N: int, mode: "Mode | str" = Mode.REAL64) -> KernelSpec:
    """KernelSpec for a named family, with ``a = invert(1/k series)``."""
    family = FamilyId.parse(family)
    inv = inverse_kernel_series(family, N, mode)
    a = invert(inv)
    if family is FamilyId.PRIME_ZETA:
        p2 = prime_zeta(2.0, FAMILY_PRIME_TOL)
        env = CoefficientEnvelope(1.0 / p2, decay=2.0)
        return KernelSpec(a, abscissa_hint=0.0, envelope=env, label=family.value)
    return KernelSpec(a, envelope=_ENVELOPES[family], label=family.value)


# --------------------------------------------------------------------------
# prime zeta


def prime_zeta_cutoff(sigma: float, tol: float) -> int:
    """Smallest ``M`` with ``M^{1-sigma}/(sigma-1) < tol``."""
    if sigma <= 1:
        raise DomainError(f"prime zeta diverges at sigma={sigma}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = max(2, math.floor(((sigma - 1) * tol) ** (-1 / (sigma - 1))))
    while M ** (1 - sigma) / (sigma - 1) >= tol:
        # relative step so the loop advances even where M + 1 rounds to M
        M += max(1, M >> 40)
    return M


@lru_cache(maxsize=64)
def prime_zeta(sigma: float, tol: float = 1e-8) -> float:
    """``P(sigma) = sum_p p^{-sigma}`` summed over ``p <= M`` with integral tail bound.

    ``M`` is chosen so that ``int_M^inf x^{-sigma} dx < tol``, which bounds the
    omitted tail; the absolute error is therefore below ``tol``.
    """
    sigma = float(sigma)
    M = prime_zeta_cutoff(sigma, tol)
    if M > MAX_STREAM_CUTOFF:
        raise DepthError(f"tol={tol} at sigma={sigma} needs primes up to {M}")
    total = 0.0
    for block in iter_prime_blocks(M):
        total += float(np.sum(block.astype(float) ** (-sigma)))
    return total


@lru_cache(maxsize=8)
def _cached_primes_for(tol: float) -> tuple:
    M = prime_zeta_cutoff(2.0, tol)
    if M > MAX_CACHED_CUTOFF:
        raise DepthError(f"tol={tol} needs {M} primes in memory; use tol >= {1 / MAX_CACHED_CUTOFF:g}")
    primes = primes_below(M)
    logs = np.log(primes.astype(float))
    return primes, logs, float(np.sum(primes.astype(float) ** -2.0))


def prime_kernel_eval(s: complex, u: complex, tol: float = 1e-7) -> complex:
    """Closed form ``P(2) / (P(2) - P(2 + s + conj(u)))``.

    Both prime zeta values are summed over the primes ``p <= M`` where ``M`` is
    the cutoff that makes ``P(2)`` accurate to ``tol``; the shifted value then
    has an even smaller tail. The result is exactly the kernel of
    :func:`prime_embedding` at the same ``tol``.
    """
    s, u = complex(s), complex(u)
    if s.real <= 0 or u.real <= 0:
        raise DomainError("prime kernel is defined for Re(s), Re(u) > 0")
    _, logs, p2 = _cached_primes_for(tol)
    w = 2.0 + s + u.conjugate()
    pw = complex(np.sum(np.exp(-w * logs)))
    return p2 / (p2 - pw)


def prime_embedding(tol: float = 1e-7, truncated_infinite: bool = True) -> Embedding:
    """Weights ``b_k = 1/(sqrt(P(2)) p_k)`` on the primes below the P(2) cutoff.

    With ``truncated_infinite`` the omitted primes are accounted for by
    declaring a total weight of ``1 + tol/P(2)``; with it off, the object is a
    genuine finite embedding whose kernel is :func:`prime_kernel_eval`.
    """
    primes, _, p2 = _cached_primes_for(tol)
    b2 = 1.0 / (p2 * primes.astype(float) ** 2)
    declared = 1.0 + tol / p2 if truncated_infinite else None
    return Embedding(
        tuple(primes.tolist()),
        tuple(b2.tolist()),
        truncated_infinite=truncated_infinite,
        declared_total=declared,
    )


def rational_prime_embedding(K: int) -> Embedding:
    """Embedding in the standard normalization, on the first ``K`` primes with dyadic ``b_k^2``.

    ``b_k^2 = 2^{-k}`` for ``k < K`` and ``b_K^2 = 2^{-(K-1)}`` so the weights
    sum to exactly 1.
    """
    from .series import primes_up_to

    if K < 1:
        raise ValueError("K must be >= 1")
    b2 = [Fraction(1, 2**k) for k in range(1, K)] + [Fraction(1, 2 ** (K - 1))]
    return Embedding(tuple(primes_up_to(K)), tuple(b2))
