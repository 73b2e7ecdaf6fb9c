"""Ball embeddings ``f(s) = (b_k n_k^{-s})`` and the kernels they induce.

An embedding sends the half plane ``Re(s) > 0`` into the unit ball as long as
``sum b_k^2 <= 1``; pulling back the Drury-Arveson kernel gives

    k(s, u) = 1 / (1 - <f(s), f(u)>) = sum_n a_n n^{-s-conj(u)},

whose inverse series is ``delta_1 - g`` with ``g`` carrying ``b_k^2`` at ``n_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainError, NotPickError, SupportError
from .pick import CoefficientEnvelope, KernelSpec, alpha_coefficients, check_complete_pick, positivity_tolerance
from .series import DirichletSeries, Mode, factor, format_scalar, invert, is_prime, primes_up_to, to_fraction

NORMALIZED_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Embedding:
    """Generators ``n`` (strictly increasing, >= 2) with squared weights ``b2``.

    Squared weights are the primary data so rational embeddings stay exact.
    Duplicate generators are merged by summing their squared weights.

    Attributes:
        truncated_infinite: the generators are a finite section of an infinite
            family whose total squared weight is ``declared_total`` (default 1).
        allow_unnormalized: accept ``sum b2 > 1``; such embeddings only map
            into the ball for ``Re(s)`` large enough.
    """

    n: tuple
    b2: tuple
    truncated_infinite: bool = False
    declared_total: Optional[object] = None
    allow_unnormalized: bool = False
    _arrays: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if len(self.n) != len(self.b2):
            raise ValueError("n and b2 differ in length")
        exact = all(isinstance(w, (Fraction, int)) and not isinstance(w, bool) for w in self.b2)
        conv = to_fraction if exact else float
        merged: dict = {}
        for g, w in zip(self.n, self.b2):
            g = int(g)
            if g < 2:
                raise ValueError(f"generator {g} must be >= 2")
            w = conv(w)
            if not w > 0:
                raise ValueError(f"weight at generator {g} must be positive")
            merged[g] = merged.get(g, 0) + w
        gens = tuple(sorted(merged))
        object.__setattr__(self, "n", gens)
        object.__setattr__(self, "b2", tuple(merged[g] for g in gens))
        if self.truncated_infinite and self.declared_total is None:
            object.__setattr__(self, "declared_total", Fraction(1) if exact else 1.0)
        budget = self.weight_budget
        if budget > 1 + (0 if exact else NORMALIZED_TOL) and not self.allow_unnormalized:
            raise ValueError(f"sum of b_k^2 is {float(budget)} > 1; pass allow_unnormalized=True")

    @classmethod
    def from_weights(cls, b: Sequence[float], n: Sequence[int], **kwargs) -> "Embedding":
        """Build from weights ``b_k`` rather than their squares."""
        return cls(tuple(n), tuple(float(x) ** 2 for x in b), **kwargs)

    @property
    def mode(self) -> Mode:
        return Mode.EXACT_RATIONAL if self.b2 and isinstance(self.b2[0], Fraction) else Mode.REAL64

    @property
    def K(self) -> int:
        return len(self.n)

    @property
    def d(self) -> float:
        return math.inf if self.truncated_infinite else self.K

    @property
    def weight_budget(self):
        return sum(self.b2, Fraction(0) if self.mode is Mode.EXACT_RATIONAL else 0.0)

    @property
    def normalized(self) -> bool:
        budget = self.weight_budget
        if self.mode is Mode.EXACT_RATIONAL:
            return budget == 1
        return abs(budget - 1.0) < NORMALIZED_TOL

    @property
    def remaining_weight(self) -> float:
        """Squared weight carried by omitted generators (0 for finite embeddings)."""
        if not self.truncated_infinite:
            return 0.0
        return max(0.0, float(self.declared_total) - float(self.weight_budget))

    @property
    def prime_generators(self) -> bool:
        return all(is_prime(g) for g in self.n)

    @property
    def b(self) -> np.ndarray:
        return np.sqrt(self._array("b2"))

    def _array(self, key: str) -> np.ndarray:
        arr = self._arrays.get(key)
        if arr is None:
            if key == "b2":
                arr = np.array([float(w) for w in self.b2])
            elif key == "logn":
                arr = np.log(np.array(self.n, dtype=float))
            self._arrays[key] = arr
        return arr

    def powers(self, s: complex) -> np.ndarray:
        """``n_k^{-s}`` for every generator."""
        return np.exp(-complex(s) * self._array("logn"))

    def tail_factor(self, sigma: float) -> float:
        """Bound on ``sum_{omitted} b_k^2 n_k^{-sigma}``."""
        rem = self.remaining_weight
        if rem == 0.0:
            return 0.0
        return float(self.n[-1]) ** (-sigma) * rem if self.n else rem

    def to_json(self) -> dict:
        out = {
            "b": self.b.tolist(),
            "n": list(self.n),
            "normalized": self.normalized,
            "truncated_infinite": self.truncated_infinite,
        }
        if self.mode is Mode.EXACT_RATIONAL:
            out["b2"] = [format_scalar(w) for w in self.b2]
        if self.truncated_infinite:
            out["declared_total"] = format_scalar(self.declared_total)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Embedding":
        if "b2" in data:
            b2 = tuple(to_fraction(w) for w in data["b2"])
        else:
            b2 = tuple(float(x) ** 2 for x in data["b"])
        declared = data.get("declared_total")
        if declared is not None:
            declared = to_fraction(declared) if isinstance(declared, str) else float(declared)
        return cls(
            tuple(int(g) for g in data["n"]),
            b2,
            truncated_infinite=bool(data.get("truncated_infinite", False)),
            declared_total=declared,
            allow_unnormalized=not data.get("normalized", True),
        )


@dataclass(frozen=True)
class PointEvaluation:
    s: complex
    vector: np.ndarray
    tail_norm_bound: float

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.vector) ** 2))


class KernelValue(NamedTuple):
    value: complex
    error: float


def _check_half_plane(*points: complex) -> None:
    for s in points:
        if complex(s).real <= 0:
            raise DomainError(f"point {s} is not in the right half plane")


def embed_point(E: Embedding, s: complex) -> PointEvaluation:
    """``f(s) = (b_k n_k^{-s})`` with a bound on the squared norm of the omitted part."""
    s = complex(s)
    _check_half_plane(s)
    vec = E.b * E.powers(s)
    return PointEvaluation(s, vec, E.tail_factor(2 * s.real))


def _reciprocal_error(one_minus_x: complex, err: float) -> float:
    """Bound on ``|1/(z - e) - 1/z|`` for ``|e| <= err``."""
    m = abs(one_minus_x)
    if err == 0.0:
        return 0.0
    if err >= m:
        return math.inf
    return err / (m * (m - err))


def kernel_eval(E: Embedding, s: complex, u: complex) -> KernelValue:
    """``1 / (1 - <f(s), f(u)>)`` with the error bound from omitted generators."""
    s, u = complex(s), complex(u)
    _check_half_plane(s, u)
    for p in (s, u):
        ev = embed_point(E, p)
        if ev.norm_sq + ev.tail_norm_bound >= 1:
            raise DomainError(f"f({p}) is not inside the unit ball")
    inner = complex(np.sum(E._array("b2") * E.powers(s + u.conjugate())))
    err = E.tail_factor(s.real + u.real)
    return KernelValue(1.0 / (1.0 - inner), _reciprocal_error(1.0 - inner, err))


def gram(E: Embedding, points: Sequence[complex]) -> tuple[np.ndarray, float]:
    """Matrix ``[<f(s_i), f(s_j)>]`` and an entrywise bound from omitted generators."""
    pts = [complex(p) for p in points]
    _check_half_plane(*pts)
    V = np.array([E.powers(p) for p in pts]).reshape(len(pts), E.K)
    G = (V * E._array("b2")) @ V.conj().T
    sigma_min = 2 * min(p.real for p in pts)
    return G, E.tail_factor(sigma_min)


def kernel_coefficients(E: Embedding, N: int) -> KernelSpec:
    """Coefficients of the pulled-back kernel: ``a = invert(delta_1 - g)``.

    ``g_m`` is ``b_k^2`` at ``m = n_k`` and zero elsewhere; the returned spec
    carries ``delta_1 - g`` as its inverse series.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    mode = E.mode
    zero, one = (Fraction(0), Fraction(1)) if mode is Mode.EXACT_RATIONAL else (0.0, 1.0)
    c = [zero] * N
    c[0] = one
    for g, w in zip(E.n, E.b2):
        if g <= N:
            c[g - 1] = -w
    c_series = DirichletSeries(tuple(c), mode)
    a = invert(c_series)
    envelope = None
    if not E.truncated_infinite and (not E.n or E.n[-1] <= N):
        envelope = CoefficientEnvelope(0.0)
    return KernelSpec(a, c=c_series, abscissa_hint=0.0, envelope=envelope, label="embedding")


def norm_of(E: Embedding, gamma: DirichletSeries):
    """Norm squared of ``h(s) = sum gamma_n n^{-s}`` in the space of a prime embedding.

    ``||h||^2 = sum |gamma_n|^2 / b^{2 mu(n)} * mu(n)! / |mu(n)|!``. Exact when both
    the weights and ``gamma`` are rational.

    Raises:
        SupportError: if the generators are not distinct primes, or some
            ``gamma_n != 0`` has a prime factor outside the generators.
    """
    if not E.prime_generators:
        raise SupportError("norm formula needs prime generators")
    weight = dict(zip(E.n, E.b2))
    exact = E.mode is Mode.EXACT_RATIONAL and gamma.mode is Mode.EXACT_RATIONAL
    total = Fraction(0) if exact else 0.0
    for n, g in enumerate(gamma.coeffs, start=1):
        if g == 0:
            continue
        mu = factor(n)
        missing = [p for p in mu.generators if p not in weight]
        if missing:
            raise SupportError(f"gamma_{n} != 0 but prime {missing[0]} is not a generator")
        if exact:
            b2mu = Fraction(1)
            for p, e in zip(mu.generators, mu.exponents):
                b2mu *= weight[p] ** e
            total += g * g / b2mu * Fraction(mu.factorial, math.factorial(mu.degree))
        else:
            b2mu = math.prod(float(weight[p]) ** e for p, e in zip(mu.generators, mu.exponents))
            total += abs(complex(g)) ** 2 / b2mu * mu.factorial / math.factorial(mu.degree)
    return total


def multinomial_coefficient(E: Embedding, n: int):
    """``b^{2 mu(n)} |mu(n)|!/mu(n)!`` for a prime embedding (0 if unsupported)."""
    weight = dict(zip(E.n, E.b2))
    mu = factor(n)
    if any(p not in weight for p in mu.generators):
        return Fraction(0) if E.mode is Mode.EXACT_RATIONAL else 0.0
    out = Fraction(mu.multinomial) if E.mode is Mode.EXACT_RATIONAL else float(mu.multinomial)
    for p, e in zip(mu.generators, mu.exponents):
        out *= weight[p] ** e
    return out


def embedding_from_kernel(spec: KernelSpec, tol: Optional[float] = None) -> Embedding:
    """Weights ``b_n = sqrt(alpha_n)`` on every ``n >= 2`` with ``alpha_n > 0``.

    In REAL64 mode coefficients within the positivity tolerance of zero are
    dropped. The result is the finite section seen at ``spec.depth``; it is
    flagged unnormalized when the squared weights sum past 1.

    Raises:
        NotPickError: if some ``alpha_n`` is negative.
    """
    verdict = check_complete_pick(spec, tol)
    if not verdict.is_complete_pick:
        n, cn = verdict.first_violation
        raise NotPickError(f"alpha_{n} = {-cn} < 0")
    alpha = alpha_coefficients(spec).coeffs
    tau = positivity_tolerance(spec, tol)
    gens, weights = [], []
    for n in range(2, spec.depth + 1):
        if alpha[n - 1] > tau:
            gens.append(n)
            weights.append(alpha[n - 1])
    total = sum(float(w) for w in weights)
    return Embedding(tuple(gens), tuple(weights), allow_unnormalized=total > 1 + NORMALIZED_TOL)


def coordinate_gap(E: Embedding, r: float, points: Sequence[complex], k: int = 0) -> float:
    """``min |r - b_k n_k^{-s}|`` over ``points`` (lower-bounded by ``r - b_k``)."""
    pts = np.asarray([complex(p) for p in points])
    if np.any(pts.real <= 0):
        raise DomainError("points must lie in the right half plane")
    vals = E.b[k] * np.exp(-pts * math.log(E.n[k]))
    return float(np.min(np.abs(r - vals)))


def primes_embedding(b2: Sequence, **kwargs) -> Embedding:
    """Embedding on the first ``len(b2)`` primes."""
    return Embedding(tuple(primes_up_to(len(b2))), tuple(b2), **kwargs)
