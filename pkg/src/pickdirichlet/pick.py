"""Complete Pick test for Dirichlet kernels ``k(s, u) = sum a_n n^{-s-conj(u)}``.

The kernel is complete Pick exactly when the coefficients ``c_n`` of ``1/k``
are non-positive for every ``n >= 2``. Everything here works on a finite
prefix, so a positive verdict only certifies ``2 <= n <= depth``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DepthError, NonUnitError, NotPickError
from .series import DirichletSeries, Mode, convolve, format_scalar, invert

#: relative factor for the REAL64 positivity tolerance
REAL_TOL_FACTOR = 1e-10


@dataclass(frozen=True)
class CoefficientEnvelope:
    """Bound ``|c_n| <= scale * (log n)**log_power * n**(-decay)`` for all ``n >= 2``.

    Only ``log_power`` in ``{0, 1}`` is supported. Used to bound the tail of
    ``1/k`` beyond the truncation depth.
    """

    scale: float = 1.0
    log_power: int = 0
    decay: float = 0.0

    def __post_init__(self):
        if self.log_power not in (0, 1):
            raise ValueError("log_power must be 0 or 1")

    def tail(self, N: int, sigma: float) -> float:
        """Upper bound on ``sum_{n>N} |c_n| n^{-sigma}`` (integral comparison)."""
        if self.scale == 0:
            return 0.0
        t = sigma + self.decay
        if t <= 1:
            return math.inf
        if self.log_power == 0:
            return self.scale * N ** (1 - t) / (t - 1)
        if math.log(N) * t <= 1:
            # log(x) x^{-t} is not yet decreasing at N; start the bound later
            return math.inf
        return self.scale * N ** (1 - t) * (math.log(N) / (t - 1) + 1 / (t - 1) ** 2)

    def to_json(self) -> dict:
        return {"scale": self.scale, "log_power": self.log_power, "decay": self.decay}

    @classmethod
    def from_json(cls, data: Optional[dict]) -> Optional["CoefficientEnvelope"]:
        if data is None:
            return None
        return cls(float(data["scale"]), int(data.get("log_power", 0)), float(data.get("decay", 0.0)))


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """Kernel coefficients ``a`` (normalized to ``a_1 = 1``) plus lazily computed ``c = 1/a``.

    If the input has ``a_1 != 1`` it is divided through and the original
    ``a_1`` is kept in :attr:`scale`. ``abscissa_hint`` is user metadata for
    the half plane of convergence; nothing here estimates it.
    """

    a: DirichletSeries
    c: Optional[DirichletSeries] = None
    abscissa_hint: Optional[float] = None
    envelope: Optional[CoefficientEnvelope] = None
    label: str = ""
    scale: object = field(default=1, init=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        a = self.a
        a1 = a.coeffs[0]
        if a1 == 0:
            raise NonUnitError("kernel coefficient a_1 is zero")
        if a1 != 1:
            object.__setattr__(self, "scale", a1)
            object.__setattr__(self, "a", a.scale(1 / a1 if a.mode is Mode.EXACT_RATIONAL else 1.0 / a1))
            object.__setattr__(self, "c", None)
        if self.c is not None and self.c.N != self.a.N:
            raise ValueError("seeded inverse series has the wrong depth")

    @property
    def depth(self) -> int:
        return self.a.N

    @property
    def mode(self) -> Mode:
        return self.a.mode

    @property
    def inverse(self) -> DirichletSeries:
        """Coefficients ``c_n`` of ``1/k``; computed once, thread-safe."""
        c = self.c
        if c is None:
            with self._lock:
                if self.c is None:
                    object.__setattr__(self, "c", invert(self.a))
                c = self.c
        return c

    def truncate(self, N: int) -> "KernelSpec":
        c = self.c.truncate(N) if self.c is not None else None
        return KernelSpec(self.a.truncate(N), c, self.abscissa_hint, self.envelope, self.label)

    def to_json(self) -> dict:
        out = {"a": self.a.to_json(), "abscissa_hint": self.abscissa_hint, "label": self.label}
        if self.scale != 1:
            out["scale"] = format_scalar(self.scale)
        if self.envelope is not None:
            out["envelope"] = self.envelope.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "KernelSpec":
        if "coeffs" in data:  # a bare series file
            return cls(DirichletSeries.from_json(data))
        hint = data.get("abscissa_hint")
        return cls(
            DirichletSeries.from_json(data["a"]),
            abscissa_hint=None if hint is None else float(hint),
            envelope=CoefficientEnvelope.from_json(data.get("envelope")),
            label=data.get("label", ""),
        )


@dataclass(frozen=True)
class PickVerdict:
    is_complete_pick: bool
    first_violation: Optional[tuple]
    depth: int
    warnings: tuple = ()

    def to_json(self) -> dict:
        out = {"complete_pick": self.is_complete_pick, "depth": self.depth, "first_violation": None}
        if self.first_violation is not None:
            n, cn = self.first_violation
            out["first_violation"] = {"n": n, "c_n": str(format_scalar(cn))}
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def positivity_tolerance(spec: KernelSpec, tol: Optional[float] = None) -> float:
    """Threshold above which a REAL64 ``c_n`` counts as positive (0 in exact mode)."""
    if spec.mode is Mode.EXACT_RATIONAL:
        return 0.0
    if tol is not None:
        return float(tol)
    return REAL_TOL_FACTOR * max(1.0, float(np.max(np.abs(spec.a.to_array()))))


def check_complete_pick(spec: KernelSpec, tol: Optional[float] = None) -> PickVerdict:
    """Return the smallest ``n >= 2`` with ``c_n > 0`` if any, else certify the prefix."""
    c = spec.inverse.coeffs
    tau = positivity_tolerance(spec, tol)
    warnings = ()
    if all(v == 0 for v in spec.a.coeffs[1:]):
        warnings = ("dim<=1",)
    for n in range(2, spec.depth + 1):
        if c[n - 1] > tau:
            return PickVerdict(False, (n, c[n - 1]), spec.depth, warnings)
    return PickVerdict(True, None, spec.depth, warnings)


def alpha_coefficients(spec: KernelSpec) -> DirichletSeries:
    """Coefficients of ``1 - 1/k``: ``alpha_1 = 0`` and ``alpha_n = -c_n``."""
    c = spec.inverse
    zero = Fraction(0) if c.mode is Mode.EXACT_RATIONAL else 0.0
    return DirichletSeries((zero,) + tuple(-v for v in c.coeffs[1:]), c.mode)


@dataclass
class GrowthReport:
    depth: int
    pairs: list = field(default_factory=list)
    identity_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "passed": self.passed,
            "pairs_checked": len(self.pairs),
            "identity_checked": self.identity_checked,
            "failures": self.failures,
        }


def growth_certificate(
    spec: KernelSpec, n_max: int, k_max: Optional[int] = None, tol: Optional[float] = None
) -> GrowthReport:
    """Check ``a_{n^k} >= |c_n|^k`` and ``a_n = sum_{d<n, d|n} a_d |c_{n/d}|``.

    The inequality is checked for ``2 <= n <= n_max`` and ``1 <= k <= k_max``
    with ``n^k <= depth``; the identity for every ``2 <= n <= depth``. In
    REAL64 mode both use a relative tolerance (default ``1e-9``).
    """
    N = spec.depth
    if n_max < 2 or n_max > N:
        raise DepthError(f"n_max={n_max} needs depth >= n_max >= 2, have depth {N}")
    verdict = check_complete_pick(spec)
    if not verdict.is_complete_pick:
        raise NotPickError(f"kernel fails the coefficient test at n={verdict.first_violation[0]}")

    exact = spec.mode is Mode.EXACT_RATIONAL
    rel = 0.0 if exact else (1e-9 if tol is None else float(tol))
    a, c = spec.a.coeffs, spec.inverse.coeffs
    report = GrowthReport(depth=N)

    for n in range(2, n_max + 1):
        k = 1
        while n**k <= N and (k_max is None or k <= k_max):
            lhs, rhs = a[n**k - 1], abs(c[n - 1]) ** k
            report.pairs.append((n, k))
            slack = 0 if exact else rel * max(1.0, abs(rhs))
            if lhs < rhs - slack:
                report.failures.append({"check": "growth", "n": n, "k": k, "a": str(lhs), "bound": str(rhs)})
            k += 1

    zero = Fraction(0) if exact else 0.0
    abs_c = DirichletSeries((zero,) + tuple(abs(v) for v in c[1:]), spec.mode)
    proper = convolve(spec.a, abs_c).coeffs  # sum over d | n with n/d >= 2
    for n in range(2, N + 1):
        an, s = a[n - 1], proper[n - 1]
        report.identity_checked += 1
        if (an != s) if exact else abs(an - s) > rel * max(1.0, abs(an)):
            report.failures.append({"check": "identity", "n": n, "a": str(an), "sum": str(s)})
    return report


def kernel_from_values(values, mode=None, **kwargs) -> KernelSpec:
    """Convenience: KernelSpec from a plain list of coefficients."""
    return KernelSpec(DirichletSeries.from_values(values, mode), **kwargs)


__all__ = [
    "CoefficientEnvelope",
    "KernelSpec",
    "PickVerdict",
    "GrowthReport",
    "check_complete_pick",
    "alpha_coefficients",
    "growth_certificate",
    "positivity_tolerance",
    "kernel_from_values",
]
