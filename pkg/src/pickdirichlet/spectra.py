"""Finite-sample spectral checks on kernels.

* inertia of Hermitian matrices (cyclic Jacobi, plus an exact rational path),
* the one-positive-eigenvalue test on ``[1/k(l_i, l_j)]``,
* normalization of a kernel at a base point,
* positivity of the block Pick matrix ``[k(l_i, l_j)(I - W_i W_j^*)]``.

A "kernel" here is a :class:`KernelSpec` (evaluated from the truncated series
of ``1/k`` with a certified tail), an :class:`Embedding`, or any callable
``k(s, u) -> complex``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .embedding import Embedding, gram
from .errors import ConvergenceError, DepthError, DomainError, ShapeError, ZeroKernelError
from .pick import KernelSpec

MAX_SWEEPS = 50
#: off-diagonal Frobenius norm at which the Jacobi sweep stops, relative to ||M||_F
OFFDIAG_RTOL = 1e-13
HERMITIAN_RTOL = 1e-12

Kernel = Union[KernelSpec, Embedding, Callable[[complex, complex], complex]]


def hermitian(M, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Check ``M`` is Hermitian within ``rtol`` of the larger modulus and symmetrize it."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    diff = np.abs(A - A.conj().T)
    scale = np.maximum(np.abs(A), np.abs(A.T))
    bad = diff > rtol * scale + 1e-300
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise DomainError(f"matrix is not Hermitian at ({i}, {j})")
    return (A + A.conj().T) / 2


def jacobi_eigenvalues(M, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.

    Each rotation first removes the phase of the pivot ``a_pq`` with a
    diagonal unitary and then applies the real symmetric Jacobi rotation.

    Raises:
        ConvergenceError: if the off-diagonal mass is still above
            ``1e-13 * ||M||_F`` after ``max_sweeps`` sweeps.
    """
    A = hermitian(M).copy()
    n = A.shape[0]
    fro = np.linalg.norm(A)
    if n <= 1 or fro == 0.0:
        return np.sort(np.real(np.diag(A)))
    target = OFFDIAG_RTOL * fro

    def off_norm() -> float:
        return float(np.linalg.norm(A - np.diag(np.diag(A))))

    for _ in range(max_sweeps):
        if off_norm() <= target:
            return np.sort(np.real(np.diag(A)))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300 or r < 1e-18 * target:
                    continue
                phase = apq / r
                # unitary diag scaling makes the pivot real and positive
                A[:, q] *= phase.conjugate()
                A[q, :] *= phase
                app, aqq = A[p, p].real, A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    if off_norm() <= target:
        return np.sort(np.real(np.diag(A)))
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


@dataclass(frozen=True)
class InertiaResult:
    n_plus: int
    n_zero: int
    n_minus: int
    tol_used: float
    eigenvalues: tuple = ()

    @property
    def signature(self) -> tuple:
        return (self.n_plus, self.n_zero, self.n_minus)

    def to_json(self) -> dict:
        return {"n_plus": self.n_plus, "n_zero": self.n_zero, "n_minus": self.n_minus, "tol": self.tol_used}


def default_tol(M) -> float:
    return 1e-9 * max(1.0, float(np.linalg.norm(np.asarray(M, dtype=complex))))


def classify(eigs: np.ndarray, tol: float) -> InertiaResult:
    eigs = np.asarray(eigs, dtype=float)
    plus = int(np.sum(eigs > tol))
    minus = int(np.sum(eigs < -tol))
    return InertiaResult(plus, len(eigs) - plus - minus, minus, tol, tuple(eigs.tolist()))


def hermitian_inertia(M, tol: Optional[float] = None) -> InertiaResult:
    """Counts of eigenvalues above ``tol``, within ``[-tol, tol]`` and below ``-tol``."""
    if tol is None:
        tol = default_tol(M)
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return classify(jacobi_eigenvalues(M), tol)


def exact_inertia(M: Sequence[Sequence]) -> InertiaResult:
    """Inertia of a rational symmetric matrix by symmetric elimination over Q.

    Pivots on a nonzero diagonal entry when there is one, otherwise on a
    2x2 block ``[[0, a], [a, 0]]`` (inertia (1, 0, 1)); inertia is additive
    over Schur complements.
    """
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    if any(len(row) != n for row in A):
        raise ShapeError("expected a square matrix")
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(i)):
        raise DomainError("matrix is not symmetric")
    plus = minus = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if A[i][i] != 0), None)
        if k is not None:
            piv = A[k][k]
            plus += piv > 0
            minus += piv < 0
            idx.remove(k)
            for i in idx:
                f = A[i][k] / piv
                if f:
                    for j in idx:
                        A[i][j] -= f * A[k][j]
            continue
        pair = next(((i, j) for i in idx for j in idx if i < j and A[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        a = A[i0][j0]
        plus += 1
        minus += 1
        idx.remove(i0)
        idx.remove(j0)
        # Schur complement against [[0, a], [a, 0]], whose inverse is [[0, 1/a], [1/a, 0]]
        for i in idx:
            for j in idx:
                A[i][j] -= (A[i][i0] * A[j0][j] + A[i][j0] * A[i0][j]) / a
    return InertiaResult(plus, n - plus - minus, minus, 0.0)


# --------------------------------------------------------------------------
# kernel matrices


def _points(points: Sequence) -> list[complex]:
    pts = [complex(p) for p in points]
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    return pts


def inverse_kernel_matrix(kernel: Kernel, points: Sequence[complex]) -> tuple[np.ndarray, float]:
    """``[1/k(l_i, l_j)]`` and an entrywise error bound.

    For a KernelSpec the entries are ``sum_{n<=N} c_n n^{-s_i-conj(s_j)}`` and the
    bound comes from the KernelSpec coefficient envelope (infinite without one).
    """
    pts = _points(points)
    if isinstance(kernel, KernelSpec):
        N = kernel.depth
        logs = np.log(np.arange(1, N + 1, dtype=float))
        V = np.exp(-np.outer(pts, logs))
        M = (V * kernel.inverse.to_array()) @ V.conj().T
        sigma = 2 * min(p.real for p in pts)
        tail = kernel.envelope.tail(N, sigma) if kernel.envelope is not None else math.inf
        return M, tail
    if isinstance(kernel, Embedding):
        G, tail = gram(kernel, pts)
        return 1.0 - G, tail
    K = np.array([[complex(kernel(s, u)) for u in pts] for s in pts])
    if np.any(np.abs(K) == 0):
        raise ZeroKernelError("kernel vanishes at a sample pair")
    return 1.0 / K, 0.0


def kernel_matrix(kernel: Kernel, points: Sequence[complex]) -> tuple[np.ndarray, float]:
    """``[k(l_i, l_j)]`` and an entrywise error bound."""
    if not isinstance(kernel, (KernelSpec, Embedding)):
        pts = _points(points)
        return np.array([[complex(kernel(s, u)) for u in pts] for s in pts]), 0.0
    Minv, tail = inverse_kernel_matrix(kernel, points)
    mags = np.abs(Minv)
    if np.any(mags <= tail) or np.any(mags == 0):
        raise ZeroKernelError("1/k is not bounded away from zero at a sample pair")
    K = 1.0 / Minv
    err = 0.0 if tail == 0 else float(np.max(tail / (mags * (mags - tail))))
    return K, err


def _certified(eigs: np.ndarray, tol: float, pert: float) -> bool:
    """No eigenvalue sits where a perturbation of size ``pert`` could move it across ``+-tol``."""
    if pert == 0:
        return True
    if not math.isfinite(pert):
        return False
    return not np.any(np.abs(np.abs(eigs) - tol) <= pert)


def mcq_test(kernel: Kernel, points: Sequence[complex], tol: Optional[float] = None) -> tuple[bool, InertiaResult]:
    """Does ``[1/k(l_i, l_j)]`` have exactly one positive eigenvalue?

    Raises:
        ZeroKernelError: some ``k(l_i, l_j)`` is within ``tol`` of zero.
        DepthError: the truncation error could change the eigenvalue count.
    """
    pts = _points(points)
    if not isinstance(kernel, (KernelSpec, Embedding)):
        K = np.array([[complex(kernel(s, u)) for u in pts] for s in pts])
        small = 1e-12 if tol is None else tol
        if np.any(np.abs(K) <= small):
            raise ZeroKernelError("kernel value within tolerance of zero")
        M, tail = 1.0 / K, 0.0
    else:
        M, tail = inverse_kernel_matrix(kernel, pts)
    M = hermitian(M, rtol=max(HERMITIAN_RTOL, 1e-9))
    if tol is None:
        tol = default_tol(M)
    eigs = jacobi_eigenvalues(M)
    # Weyl: eigenvalues move by at most ||E||_2 <= dim * max|E_ij|
    pert = len(pts) * tail
    if not _certified(eigs, tol, pert):
        raise DepthError(f"series tail {tail:.3g} too large to certify the inertia at tol {tol:.3g}")
    inertia = classify(eigs, tol)
    return inertia.n_plus == 1, inertia


def schur_matrix(kernel: Kernel, points: Sequence[complex]) -> np.ndarray:
    """``[1 - 1/k(l_i, l_j)]``; positive semi-definite for normalized complete Pick kernels."""
    M, _ = inverse_kernel_matrix(kernel, points)
    return hermitian(1.0 - M, rtol=1e-9)


def normalize_kernel_matrix(K, base: int = 0) -> np.ndarray:
    """``K'_ij = K_00 K_ij / (K_i0 K_0j)``; row and column ``base`` become all ones.

    The ``K_00`` factor is 1 for a kernel already normalized at the base
    point; otherwise it is a positive rescaling that keeps the inertia.
    """
    A = np.asarray(K, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("expected a square matrix")
    col, row = A[:, base], A[base, :]
    if np.any(np.abs(col) == 0) or np.any(np.abs(row) == 0):
        raise ZeroKernelError("kernel vanishes against the base point")
    return A[base, base] * A / np.outer(col, row)


def pick_matrix(K: np.ndarray, targets: Sequence) -> np.ndarray:
    """Block matrix ``[K_ij (I_m - W_i W_j^*)]``."""
    Ws = [np.atleast_2d(np.asarray(W, dtype=complex)) for W in targets]
    N = K.shape[0]
    if len(Ws) != N:
        raise ShapeError(f"{len(Ws)} targets for {N} points")
    m = Ws[0].shape[0]
    if any(W.shape != (m, m) for W in Ws):
        raise ShapeError("targets must be square and of a common size")
    I = np.eye(m)
    P = np.zeros((m * N, m * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            P[i * m : (i + 1) * m, j * m : (j + 1) * m] = K[i, j] * (I - Ws[i] @ Ws[j].conj().T)
    return P


def pick_feasibility(
    kernel: Kernel, points: Sequence[complex], targets: Sequence, tol: Optional[float] = None
) -> tuple[bool, float]:
    """Is the block Pick matrix positive semi-definite (min eigenvalue ``>= -tol``)?

    Raises:
        ShapeError: targets are not square matrices of one common size.
        DepthError: the kernel truncation error could flip the verdict.
    """
    K, err = kernel_matrix(kernel, points)
    P = pick_matrix(K, targets)
    P = hermitian(P, rtol=1e-9)
    if tol is None:
        tol = default_tol(P)
    eigs = jacobi_eigenvalues(P)
    lam = float(eigs[0])
    if err:
        Ws = [np.atleast_2d(np.asarray(W, dtype=complex)) for W in targets]
        m = Ws[0].shape[0]
        block = max(np.linalg.norm(np.eye(m) - A @ B.conj().T, 2) for A in Ws for B in Ws)
        pert = P.shape[0] * err * block
        if abs(lam + tol) <= pert:
            raise DepthError("kernel truncation error could flip the Pick verdict")
    return lam >= -tol, lam
