import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from pickdirichlet import (
    ConvergenceError,
    DepthError,
    DirichletSeries,
    DomainError,
    Embedding,
    KernelSpec,
    ShapeError,
    ZeroKernelError,
    family_coefficients,
    hermitian_inertia,
    mcq_test,
    normalize_kernel_matrix,
    pick_feasibility,
)
from pickdirichlet.families import prime_embedding, prime_kernel_eval, rational_prime_embedding
from pickdirichlet.spectra import (
    exact_inertia,
    hermitian,
    inverse_kernel_matrix,
    jacobi_eigenvalues,
    kernel_matrix,
    pick_matrix,
    schur_matrix,
)


@st.composite
def hermitian_matrices(draw, max_dim=8):
    n = draw(st.integers(1, max_dim))
    vals = st.floats(-10, 10, allow_nan=False)
    re = np.array(draw(st.lists(vals, min_size=n * n, max_size=n * n))).reshape(n, n)
    im = np.array(draw(st.lists(vals, min_size=n * n, max_size=n * n))).reshape(n, n)
    A = re + 1j * im
    return (A + A.conj().T) / 2


def random_points(rng, count, lo=0.1, hi=3.0):
    return list(rng.uniform(lo, hi, count) + 1j * rng.uniform(-5, 5, count))


def bergman(z, w):
    return 1 / (1 - z * np.conj(w)) ** 2


# ---- inertia ----

@pytest.mark.parametrize(
    "M,signature",
    [(np.eye(2), (2, 0, 0)), (np.diag([1.0, -1.0]), (1, 0, 1)), ([[2.0, 1.0], [1.0, 2.0]], (2, 0, 0))],
)
def test_inertia_examples(M, signature):
    assert hermitian_inertia(M).signature == signature


def test_eigenvalues_of_small_example():
    assert np.allclose(jacobi_eigenvalues([[2.0, 1.0], [1.0, 2.0]]), [1.0, 3.0])


@given(hermitian_matrices())
def test_jacobi_matches_numpy(A):
    ours = jacobi_eigenvalues(A)
    ref = np.linalg.eigvalsh(A)
    assert np.allclose(ours, ref, atol=1e-10 * max(1.0, np.linalg.norm(A)))


@given(hermitian_matrices(), st.data())
def test_inertia_congruence_invariant(A, data):
    d = np.array(data.draw(st.lists(st.floats(0.2, 5), min_size=len(A), max_size=len(A))))
    eigs = np.linalg.eigvalsh(A)
    tol = 1e-9 * max(1.0, np.linalg.norm(A))
    # stay away from the classification threshold so rounding cannot flip a count
    assume(np.all(np.abs(np.abs(eigs) - tol) > 1e-6) and np.all(np.abs(eigs) > 1e-3))
    DAD = (d[:, None] * A) * d[None, :]
    assert hermitian_inertia(DAD, tol=1e-9).signature == hermitian_inertia(A, tol=1e-9).signature


def test_hermitian_checks():
    with pytest.raises(ShapeError):
        hermitian(np.ones((2, 3)))
    with pytest.raises(DomainError):
        hermitian([[1.0, 2.0], [0.0, 1.0]])
    sym = hermitian([[1.0, 1.0 + 1e-14], [1.0, 1.0]])
    assert sym[0, 1] == sym[1, 0]


def test_sweep_limit():
    with pytest.raises(ConvergenceError):
        jacobi_eigenvalues([[1.0, 0.5], [0.5, 2.0]], max_sweeps=0)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=5, max_size=5))
def test_exact_inertia_matches_numeric(rows):
    A = np.array(rows, dtype=float)
    A = np.triu(A) + np.triu(A, 1).T
    exact = exact_inertia(A.astype(int).tolist())
    eigs = np.linalg.eigvalsh(A)
    expected = (int(np.sum(eigs > 1e-9)), int(np.sum(np.abs(eigs) <= 1e-9)), int(np.sum(eigs < -1e-9)))
    assert exact.signature == expected


def test_exact_inertia_needs_two_by_two_pivot():
    assert exact_inertia([[0, 1], [1, 0]]).signature == (1, 0, 1)
    assert exact_inertia([[0, 0, 1], [0, 0, 0], [1, 0, 0]]).signature == (1, 1, 1)


def test_exact_inertia_for_rational_embedding():
    # integer points make n^{-s-conj(u)} rational, so [1/k] is exact
    E = Embedding((2, 3), (Fraction(1, 2), Fraction(1, 3)))
    pts = [1, 2, 3, 4]
    M = [[1 - sum(w * Fraction(1, g ** (i + j)) for g, w in zip(E.n, E.b2)) for j in pts] for i in pts]
    exact = exact_inertia(M)
    passes, numeric = mcq_test(E, pts)
    assert passes and exact.n_plus == 1
    assert numeric.n_plus == exact.n_plus


# ---- one positive eigenvalue ----

def test_single_point_passes():
    assert mcq_test(rational_prime_embedding(3), [1.0])[0]
    assert mcq_test(lambda s, u: 2.0, [0.3])[0]


def test_reciprocal_family_two_points():
    spec = family_coefficients("zeta1", 10_000, "rational")
    passes, inertia = mcq_test(spec, [1.0, 2.0])
    assert passes and inertia.signature == (1, 0, 1)
    M, tail = inverse_kernel_matrix(spec, [1.0, 2.0])
    # diagonal: 1 - sum_{n>=2} n^{-2 s}
    assert M[0, 0].real == pytest.approx(2 - float(mpmath.zeta(2)), abs=2 * tail)
    assert M[1, 1].real == pytest.approx(2 - float(mpmath.zeta(4)), abs=2 * tail)


def test_prime_kernel_sweep():
    rng = np.random.default_rng(11)
    E = prime_embedding(1e-6, truncated_infinite=False)
    for _ in range(100):
        pts = random_points(rng, 8)
        assert mcq_test(E, pts)[0]


def test_prime_closed_form_callable_sweep():
    rng = np.random.default_rng(12)
    for _ in range(20):
        pts = random_points(rng, 6)
        assert mcq_test(lambda s, u: prime_kernel_eval(s, u, 1e-6), pts)[0]


def test_bergman_kernel_fails():
    pts = [0.0, 0.5, 0.5j, -0.6]
    passes, inertia = mcq_test(bergman, pts)
    assert not passes and inertia.n_plus >= 2


def test_zero_kernel():
    with pytest.raises(ZeroKernelError):
        mcq_test(lambda s, u: 0.0 if s != u else 1.0, [1.0, 2.0])


def test_depth_error_without_envelope():
    spec = KernelSpec(family_coefficients("zeta1", 50, "rational").a)
    with pytest.raises(DepthError):
        mcq_test(spec, [1.0, 2.0])


def test_depth_error_when_tail_too_large():
    spec = family_coefficients("zeta1", 20, "rational")
    with pytest.raises((DepthError, ZeroKernelError)):
        mcq_test(spec, [0.7, 0.8, 0.9])


def test_points_must_be_distinct():
    with pytest.raises(ValueError):
        mcq_test(rational_prime_embedding(3), [1.0, 1.0])


@pytest.mark.parametrize("family", ["zeta1", "zeta2", "zeta3", "prime"])
def test_families_sweep_with_schur(family):
    rng = np.random.default_rng(5)
    spec = family_coefficients(family, 20_000)
    # the zeta families need Re(s) > 2 for a small tail at this depth
    lo, hi = (2.1, 5.0) if family != "prime" else (1.0, 3.0)
    for _ in range(15):
        pts = random_points(rng, int(rng.integers(2, 9)), lo, hi)
        assert mcq_test(spec, pts)[0]
        assert jacobi_eigenvalues(schur_matrix(spec, pts))[0] >= -1e-8


@given(st.lists(st.tuples(st.floats(0.1, 3), st.floats(-5, 5)), min_size=2, max_size=7, unique=True))
def test_schur_psd_for_embedding(raw):
    pts = [complex(x, y) for x, y in raw]
    assume(len({round(p.real, 6) + 1j * round(p.imag, 6) for p in pts}) == len(pts))
    S = schur_matrix(rational_prime_embedding(8), pts)
    assert jacobi_eigenvalues(S)[0] >= -1e-8


# ---- normalization ----

def test_normalized_rows_are_one():
    rng = np.random.default_rng(1)
    pts = random_points(rng, 5)
    K, _ = kernel_matrix(prime_embedding(1e-5, truncated_infinite=False), pts)
    Kn = normalize_kernel_matrix(K)
    assert np.allclose(Kn[0], 1) and np.allclose(Kn[:, 0], 1)
    assert np.allclose(normalize_kernel_matrix(Kn), Kn)


def test_normalize_by_hand():
    K = np.array([[2.0, 1.0 + 1.0j], [1.0 - 1.0j, 3.0]])
    Kn = normalize_kernel_matrix(K)
    assert Kn[1, 1] == pytest.approx(2.0 * 3.0 / ((1.0 - 1.0j) * (1.0 + 1.0j)))
    assert np.allclose(Kn[0], 1)


def test_normalized_kernel_stays_complete_pick():
    rng = np.random.default_rng(2)
    pts = random_points(rng, 6)
    K, _ = kernel_matrix(rational_prime_embedding(6), pts)
    Kn = normalize_kernel_matrix(K, base=2)
    assert hermitian_inertia(1 / Kn).n_plus == 1
    S = 1 - 1 / np.delete(np.delete(Kn, 2, 0), 2, 1)
    assert jacobi_eigenvalues(S)[0] >= -1e-9


def test_normalize_errors():
    with pytest.raises(ZeroKernelError):
        normalize_kernel_matrix([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ShapeError):
        normalize_kernel_matrix(np.ones((2, 3)))


# ---- Pick feasibility ----

def test_zero_targets_feasible():
    rng = np.random.default_rng(4)
    pts = random_points(rng, 5)
    feasible, lam = pick_feasibility(rational_prime_embedding(5), pts, [np.zeros((2, 2))] * 5)
    assert feasible and lam > 0


@pytest.mark.parametrize("w,expected", [(0.9, True), (0.3j, True), (1.1, False), (-2.0, False)])
def test_one_point(w, expected):
    feasible, _ = pick_feasibility(rational_prime_embedding(3), [1.0], [w])
    assert feasible is expected


def test_reciprocal_family_determinant_boundary():
    s1, s2 = 2.0, 3.0

    def k(x):
        return 1 / (2 - mpmath.zeta(x))

    k11, k12, k22 = k(2 * s1), k(s1 + s2), k(2 * s2)
    # det [[k11, k12], [k12, k22 (1 - w^2)]] = 0 at the boundary
    w_star = float(mpmath.sqrt(1 - k12**2 / (k11 * k22)))
    spec = family_coefficients("zeta1", 10_000, "rational")
    assert pick_feasibility(spec, [s1, s2], [0.0, 0.98 * w_star])[0]
    feasible, lam = pick_feasibility(spec, [s1, s2], [0.0, 1.02 * w_star])
    assert not feasible and lam < 0


def test_block_shapes():
    E = rational_prime_embedding(3)
    with pytest.raises(ShapeError):
        pick_feasibility(E, [1.0, 2.0], [np.eye(2), np.eye(3)])
    with pytest.raises(ShapeError):
        pick_feasibility(E, [1.0, 2.0], [np.zeros((2, 3)), np.zeros((2, 3))])
    with pytest.raises(ShapeError):
        pick_matrix(np.eye(2), [0.0])


@given(st.integers(0, 10**6), st.floats(0, 0.999))
def test_shrinking_targets_keeps_feasibility(seed, t):
    rng = np.random.default_rng(seed)
    E = prime_embedding(1e-5, truncated_infinite=False)
    pts = random_points(rng, 4)
    W = [0.5 * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) for _ in pts]
    feasible, _ = pick_feasibility(E, pts, W)
    if feasible:
        assert pick_feasibility(E, pts, [t * w for w in W])[0]


def test_feasible_targets_from_a_multiplier():
    # targets phi(s_i) of the contractive multiplier phi = first coordinate of f
    E = rational_prime_embedding(4)
    rng = np.random.default_rng(9)
    pts = random_points(rng, 6)
    targets = [float(E.b[0]) * 2.0 ** (-s) for s in pts]
    feasible, lam = pick_feasibility(E, pts, targets)
    assert feasible
