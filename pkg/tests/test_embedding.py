import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pickdirichlet import (
    DirichletSeries,
    DomainError,
    Embedding,
    KernelSpec,
    Mode,
    NotPickError,
    check_complete_pick,
    embed_point,
    embedding_from_kernel,
    family_coefficients,
    kernel_coefficients,
    kernel_eval,
    norm_of,
)
from pickdirichlet.embedding import coordinate_gap, gram, multinomial_coefficient, primes_embedding
from pickdirichlet.errors import SupportError
from pickdirichlet.families import prime_embedding, prime_kernel_eval, rational_prime_embedding
from pickdirichlet.series import factor, primes_up_to
from pickdirichlet.spectra import jacobi_eigenvalues


@st.composite
def rational_embeddings(draw, max_gen=80, max_k=6):
    gens = draw(st.lists(st.integers(2, max_gen), min_size=1, max_size=max_k, unique=True))
    raw = draw(st.lists(st.integers(1, 20), min_size=len(gens), max_size=len(gens)))
    total = draw(st.integers(sum(raw), 3 * sum(raw)))
    return Embedding(tuple(gens), tuple(Fraction(r, total) for r in raw))


@st.composite
def half_plane_points(draw, count, lo=0.05, hi=4.0):
    re = draw(st.lists(st.floats(lo, hi), min_size=count, max_size=count))
    im = draw(st.lists(st.floats(-8, 8), min_size=count, max_size=count))
    return [complex(x, y) for x, y in zip(re, im)]


def monomial(n, mode=Mode.EXACT_RATIONAL):
    return DirichletSeries(tuple([0] * (n - 1) + [1]), mode)


# ---- construction ----

def test_duplicates_merge_and_sort():
    E = Embedding((5, 2, 5), (Fraction(1, 8), Fraction(1, 4), Fraction(1, 8)))
    assert E.n == (2, 5)
    assert E.b2 == (Fraction(1, 4), Fraction(1, 4))


def test_rejects_bad_embeddings():
    with pytest.raises(ValueError):
        Embedding((1, 2), (0.1, 0.1))
    with pytest.raises(ValueError):
        Embedding((2, 3), (0.5, 0.0))
    with pytest.raises(ValueError):
        Embedding((2, 3), (Fraction(2, 3), Fraction(1, 2)))
    E = Embedding((2, 3), (Fraction(2, 3), Fraction(1, 2)), allow_unnormalized=True)
    assert not E.normalized


def test_normalization_flag():
    assert Embedding((2, 3), (Fraction(1, 2), Fraction(1, 2))).normalized
    assert not Embedding((2, 3), (Fraction(1, 2), Fraction(1, 4))).normalized
    assert Embedding.from_weights([math.sqrt(0.5)] * 2, [2, 3]).normalized


def test_json_round_trip_exact():
    E = Embedding((2, 3, 12), (Fraction(1, 3), Fraction(1, 6), Fraction(1, 2)))
    data = E.to_json()
    assert set(data) >= {"b", "n", "normalized", "truncated_infinite"}
    back = Embedding.from_json(data)
    assert back.n == E.n and back.b2 == E.b2


def test_json_round_trip_float():
    E = prime_embedding(1e-3)
    back = Embedding.from_json(E.to_json())
    assert back.n == E.n and back.truncated_infinite
    assert np.allclose(back.b, E.b, rtol=1e-15)
    assert back.remaining_weight == pytest.approx(E.remaining_weight)


# ---- point evaluation ----

def test_embed_point_example():
    E = Embedding.from_weights([math.sqrt(0.5)] * 2, [2, 3])
    ev = embed_point(E, 1)
    assert np.allclose(ev.vector, [math.sqrt(0.5) / 2, math.sqrt(0.5) / 3])
    assert ev.tail_norm_bound == 0


def test_embed_point_far_right():
    assert np.max(np.abs(embed_point(prime_embedding(1e-4), 200 + 3j).vector)) < 1e-60


@pytest.mark.parametrize("s", [0, -1 + 2j, 1e-300j])
def test_half_plane_enforced(s):
    E = rational_prime_embedding(3)
    with pytest.raises(DomainError):
        embed_point(E, s)
    with pytest.raises(DomainError):
        kernel_eval(E, 1, s)


@given(half_plane_points(1, lo=1e-3))
def test_points_map_into_ball(pts):
    ev = embed_point(prime_embedding(1e-4), pts[0])
    assert ev.norm_sq + ev.tail_norm_bound < 1


@given(st.floats(0.01, 10))
def test_diagonal_kernel_real_and_at_least_one(x):
    value = kernel_eval(rational_prime_embedding(10), x, x).value
    assert abs(value.imag) < 1e-14 and value.real >= 1


# ---- kernel coefficients ----

def test_two_generator_examples():
    b1, b2 = Fraction(1, 3), Fraction(1, 2)
    a = kernel_coefficients(Embedding((2, 3), (b1, b2)), 6).a
    assert a.coeff(6) == 2 * b1 * b2
    a = kernel_coefficients(Embedding((2, 4), (b1, b2)), 4).a
    assert a.coeff(4) == b1**2 + b2


def test_kernel_coefficients_seed_inverse():
    E = Embedding((3, 5), (Fraction(1, 2), Fraction(1, 3)))
    spec = kernel_coefficients(E, 10)
    assert spec.inverse.coeffs == (1, 0, Fraction(-1, 2), 0, Fraction(-1, 3), 0, 0, 0, 0, 0)
    assert check_complete_pick(spec).is_complete_pick


@given(st.integers(1, 12), st.data())
def test_multinomial_formula(K, data):
    E = rational_prime_embedding(K)
    N = data.draw(st.integers(1, 400))
    a = kernel_coefficients(E, N).a
    n = data.draw(st.integers(1, N))
    assert a.coeff(n) == multinomial_coefficient(E, n)


@given(half_plane_points(2, lo=1.0, hi=3.0))
def test_series_matches_closed_form(pts):
    E = Embedding((2, 3, 7), (Fraction(1, 2), Fraction(1, 4), Fraction(1, 5)))
    s, u = pts
    N = 2000
    a = kernel_coefficients(E, N).a.to_array()
    n = np.arange(1, N + 1, dtype=float)
    partial = complex(np.sum(a * np.exp(-(s + u.conjugate()) * np.log(n))))
    sigma = s.real + u.real
    # a_n >= 0, so the tail at complex s+conj(u) is dominated by the real tail at sigma
    real_tail = kernel_eval(E, sigma / 2, sigma / 2).value.real - float(np.sum(a * n**-sigma))
    assert abs(partial - kernel_eval(E, s, u).value) <= real_tail + 1e-12


def test_prime_embedding_matches_closed_form():
    rng = np.random.default_rng(3)
    E = prime_embedding(1e-6)
    for _ in range(10):
        s, u = rng.uniform(0.1, 3, 2) + 1j * rng.uniform(-5, 5, 2)
        assert abs(kernel_eval(E, s, u).value - prime_kernel_eval(s, u, 1e-6)) < 1e-9


def test_truncated_embedding_error_bound():
    fine = prime_embedding(1e-7)
    for K in (1, 10, 500):
        section = Embedding(fine.n[:K], fine.b2[:K], truncated_infinite=True, declared_total=fine.weight_budget)
        for s, u in [(0.5 + 1j, 0.7), (2.0, 1.0 - 3j), (0.2, 0.2)]:
            kv = kernel_eval(section, s, u)
            assert abs(kv.value - kernel_eval(fine, s, u).value) <= kv.error + 1e-12


@given(half_plane_points(6))
def test_gram_kernel_matrix_is_psd(pts):
    if len({round(p.real, 9) + 1j * round(p.imag, 9) for p in pts}) < len(pts):
        return
    E = rational_prime_embedding(6)
    K = np.array([[kernel_eval(E, s, u).value for u in pts] for s in pts])
    assert jacobi_eigenvalues(K)[0] >= -1e-9 * np.linalg.norm(K)
    G, tail = gram(E, pts)
    assert tail == 0 and jacobi_eigenvalues(G)[0] >= -1e-12


# ---- norms ----

def test_norm_of_constant():
    assert norm_of(rational_prime_embedding(3), DirichletSeries.delta(5)) == 1


def test_norm_of_six():
    b1, b2 = Fraction(1, 3), Fraction(2, 3)
    E = Embedding((2, 3), (b1, b2))
    assert norm_of(E, monomial(6)) == 1 / (2 * b1 * b2)
    assert norm_of(E, monomial(6)) * kernel_coefficients(E, 6).a.coeff(6) == 1


def test_norm_times_coefficient_is_one():
    E = rational_prime_embedding(25)
    a = kernel_coefficients(E, 100).a
    assert all(norm_of(E, monomial(n)) * a.coeff(n) == 1 for n in range(1, 101))


@given(st.fractions(-3, 3, max_denominator=9), st.fractions(-3, 3, max_denominator=9))
def test_parseval(x, y):
    E = rational_prime_embedding(4)
    h = DirichletSeries((0, x, y))
    assert norm_of(E, h) == norm_of(E, DirichletSeries((0, x))) + norm_of(E, DirichletSeries((0, 0, y)))


def test_norm_support_errors():
    E = Embedding((2, 3), (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(SupportError, match="gamma_5"):
        norm_of(E, monomial(5))
    with pytest.raises(SupportError):
        norm_of(Embedding((2, 4), (Fraction(1, 2), Fraction(1, 2))), monomial(2))


def test_norm_real_mode():
    E = primes_embedding([0.25, 0.25, 0.5])
    h = DirichletSeries((1.0, 0.0, 2.0, 0.0, 0.0, 1.0), Mode.REAL64)
    # 1 + |2|^2 / b_3^2 + 1/(2 b_2^2 b_3^2)
    assert norm_of(E, h) == pytest.approx(1 + 4 / 0.25 + 1 / (2 * 0.25 * 0.25))


# ---- recovering embeddings ----

@given(rational_embeddings())
def test_round_trip(E):
    back = embedding_from_kernel(kernel_coefficients(E, max(E.n)))
    assert back.n == E.n and back.b2 == E.b2


def test_reciprocal_family_gives_unit_weights():
    E = embedding_from_kernel(family_coefficients("zeta1", 30, "rational"))
    assert E.n == tuple(range(2, 31))
    assert all(w == 1 for w in E.b2)
    assert not E.normalized


def test_zeta_kernel_has_no_embedding():
    with pytest.raises(NotPickError):
        embedding_from_kernel(KernelSpec(DirichletSeries.ones(10)))


def test_real_mode_drops_tiny_weights():
    spec = kernel_coefficients(Embedding((2, 5), (0.3, 0.6)), 40)
    E = embedding_from_kernel(KernelSpec(spec.a))  # inverse recomputed in floating point
    assert E.n == (2, 5)
    assert np.allclose(E.b2, (0.3, 0.6))


# ---- coordinate gap ----

def test_coordinate_gap_lower_bound():
    E = rational_prime_embedding(5)
    re = np.linspace(0.01, 10, 60)
    im = np.linspace(0, 2 * math.pi / math.log(2), 60)
    grid = (re[:, None] + 1j * im[None, :]).ravel()
    b1 = float(E.b[0])
    for r in (0.75, 0.9, 1.5):
        assert coordinate_gap(E, r, grid) >= r - b1 - 1e-12
    with pytest.raises(DomainError):
        coordinate_gap(E, 0.9, [0.0])
