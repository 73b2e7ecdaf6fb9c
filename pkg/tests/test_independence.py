import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pickdirichlet import Embedding, dependence_witness, independence_check, multiplicative_rank, verify_witness
from pickdirichlet.independence import bareiss_rank, exponent_matrix, integer_relation
from pickdirichlet.series import primes_up_to

generator_lists = st.lists(st.integers(2, 400), min_size=1, max_size=6)


def embedding_for(n_list, b=None):
    b = b or [1 / math.sqrt(len(n_list))] * len(n_list)
    return Embedding.from_weights(b, n_list)


def random_points(seed, count=20):
    rng = np.random.default_rng(seed)
    return list(rng.uniform(0.1, 3, count) + 1j * rng.uniform(-5, 5, count))


@pytest.mark.parametrize(
    "n_list,rank,independent",
    [((2, 3, 5), 3, True), ((2, 3, 6), 2, False), ((4, 8), 1, False), (tuple(primes_up_to(10)), 10, True)],
)
def test_rank_examples(n_list, rank, independent):
    assert multiplicative_rank(n_list)[0] == rank
    assert independence_check(n_list) is independent


def test_exponent_matrix_rows():
    mat = exponent_matrix([4, 8, 6])
    assert mat.primes == (2, 3)
    assert mat.rows == ((2, 0), (3, 0), (1, 1))
    assert [mat.reconstruct(i) for i in range(3)] == [4, 8, 6]


def test_generators_below_two_rejected():
    with pytest.raises(ValueError):
        multiplicative_rank([1, 2])
    with pytest.raises(ValueError):
        dependence_witness([])


def test_witness_236():
    w = dependence_witness([2, 3, 6], [0.5, 0.6, 0.3])
    assert w.mu == (1, 1, 0) and w.nu == (0, 0, 1)
    assert w.products() == (6, 6) and w.holds()
    assert w.b_nu == pytest.approx(0.3) and w.b_mu == pytest.approx(0.5 * 0.6)
    z = (0.2 + 0.1j, -0.3j, 0.7)
    assert w.q(z) == pytest.approx(0.3 * z[0] * z[1] - 0.3 * z[2])


def test_witness_48():
    w = dependence_witness([4, 8])
    assert w.mu == (3, 0) and w.nu == (0, 2)
    assert w.products() == (64, 64)
    assert w.mu_index.value == 4**3 and w.nu_index.value == 8**2
    assert verify_witness(w, embedding_for([4, 8]), [1.0]) < 1e-15


def test_no_witness_for_independent():
    assert dependence_witness([2, 3, 5]) is None


def test_witness_vanishes_on_embedded_points():
    for n_list in ([2, 3, 6], [4, 8], [6, 10, 15, 30], [12, 18, 2, 3]):
        w = dependence_witness(n_list)
        assert verify_witness(w, embedding_for(n_list), random_points(len(n_list))) < 1e-13


def test_perturbed_witness_does_not_vanish():
    n_list = [2, 3, 6]
    w = dependence_witness(n_list)
    bad = dataclasses.replace(w, kappa=(w.kappa[0] + 1,) + w.kappa[1:])
    assert not bad.holds()
    re = np.linspace(0.2, 2.0, 10)
    grid = [x + 1j * y for x in re for y in np.linspace(-3, 3, 10)]
    vals = [verify_witness(bad, embedding_for(n_list), [s]) for s in grid]
    assert max(vals) > 1e-3


def test_verify_witness_shape_mismatch():
    w = dependence_witness([2, 3, 6])
    with pytest.raises(IndexError):
        verify_witness(w, embedding_for([2, 3]), [1.0])
    with pytest.raises(IndexError):
        verify_witness(dataclasses.replace(w, I=(0, 5)), embedding_for([2, 3, 6]), [1.0])


def test_witness_json():
    data = dependence_witness([2, 3, 6]).to_json()
    assert data["I"] == [0, 1] and data["J"] == [2] and data["kappa"] == [1, 1, 1]
    assert data["mu"] == [1, 1, 0] and data["nu"] == [0, 0, 1]


# ---- properties ----

@given(generator_lists)
def test_check_iff_no_witness(n_list):
    assert independence_check(n_list) == (dependence_witness(n_list) is None)


@given(generator_lists)
def test_witness_identity_is_exact(n_list):
    w = dependence_witness(n_list)
    if w is not None:
        left, right = w.products()
        assert left == right
        assert set(w.I).isdisjoint(w.J) and w.I
        assert w.mu != w.nu


@given(generator_lists, st.randoms(use_true_random=False))
def test_rank_permutation_invariant(n_list, rnd):
    shuffled = list(n_list)
    rnd.shuffle(shuffled)
    assert multiplicative_rank(shuffled)[0] == multiplicative_rank(n_list)[0]


@given(generator_lists, st.data())
def test_rank_power_invariant(n_list, data):
    i = data.draw(st.integers(0, len(n_list) - 1))
    m = data.draw(st.integers(1, 5))
    powered = list(n_list)
    powered[i] = powered[i] ** m
    assert multiplicative_rank(powered)[0] == multiplicative_rank(n_list)[0]


@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=6))
def test_bareiss_matches_float_rank(rows):
    assert bareiss_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@given(generator_lists)
def test_relation_is_in_left_kernel(n_list):
    mat = exponent_matrix(n_list)
    rel = integer_relation(mat)
    if rel is not None:
        combo = [sum(k * row[j] for k, row in zip(rel, mat.rows)) for j in range(len(mat.primes))]
        assert not any(combo)
        assert math.gcd(*rel) == 1
        assert next(v for v in rel if v) > 0


@given(st.lists(st.integers(2, 60), min_size=2, max_size=4, unique=True), st.integers(0, 10**6))
def test_witness_vanishes_property(n_list, seed):
    w = dependence_witness(n_list)
    if w is None:
        return
    E = embedding_for(n_list)
    scale = max(abs(t[0]) for t in w.terms)
    assert verify_witness(w, E, random_points(seed, 5)) <= 1e-12 * max(1.0, scale)
