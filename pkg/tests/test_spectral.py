import random
from fractions import Fraction

import pytest

from oracles import brute_max_cycle_mean, cycle_mean, random_trop, star_by_powers
from tropkex.spectral import (
    AcyclicMatrixError,
    DivergentStarError,
    critical_arcs,
    critical_cycle,
    csr_decompose,
    csr_power,
    csr_threshold,
    is_strongly_connected,
    kleene_star,
    max_cycle_mean,
    normalize,
    strongly_connected_components,
)
from tropkex.trop import NEG_INF, TropMatrix, mat_pow

X = NEG_INF


def random_scc(rng: random.Random, n: int, lo: int = -5, hi: int = 5, density: float = 0.3):
    while True:
        A = random_trop(rng, n, lo, hi, density)
        # a lone vertex without a loop is strongly connected but acyclic
        if is_strongly_connected(A) and max_cycle_mean(A) != NEG_INF:
            return A


def test_cycle_mean_examples():
    assert max_cycle_mean(TropMatrix([[3]])) == 3
    assert max_cycle_mean(TropMatrix([[X, 1], [2, X]])) == Fraction(3, 2)
    assert max_cycle_mean(TropMatrix([[X, 1], [X, X]])) == NEG_INF
    # loop of weight 0 beats the 2-cycle of mean -1/2
    assert max_cycle_mean(TropMatrix([[0, 1], [-2, X]])) == 0


def test_cycle_mean_against_enumeration():
    rng = random.Random(31)
    for _ in range(300):
        A = random_trop(rng, rng.randint(1, 6), -10, 10, density=0.3)
        assert max_cycle_mean(A) == brute_max_cycle_mean(A)


def test_scc_partition():
    A = TropMatrix([[X, 0, X, X], [0, X, 0, X], [X, X, X, 0], [X, X, 0, X]])
    comps = sorted(strongly_connected_components(A))
    assert comps == [[0, 1], [2, 3]]
    assert not is_strongly_connected(A)
    assert is_strongly_connected(TropMatrix([[X, 0], [0, X]]))


def test_kleene_star_against_powers():
    rng = random.Random(32)
    checked = 0
    while checked < 150:
        A = random_trop(rng, rng.randint(1, 6), -10, 3, density=0.3)
        lam = max_cycle_mean(A)
        if lam != NEG_INF and lam > 0:
            with pytest.raises(DivergentStarError):
                kleene_star(A)
            continue
        assert kleene_star(A) == star_by_powers(A)
        checked += 1


def test_normalized_matrix_has_zero_cycle_mean():
    rng = random.Random(33)
    for _ in range(100):
        A = random_trop(rng, rng.randint(1, 5), density=0.3)
        lam = max_cycle_mean(A)
        if lam == NEG_INF:
            continue
        assert max_cycle_mean(normalize(A, lam)) == 0


def test_critical_cycle_is_critical():
    rng = random.Random(34)
    for _ in range(200):
        A = random_trop(rng, rng.randint(1, 6), density=0.3)
        lam = max_cycle_mean(A)
        if lam == NEG_INF:
            with pytest.raises(AcyclicMatrixError):
                critical_cycle(A, lam)
            continue
        cyc = critical_cycle(A, lam)
        assert cycle_mean(A, cyc.vertices) == lam
        assert len(set(cyc.vertices)) == cyc.length
        assert set(cyc.arcs()) <= set(critical_arcs(A, lam))


def test_critical_cycle_is_deterministic():
    # two disjoint critical loops: the walk starts at the lowest vertex
    A = TropMatrix([[X, 2, X], [0, X, X], [X, X, 1]])
    assert critical_cycle(A, Fraction(1)).vertices == (0, 1)
    assert critical_cycle(A, Fraction(1)) == critical_cycle(A, Fraction(1))


def test_csr_reproduces_large_powers():
    rng = random.Random(35)
    for _ in range(150):
        n = rng.randint(1, 6)
        A = random_scc(rng, n)
        d = csr_decompose(A)
        for t in range(n * n, n * n + 2 * d.length + 1):
            assert csr_power(d, t) == mat_pow(A, t)


def test_csr_threshold_is_at_most_n_squared():
    rng = random.Random(36)
    for _ in range(100):
        n = rng.randint(1, 5)
        A = random_scc(rng, n)
        T = csr_threshold(A)
        assert T is not None and T <= n * n


def test_csr_data_shapes_and_weight():
    A = TropMatrix([[X, 1, X], [X, X, 2], [3, X, X]])
    d = csr_decompose(A)
    assert d.lam == 2 and d.length == 3 and d.cycle_weight == 6
    assert d.B == TropMatrix([[X] * 3] * 3)
    # a pure 3-cycle: A^t is periodic from t = 0 after normalization
    for t in range(0, 12):
        assert csr_power(d, t) == mat_pow(A, t)


def test_csr_with_fractional_mean():
    A = TropMatrix([[X, 1], [0, X]])
    d = csr_decompose(A)
    assert d.lam == Fraction(1, 2) and d.cycle_weight == 1
    for t in range(1, 10):
        assert csr_power(d, t) == mat_pow(A, t)


def test_csr_rejects_acyclic():
    with pytest.raises(AcyclicMatrixError):
        csr_decompose(TropMatrix([[X, 1], [X, X]]))
