import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_trop
from tropkex.trop import (
    INT64_MAX,
    NEG_INF,
    ShapeError,
    TropMatrix,
    TropOverflowError,
    identity,
    mat_add,
    mat_mul,
    mat_pow,
    mat_pow_naive,
    trop_add,
    trop_mul,
)

scalars = st.one_of(st.just(NEG_INF), st.integers(-10**6, 10**6))


@pytest.mark.parametrize("a, b, expected", [
    (3, 5, 5),
    (NEG_INF, 7, 7),
    (4, 4, 4),
])
def test_trop_add(a, b, expected):
    assert trop_add(a, b) == expected


@pytest.mark.parametrize("a, b, expected", [
    (3, 5, 8),
    (NEG_INF, 7, NEG_INF),
    (0, 9, 9),
])
def test_trop_mul(a, b, expected):
    assert trop_mul(a, b) == expected


def test_trop_mul_overflow():
    with pytest.raises(TropOverflowError):
        trop_mul(INT64_MAX, 1)
    assert trop_mul(INT64_MAX, NEG_INF) == NEG_INF


@given(scalars, scalars, scalars)
def test_scalar_semiring_laws(a, b, c):
    assert trop_add(trop_add(a, b), c) == trop_add(a, trop_add(b, c))
    assert trop_mul(trop_mul(a, b), c) == trop_mul(a, trop_mul(b, c))
    assert trop_add(a, b) == trop_add(b, a)
    assert trop_add(a, a) == a
    assert trop_mul(a, trop_add(b, c)) == trop_add(trop_mul(a, b), trop_mul(a, c))
    assert trop_mul(trop_add(a, b), c) == trop_add(trop_mul(a, c), trop_mul(b, c))
    assert trop_mul(a, 0) == a and trop_add(a, NEG_INF) == a


def test_mat_mul_by_hand():
    A = TropMatrix([[1, 2], [3, 4]])
    B = TropMatrix([[5, 6], [7, 8]])
    # max(1+5, 2+7)=9, max(1+6, 2+8)=10, max(3+5, 4+7)=11, max(3+6, 4+8)=12
    assert mat_mul(A, B) == TropMatrix([[9, 10], [11, 12]])
    assert A @ B == mat_mul(A, B)


def test_mat_mul_identity_and_absorbing_row():
    rng = random.Random(3)
    A = random_trop(rng, 4, density=0.2)
    assert mat_mul(A, identity(4)) == A
    assert mat_mul(identity(4), A) == A
    Z = TropMatrix([[NEG_INF] * 3, [1, 2, 3]])
    out = mat_mul(Z, random_trop(rng, 3))
    assert out.rows[0] == (NEG_INF,) * 3


def test_mat_mul_rectangular_and_shape_error():
    A = TropMatrix([[0, 1, 2]])
    B = TropMatrix([[1], [1], [1]])
    assert mat_mul(A, B) == TropMatrix([[3]])
    with pytest.raises(ShapeError):
        mat_mul(A, A)


def test_mat_pow_examples():
    A = TropMatrix([[1, 2], [3, 4]])
    assert mat_pow(A, 0) == identity(2)
    assert mat_pow(A, 1) == A
    assert mat_pow(A, 2) == TropMatrix([[5, 6], [7, 8]])
    with pytest.raises(ShapeError):
        mat_pow(TropMatrix([[1, 2]]), 2)
    with pytest.raises(ValueError):
        mat_pow(A, -1)


def test_mat_pow_matches_naive():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 6)
        A = random_trop(rng, n, density=rng.choice([0.0, 0.3, 0.6]))
        for t in range(17):
            assert mat_pow(A, t) == mat_pow_naive(A, t)


def test_mat_pow_additive_in_exponent():
    rng = random.Random(5)
    for _ in range(40):
        A = random_trop(rng, rng.randint(1, 5), density=0.2)
        s, t = rng.randint(0, 10), rng.randint(0, 10)
        assert mat_pow(A, s + t) == mat_mul(mat_pow(A, s), mat_pow(A, t))


def test_neginf_column_survives_right_multiplication():
    rng = random.Random(9)
    for _ in range(30):
        A = random_trop(rng, 4)
        rows = [list(r) for r in A.rows]
        for r in rows:
            r[2] = NEG_INF
        A = TropMatrix(rows)
        B = random_trop(rng, 4, density=0.3)
        assert all(r[2] == NEG_INF for r in mat_mul(B, A).rows)


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(*[st.lists(st.lists(scalars, min_size=n, max_size=n),
                                   min_size=n, max_size=n)] * 3)))
def test_matrix_semiring_laws(mats):
    A, B, C = (TropMatrix(m) for m in mats)
    assert (A + B) + C == A + (B + C)
    assert (A @ B) @ C == A @ (B @ C)
    assert A + B == B + A
    assert A + A == A
    assert A @ (B + C) == A @ B + A @ C
    assert (A + B) @ C == A @ C + B @ C


def test_overflow_detected_in_products_and_powers():
    big = TropMatrix([[2**62, 0], [0, 2**62]])
    with pytest.raises(TropOverflowError):
        mat_mul(big, big)
    with pytest.raises(TropOverflowError):
        mat_pow(big, 2)
    with pytest.raises(TropOverflowError):
        TropMatrix([[2**63]])


def test_constructor_validation():
    with pytest.raises(ShapeError):
        TropMatrix([[1, 2], [3]])
    with pytest.raises(TypeError):
        TropMatrix([[1.5]])
    with pytest.raises(TypeError):
        TropMatrix([[True]])
    assert TropMatrix([[None, 1]]).rows == ((NEG_INF, 1),)


def test_mat_add_entrywise_max():
    assert mat_add(TropMatrix([[1, NEG_INF]]), TropMatrix([[0, 4]])) == TropMatrix([[1, 4]])
