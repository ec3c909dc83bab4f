import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerprime.exactfield import CyclotomicField, PrimeField, QuadraticExtension, Rational
from kummerprime.genus2 import (
    Curve, CurveMismatch, InvalidPoint, MumfordDivisor, NoZetaInField, apply_endo, cantor_add,
    embed_point, is_valid, negate, random_divisor, random_point, scalar_mul, sqrt5_on_jacobian,
    zeta_action,
)
from kummerprime.oracle import enumerate_jacobian

PRIMES = [11, 19, 31, 41, 59, 101]


@lru_cache(maxsize=None)
def fp_curve(p, h):
    return Curve(h, PrimeField(p))


def fp_divisor(p, h, seed):
    rng = random.Random(seed)
    curve = fp_curve(p, h)
    kind = rng.randrange(4)
    try:
        if kind == 1:
            return random_point(curve, rng)
        if kind > 1:
            return random_divisor(curve, rng)
    except InvalidPoint:  # some tiny curves have no affine points
        pass
    return curve.identity


@lru_cache(maxsize=None)
def cyclo_pool():
    """Small-height divisors on y^2 = x^5 + 2 over Q(zeta)."""
    curve = Curve(2, CyclotomicField())
    Q0 = embed_point(curve, -1, 1)
    Q1 = embed_point(curve, Rational(-1), Rational(-1))
    base = [Q0, Q1] + [zeta_action(curve, Q0, k) for k in range(1, 5)]
    pool = [curve.identity] + base
    for i, A in enumerate(base):
        for B in base[i:]:
            pool.append(cantor_add(curve, A, B))
    return curve, pool


triple_fp = st.tuples(st.sampled_from(PRIMES), st.integers(1, 9),
                      st.integers(0, 2 ** 32), st.integers(0, 2 ** 32), st.integers(0, 2 ** 32))


@pytest.mark.property
@settings(max_examples=500)
@given(triple_fp)
def test_group_laws_fp(t):
    p, h, s1, s2, s3 = t
    if h % p == 0:
        return
    curve = fp_curve(p, h)
    A, B, C = (fp_divisor(p, h, s) for s in (s1, s2, s3))
    AB = cantor_add(curve, A, B)
    assert AB == cantor_add(curve, B, A)
    assert cantor_add(curve, AB, C) == cantor_add(curve, A, cantor_add(curve, B, C))
    assert cantor_add(curve, A, negate(curve, A)).is_identity
    assert cantor_add(curve, A, curve.identity) == A
    for D in (AB, cantor_add(curve, AB, C)):
        assert is_valid(curve, D)


@pytest.mark.property
@settings(max_examples=500)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_group_laws_cyclotomic(i, j, k):
    curve, pool = cyclo_pool()
    A, B, C = pool[i % len(pool)], pool[j % len(pool)], pool[k % len(pool)]
    AB = cantor_add(curve, A, B)
    assert AB == cantor_add(curve, B, A)
    assert cantor_add(curve, AB, C) == cantor_add(curve, A, cantor_add(curve, B, C))
    assert is_valid(curve, AB)


@pytest.mark.property
@settings(max_examples=200)
@given(st.sampled_from([11, 31, 41, 61]), st.integers(1, 9), st.integers(0, 2 ** 32))
def test_cyclotomic_relation(p, h, seed):
    if h % p == 0:
        return
    curve = fp_curve(p, h)
    D = fp_divisor(p, h, seed)
    total = curve.identity
    for k in range(5):
        total = cantor_add(curve, total, zeta_action(curve, D, k))
    assert total.is_identity


@pytest.mark.property
@settings(max_examples=200)
@given(st.sampled_from([11, 31, 41, 61]), st.integers(1, 9), st.integers(0, 2 ** 32),
       st.integers(1, 4))
def test_sqrt5_squared_is_5(p, h, seed, k):
    if h % p == 0:
        return
    curve = fp_curve(p, h)
    D = fp_divisor(p, h, seed)
    S = sqrt5_on_jacobian(curve, D)
    assert is_valid(curve, S)
    assert sqrt5_on_jacobian(curve, S) == scalar_mul(curve, D, 5)
    # commutes with zeta^k
    assert sqrt5_on_jacobian(curve, zeta_action(curve, D, k)) == zeta_action(curve, S, k)


@pytest.mark.property
@pytest.mark.parametrize("p", [19, 29])
def test_sqrt5_over_quadratic_extension(p):
    curve = Curve(3, QuadraticExtension(p))
    rng = random.Random(p)
    for _ in range(30):
        D = random_divisor(curve, rng)
        assert sqrt5_on_jacobian(curve, sqrt5_on_jacobian(curve, D)) == scalar_mul(curve, D, 5)


def test_sqrt5_over_cyclotomic_field():
    curve, pool = cyclo_pool()
    for D in pool[:6]:
        S = sqrt5_on_jacobian(curve, D)
        assert is_valid(curve, S)
    D = pool[1]
    assert sqrt5_on_jacobian(curve, sqrt5_on_jacobian(curve, D)) == scalar_mul(curve, D, 5)


@pytest.mark.parametrize("p", [19, 29, 59, 79])
def test_group_order_p_4_mod_5(p):
    # for p = 4 mod 5 the Frobenius polynomial is (T^2 + p)^2
    for h in (1, 2, 3):
        assert len(enumerate_jacobian(p, h)) == (p + 1) ** 2


def test_degenerate_branches():
    p, h = 19, 3
    curve = fp_curve(p, h)
    F = curve.field
    # a Weierstrass point: y = 0 needs x^5 = -h (always solvable for p = 4 mod 5)
    w = next(x for x in F.elements() if x ** 5 + h == 0)
    W = embed_point(curve, w, 0)
    assert cantor_add(curve, W, W).is_identity
    assert negate(curve, W) == W
    # doubling a point, and adding points with a shared x-coordinate
    rng = random.Random(1)
    P = random_point(curve, rng)
    assert cantor_add(curve, P, P) == scalar_mul(curve, P, 2)
    Pm = negate(curve, P)
    assert cantor_add(curve, P, Pm).is_identity
    D = cantor_add(curve, P, P)
    assert cantor_add(curve, D, Pm) == P
    assert scalar_mul(curve, P, -3) == negate(curve, scalar_mul(curve, P, 3))
    assert scalar_mul(curve, P, 0).is_identity


def test_operator_sugar():
    curve = fp_curve(31, 3)
    P = random_point(curve, random.Random(5))
    assert P + P == 2 * P
    assert (3 * P) - P == 2 * P
    assert -P + P == curve.identity
    assert (-2) * P == -(2 * P)


def test_pointless_curve_is_reported():
    with pytest.raises(InvalidPoint):
        random_point(fp_curve(11, 7), random.Random(0))


def test_invalid_inputs():
    curve = fp_curve(31, 3)
    with pytest.raises(InvalidPoint):
        embed_point(curve, 1, 1)
    other = fp_curve(31, 4)
    P = random_point(curve, random.Random(0))
    Q = random_point(other, random.Random(0))
    with pytest.raises(CurveMismatch):
        cantor_add(curve, P, Q)
    with pytest.raises(NoZetaInField):
        zeta_action(fp_curve(19, 3), random_point(fp_curve(19, 3), random.Random(0)), 1)
    with pytest.raises(ValueError):
        Curve(0)
    with pytest.raises(ValueError):
        Curve(3, PrimeField(5))


def test_rational_multiples_stay_valid():
    curve = Curve(2)
    Q0 = embed_point(curve, -1, 1)
    D = scalar_mul(curve, Q0, 4)
    assert is_valid(curve, D)
    assert D.degree == 2
    assert isinstance(D, MumfordDivisor)


def test_apply_endo_matches_scalar():
    curve = fp_curve(41, 2)
    D = random_divisor(curve, random.Random(9))
    assert apply_endo(curve, D, (3, 0, 0, 0)) == scalar_mul(curve, D, 3)
    # 1 + z + z^2 + z^3 = -z^4
    assert apply_endo(curve, D, (1, 1, 1, 1)) == negate(curve, zeta_action(curve, D, 4))
