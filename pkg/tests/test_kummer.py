import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerprime.exactfield import PrimeField, Rational
from kummerprime.genus2 import Curve, embed_point, negate, random_divisor, scalar_mul
from kummerprime.kummer import (
    KummerPoint, StartVectorTooLarge, canonical_integers, evaluate_quartic, is_on_kummer, kappa,
    kummer_quartic, projectively_equal, start_vector,
)
from kummerprime.oracle import enumerate_jacobian, kummer_image, to_divisor

M1 = (2624400, -3559904, 1744784, 4190401)
M2 = (
    404639466968853040724837894653841687144570565354154879586235105531112025243056923459621450802999130059192965945600,
    151745807268799064958389324832732916992098986356237799611186211315039106660124123347467785740933508167817531798016,
    -519775702244808047789789255873896726222838826011524190361702788673015740605567989171463669584295088827451720640256,
    770605931674056814506337558989036249244738836104752323662620042074686653408771113007590496528284727186389858585601,
)


@pytest.mark.property
@settings(max_examples=300)
@given(st.sampled_from([11, 19, 31, 41, 61, 101]), st.integers(1, 20), st.integers(0, 2 ** 32))
def test_kappa_even_and_on_surface(p, h, seed):
    if h % p == 0:
        return
    curve = Curve(h, PrimeField(p))
    try:
        D = random_divisor(curve, random.Random(seed))
    except ValueError:
        return
    k = kappa(curve, D)
    assert k == kappa(curve, negate(curve, D))
    assert is_on_kummer(curve, k)


@pytest.mark.parametrize("p,h", [(11, 1), (19, 3), (31, 2)])
def test_kappa_on_every_divisor(p, h):
    curve = Curve(h, PrimeField(p))
    table = enumerate_jacobian(p, h)
    images = set()
    two_torsion = 0
    for D in table.elements:
        md = to_divisor(curve, D)
        k = kappa(curve, md)
        assert k == kappa(curve, negate(curve, md))
        assert is_on_kummer(curve, k)
        images.add(kummer_image(p, D))
        if table.add(D, D)[0] == 0:
            two_torsion += 1
    # fibres of kappa: +-D, so (#J + #J[2]) / 2 images
    assert len(images) == (len(table) + two_torsion) // 2


def test_quartic_over_rationals():
    curve = Curve(2)
    Q0 = embed_point(curve, -1, 1)
    for k in range(1, 9):
        D = scalar_mul(curve, Q0, k)
        assert is_on_kummer(curve, kappa(curve, D))


def test_quartic_monomials_match_evaluation():
    K = kummer_quartic(Curve(7))
    rng = random.Random(3)
    for _ in range(20):
        v = [rng.randint(-9, 9) for _ in range(4)]
        direct = K(*v)
        total = 0
        for e, c in K.monomials.items():
            t = c
            for x, k in zip(v, e):
                t *= x ** k
            total += t
        assert direct == total


def test_identity_and_point_images():
    curve = Curve(3)
    assert tuple(kappa(curve, curve.identity)) == (0, 0, 0, 1)
    P = embed_point(curve, 1, 2)
    assert tuple(kappa(curve, P)) == (0, 1, 1, 1)
    # (1:0:0:0) lies on the quartic for every h
    assert evaluate_quartic(5, 1, 0, 0, 0) == 0


def test_canonical_integers():
    assert canonical_integers((Rational(1, 2), Rational(-1, 3), 0, Rational(-5, 6))) == (-3, 2, 0, 5)
    assert canonical_integers((4, 6, 0, 0)) == (2, 3, 0, 0)
    with pytest.raises(ValueError):
        canonical_integers((0, 0, 0, 0))


def test_projective_equality():
    assert projectively_equal((1, 2, 3, 4), (2, 4, 6, 8))
    assert not projectively_equal((1, 2, 3, 4), (1, 2, 3, 5))
    assert not projectively_equal((0, 0, 0, 0), (0, 0, 0, 0))
    assert projectively_equal((1, 2, 3, 4), (3, 6, 9, 12 + 7), modulus=7)
    assert KummerPoint((1, 2, 3, 4)) == KummerPoint((Rational(1, 2), 1, Rational(3, 2), 2))
    with pytest.raises(ValueError):
        KummerPoint((0, 0, 0, 0))


def test_start_vector_m1():
    assert start_vector(2, -1, 1, 1) == M1


def test_start_vector_m2():
    assert start_vector(2, -1, 1, 2) == M2
    assert all(len(str(abs(c))) == 114 for c in M2)


def test_start_vector_m3_size():
    v = start_vector(2, -1, 1, 3)
    assert all(578 <= len(str(abs(c))) <= 580 for c in v)


def test_start_vector_cap():
    with pytest.raises(StartVectorTooLarge):
        start_vector(2, -1, 1, 33)
    with pytest.raises(ValueError):
        start_vector(2, -1, 1, 0)
