import random
from functools import lru_cache

import pytest

from published_forms import as_map as published_map
from kummerprime import formats, linalg
from kummerprime.certify import _program_mod
from kummerprime.exactfield import CyclotomicField, PrimeField
from kummerprime.genus2 import Curve, embed_point, random_divisor, sqrt5_on_jacobian
from kummerprime.kernels import iterate_step
from kummerprime.kummer import KummerPoint, is_on_kummer, kappa, projectively_equal
from kummerprime.sqrt5synth import (
    MONOMIAL_ORDER, BoundTooSmall, DegenerateSamples, MapInvalid, SamplePair, Sqrt5Map,
    build_linear_system, build_sample_set, monomial_count, monomials, sample_endos, sample_pairs,
    solve_map, synthesize, validate_map, validation_primes,
)


@lru_cache(maxsize=None)
def h2_pairs():
    curve = Curve(2, CyclotomicField())
    Q0 = embed_point(curve, -1, 1)
    return curve, tuple(sample_pairs(curve, build_sample_set(curve, Q0, 4, 120)))


def test_monomial_order():
    ms = monomials(5)
    assert len(ms) == monomial_count(5) == 56
    assert ms[0] == (5, 0, 0, 0) and ms[-1] == (0, 0, 0, 5)
    assert ms == sorted(ms, reverse=True)
    assert MONOMIAL_ORDER == "lex-desc-e0e1e2e3"


def test_sample_endos():
    ts = sample_endos(1)
    assert (0, 0, 0, 0) not in ts
    assert all(next(x for x in t if x) > 0 for t in ts)
    assert len(ts) == (3 ** 4 - 1) // 2


def test_sample_set_size_and_bound():
    curve, pairs = h2_pairs()
    assert len(pairs) == 120
    for p in pairs[:10]:
        assert is_on_kummer(curve, p.source) and is_on_kummer(curve, p.image)
    with pytest.raises(BoundTooSmall):
        build_sample_set(curve, embed_point(curve, -1, 1), 1, 500)


def test_system_shape():
    _, pairs = h2_pairs()
    system = build_linear_system(pairs, 5)
    assert system.shape == (16 * 120, 4 * 56 + 4 * 120)
    rows = system.reduced_rows()
    assert len(rows) == 1440 and len(rows[0]) == 224


def test_full_and_reduced_systems_agree():
    # lambda-elimination keeps exactly the kernel of the full system, restricted to the a-part
    _, pairs = h2_pairs()
    system = build_linear_system(pairs[:6], 5)
    full = system.dense_full()
    k_full = linalg.modular_kernel(full, system.shape[1])
    k_red = linalg.modular_kernel(system.reduced_rows(), system.a_columns)
    assert len(k_full) == len(k_red)


def test_solver_methods_agree_on_slice():
    _, pairs = h2_pairs()
    rows = build_linear_system(pairs, 5).reduced_rows()[:120]
    a = linalg.modular_kernel(rows, 224)
    b = linalg.bareiss_kernel(rows, 224)
    norm = lambda basis: [tuple(linalg.primitive_integer_vector(v)) for v in basis]
    assert norm(a) == norm(b)


def test_published_map_validates():
    rep = validate_map(published_map(), trials=50, primes=5)
    assert rep.ok and len(rep.per_prime) == 5
    assert all(p % 5 == 1 and p > 1 << 20 for p in rep.per_prime)


def test_forged_map_is_rejected():
    smap = published_map()
    rows = [list(r) for r in smap.coefficients]
    rows[3][0] += 1
    forged = Sqrt5Map(2, 5, rows)
    with pytest.raises(MapInvalid) as exc:
        validate_map(forged, trials=10, primes=2)
    assert exc.value.p in validation_primes(2, 2)


def test_map_for_wrong_curve_is_rejected():
    with pytest.raises(MapInvalid):
        validate_map(published_map(), h=3, trials=10, primes=1)


def test_program_matches_plain_evaluation():
    smap = published_map()
    rng = random.Random(0)
    p = 1000003
    for _ in range(20):
        v = [rng.randrange(p) for _ in range(4)]
        assert tuple(iterate_step(_program_mod(smap, p), tuple(v), p)) == smap.evaluate_mod(v, p)


def test_corrupted_sample_detected():
    curve, pairs = h2_pairs()
    bad = list(pairs)
    s = bad[7]
    img = list(s.image.coords)
    img[3] = img[3] + 1
    bad[7] = SamplePair(s.source, KummerPoint(tuple(img)))
    with pytest.raises((DegenerateSamples, MapInvalid)):
        smap = solve_map(build_linear_system(bad, 5), 2)
        validate_map(smap, trials=20, primes=2)


def test_h2_pack_map_has_rational_integer_coefficients(maps):
    smap = maps[2]
    assert smap.validated and smap.degree == 5
    assert smap.content() == 1
    assert all(isinstance(c, int) for row in smap.coefficients for c in row)
    assert [len(smap.terms(i)) for i in range(4)] == [9, 9, 9, 11]


def test_synthesized_maps_agree_with_jacobian(maps):
    # every pack map reproduces [sqrt 5] at a prime the validator did not use
    p = 1000151
    assert p % 5 == 1
    for h, smap in maps.items():
        curve = Curve(h, PrimeField(p))
        rng = random.Random(h)
        for _ in range(10):
            D = random_divisor(curve, rng)
            src = [int(c) for c in kappa(curve, D)]
            want = [int(c) for c in kappa(curve, sqrt5_on_jacobian(curve, D))]
            assert projectively_equal(smap.evaluate_mod(src, p), want, p)


@pytest.mark.property
def test_synthesis_is_deterministic(packs):
    smap = synthesize(2, -1, 1)
    assert formats.dump_map(smap) == packs[2].map_path.read_text()


def test_synthesis_differs_from_published_forms_by_quartic_multiples(maps):
    # phi_i - phi'_i must be (Kummer quartic) * (linear form)
    import sympy
    from kummerprime.kummer import kummer_quartic

    xs = sympy.symbols("x0:4")
    K = sympy.Poly(sum(c * sympy.prod(x ** k for x, k in zip(xs, e))
                       for e, c in kummer_quartic(Curve(2)).monomials.items()), *xs)
    ours, ref = maps[2], published_map()
    same = []
    for i in range(4):
        diff = sum((c * sympy.prod(x ** k for x, k in zip(xs, e))
                    for e, c in ours.terms(i).items()), sympy.Integer(0))
        diff -= sum((c * sympy.prod(x ** k for x, k in zip(xs, e))
                     for e, c in ref.terms(i).items()), sympy.Integer(0))
        q, r = sympy.div(sympy.Poly(diff, *xs), K)
        assert r.is_zero
        assert q.is_zero or q.total_degree() == 1
        same.append(q.is_zero)
    assert same == [True, False, True, False]


def test_program_multiplication_budget(maps):
    for smap in maps.values():
        instr, rows, _ = _program_mod(smap, 1000003)
        assert len(instr) <= 60
        # every output term reads a built slot
        assert all(0 <= s < 4 + len(instr) for row in rows for s, _ in row)
