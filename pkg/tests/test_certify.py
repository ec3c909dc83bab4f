import math
import random
from decimal import Decimal, getcontext

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympy import isprime

from kummerprime import kernels
from kummerprime.certify import (
    COMPOSITE, PRIME, UNKNOWN, BoundViolated, CertificationTask, InputError, _program_mod,
    certify, fifth_root, iterate_step, m_bound_holds, minimal_n, safe_threshold, sqrt5_residue,
    validate_task,
)
from kummerprime.oracle import sqrt5_small
from kummerprime.sqrt5synth import Sqrt5Map


def run(packs, h, m, n):
    smap, sv = packs[h].load(m)
    return certify(CertificationTask(m, n), smap, sv.coords, h=h)


def test_minimal_n_table():
    assert [minimal_n(m) for m in (1, 3, 7, 11)] == [2, 3, 4, 4]


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 7, 8, 11, 12, 13])
def test_m_bound_against_high_precision(m):
    getcontext().prec = 80
    for n in range(1, 12):
        S = Decimal(5) ** n
        rhs = ((S.sqrt() - 1) ** 4 + 1) / (4 * S)
        assert m_bound_holds(m, n) == (Decimal(m * m) < rhs)


@pytest.mark.parametrize("lam", [499, 12499, 312499, 4 * 9 * 5 ** 7 - 1, 4 * 5 ** 339 - 1])
def test_safe_threshold_dominates_real_bound(lam):
    T = safe_threshold(lam)
    u = math.isqrt(math.isqrt(lam))
    assert 5 ** (T - 1) <= (u + 2) ** 4 < 5 ** T
    if lam < 10 ** 300:
        assert T > 4 * math.log(lam ** 0.25 + 1, 5)


def test_safe_threshold_small_values():
    assert safe_threshold(499) == 5
    with pytest.raises(ValueError):
        safe_threshold(2)


def test_validate_task():
    task = validate_task(1, 3)
    assert isinstance(task, CertificationTask) and task.lam == 499
    v = validate_task(1, 4)
    assert v.outcome == COMPOSITE and v.factor * (v.factor + 2) == v.lam
    assert v.factors == (49, 51)
    with pytest.raises(InputError):
        validate_task(5, 3)
    with pytest.raises(InputError):
        validate_task(0, 3)
    with pytest.raises(BoundViolated):
        validate_task(3, 1)


@pytest.mark.parametrize("m,n", [(1, 3), (3, 7), (7, 39), (11, 19)])
def test_residues(m, n):
    task = validate_task(m, n)
    lam = task.lam
    assert pow(sqrt5_residue(task), 2, lam) == 5
    a = fifth_root(task, 3)
    assert pow(a, 5, lam) == (-3) % lam


@pytest.mark.property
@settings(max_examples=300)
@given(st.integers(0, 2 ** 64), st.sampled_from([(1, 3), (1, 9), (3, 7), (1, 5), (2, 5)]))
def test_scaling_invariance(maps, seed, mn):
    m, n = mn
    lam = 4 * m * m * 5 ** n - 1
    smap = maps[2]
    rng = random.Random(seed)
    v = tuple(rng.randrange(lam) for _ in range(4))
    c = rng.randrange(1, lam)
    while math.gcd(c, lam) != 1:
        c = rng.randrange(1, lam)
    w = iterate_step(v, smap, lam)
    wc = iterate_step(tuple(c * x % lam for x in v), smap, lam)
    assert wc == tuple(pow(c, smap.degree, lam) * x % lam for x in w)
    pattern = lambda u: not any(u[:3])
    assert pattern(w) == pattern(wc)
    factors = lambda u: {g for g in (math.gcd(x, lam) for x in u) if 1 < g < lam}
    assert factors(w) == factors(wc)


# oracle-first: the step count on the Kummer surface equals the brute-force
# [sqrt 5]-order of 4 m^2 Q0 in J(F_lambda)
def _oracle_order(lam, h, alpha, beta, m):
    D = kernels.jac_mul(lam, h % lam, (1, 0, (-alpha) % lam, 0, beta % lam), 4 * m * m)
    k = 0
    while D[0]:
        D = sqrt5_small(lam, h % lam, D)
        k += 1
    return k


@pytest.mark.parametrize("h,alpha,beta,m,n,r", [
    (3, 1, 2, 1, 3, 5),
    (10, -1, 3, 1, 3, 6),
    (2, -1, 1, 1, 3, 6),
    (2, -1, 1, 2, 3, 6),
    (3, 1, 2, 2, 3, 6),
    (3, 1, 2, 1, 5, None),
    (10, -1, 3, 1, 5, None),
])
def test_step_count_matches_oracle(packs, h, alpha, beta, m, n, r):
    lam = 4 * m * m * 5 ** n - 1
    v = run(packs, h, m, n)
    if not isprime(lam):
        assert v.outcome == COMPOSITE
        return
    want = _oracle_order(lam, h, alpha, beta, m)
    if r is not None:
        assert want == r
    assert v.r == want


def test_frozen_verdicts(packs):
    v = run(packs, 3, 1, 339)
    assert v.outcome == PRIME and v.threshold <= v.r <= 2 * 339
    v = run(packs, 3, 1, 11)
    assert v.outcome == COMPOSITE
    v = run(packs, 2, 3, 7)
    assert v.outcome == PRIME


def test_prime_verdicts_respect_bounds(packs):
    for n in (3, 9, 13, 15, 25, 39, 69):
        v = run(packs, 3, 1, n)
        if v.outcome == PRIME:
            assert v.threshold <= v.r <= 2 * n


def test_certify_is_deterministic(packs):
    a, b = run(packs, 10, 1, 69), run(packs, 10, 1, 69)
    assert (a.outcome, a.r, a.threshold, a.factor) == (b.outcome, b.r, b.threshold, b.factor)


def test_gcd_with_h_exposes_factor(maps):
    # lambda = 12499 = 29 * 431; a map "for h = 29" never gets to iterate
    fake = Sqrt5Map(29, 5, maps[2].coefficients)
    v = certify(CertificationTask(1, 5), fake, (0, 1, 1, 1))
    assert v.outcome == COMPOSITE and v.factor == 29


def test_identity_start_is_unknown(maps):
    v = certify(CertificationTask(1, 3), maps[2], (0, 0, 0, 1))
    assert v.outcome == UNKNOWN


def test_bad_inputs(maps):
    with pytest.raises(InputError):
        certify(CertificationTask(1, 3), maps[2], (1, 2, 3))
    with pytest.raises(InputError):
        certify((1, 3), maps[2], (0, 0, 0, 1))
    with pytest.raises(InputError):
        certify(CertificationTask(1, 3), maps[2], (0, 1, 1, 1), h=3)


def test_program_reduction_mod_lambda(maps):
    instr, rows, nslots = _program_mod(maps[2], 499)
    assert all(0 <= c < 499 for row in rows for _, c in row)
    assert nslots >= 5


@pytest.mark.parametrize("h", [3, 10, 2, 48, -31])
def test_never_wrong_beyond_battery(packs, h):
    # every pack, every stored m, odd n < 60: no verdict contradicts a primality test
    pack = packs[h]
    for m in (1, 2, 3, 4, 6, 7, 8, 11):
        if not pack.has(m):
            continue
        smap, sv = pack.load(m)
        for n in range(1, 60, 2):
            try:
                task = validate_task(m, n)
            except BoundViolated:
                continue
            v = certify(task, smap, sv.coords, h=h)
            truth = isprime(task.lam)
            assert not (v.outcome == PRIME and not truth)
            assert not (v.outcome == COMPOSITE and truth)
