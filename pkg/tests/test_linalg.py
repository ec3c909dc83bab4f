import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummerprime import linalg


def rank_deficient(rng, nrows, ncols, rank, size):
    base = [[rng.randint(-size, size) for _ in range(ncols)] for _ in range(rank)]
    rows = []
    for _ in range(nrows):
        coeffs = [rng.randint(-3, 3) for _ in range(rank)]
        rows.append([sum(c * b[j] for c, b in zip(coeffs, base)) for j in range(ncols)])
    return rows


def normalized(basis):
    return sorted(tuple(linalg.primitive_integer_vector(v)) for v in basis)


@pytest.mark.parametrize("seed", range(20))
def test_bareiss_and_modular_agree(seed):
    rng = random.Random(seed)
    ncols = rng.randint(3, 14)
    rank = rng.randint(1, ncols)
    rows = rank_deficient(rng, rng.randint(rank, ncols + 4), ncols, rank, 10 ** rng.randint(1, 30))
    a = linalg.bareiss_kernel(rows, ncols)
    b = linalg.modular_kernel(rows, ncols)
    assert normalized(a) == normalized(b)
    for v in a:
        for row in rows:
            assert sum(x * y for x, y in zip(row, v)) == 0


def test_full_rank_has_trivial_kernel():
    rows = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    assert linalg.modular_kernel(rows, 3) == []
    assert linalg.bareiss_kernel(rows, 3) == []


def test_zero_matrix_kernel_is_everything():
    assert len(linalg.modular_kernel([[0, 0, 0]], 3)) == 3


def test_rational_entries_are_scaled():
    rows = [[Fraction(1, 2), Fraction(1, 3), 1]]
    basis = linalg.modular_kernel(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(Fraction(x) * Fraction(y) for x, y in zip(rows[0], v)) == 0


@settings(max_examples=200)
@given(st.integers(-1000, 1000), st.integers(1, 1000))
def test_rational_reconstruction(n, d):
    M = (2 ** 61 - 1) * (2 ** 31 - 1)
    a = n * pow(d, -1, M) % M
    q = linalg.rational_reconstruct(a, M)
    assert q == Fraction(n, d)


def test_crt_combine():
    x = linalg.crt_combine(3, 7, 5, 11)
    assert x % 7 == 3 and x % 11 == 5


def test_word_primes_descend():
    gen = linalg.word_primes()
    ps = [next(gen) for _ in range(3)]
    assert ps[0] == 2 ** 31 - 1 and ps[0] > ps[1] > ps[2]


def test_primitive_integer_vector():
    assert list(linalg.primitive_integer_vector([Fraction(1, 2), Fraction(-1, 3), 0])) == [3, -2, 0]
