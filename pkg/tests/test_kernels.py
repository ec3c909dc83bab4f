"""The compiled and pure-Python backends must agree everywhere."""

import random

import numpy as np
import pytest

from kummerprime import _pykernels as py
from kummerprime import kernels
from kummerprime.certify import _program_mod

try:
    from kummerprime import _ckernels as cx
except ImportError:  # extension not built
    cx = None

needs_c = pytest.mark.skipif(cx is None, reason="compiled extension not built")


def test_selector_reports_backend():
    info = kernels.backends()
    assert info["python"] is py
    assert kernels.BACKEND in ("python", "compiled")
    if cx is not None and kernels.BACKEND == "compiled":
        assert kernels.iterate_step is cx.iterate_step


@needs_c
@pytest.mark.parametrize("p", [11, 19, 31, 59])
def test_enumeration_agrees(p):
    for h in (1, 3):
        assert list(cx.jac_enumerate(p, h)) == list(py.jac_enumerate(p, h))


@needs_c
@pytest.mark.parametrize("p", [19, 31, 499])
def test_group_ops_agree(p):
    h = 3
    rng = random.Random(p)
    elems = list(py.jac_enumerate(p, h)) if p < 100 else list(cx.jac_enumerate(p, h))
    for _ in range(200):
        A, B = rng.choice(elems), rng.choice(elems)
        assert cx.jac_add(p, h, A, B) == py.jac_add(p, h, A, B)
        assert cx.jac_neg(p, A) == py.jac_neg(p, A)
        k = rng.randrange(1 << 70)
        assert cx.jac_mul(p, h, A, k) == py.jac_mul(p, h, A, k)


@needs_c
def test_seed_counts_agree():
    assert cx.count_seeds_killed(19, 100) == py.count_seeds_killed(19, 100)


@needs_c
def test_rref_agrees():
    rng = random.Random(1)
    p = 2 ** 31 - 1
    for _ in range(10):
        A = np.array([[rng.randrange(p) if rng.random() < 0.7 else 0 for _ in range(12)]
                      for _ in range(8)], dtype=np.int64)
        A[5] = (A[0] + 3 * A[1]) % p
        R1, p1 = cx.rref_mod_p(A.copy(), p)
        R2, p2 = py.rref_mod_p(A.copy(), p)
        assert list(p1) == list(p2)
        assert np.array_equal(np.asarray(R1), np.asarray(R2))


@needs_c
@pytest.mark.parametrize("m,n", [(1, 3), (1, 69), (1, 68), (3, 39)])
def test_iteration_agrees(maps, m, n):
    lam = 4 * m * m * 5 ** n - 1
    prog = _program_mod(maps[2], lam)
    v = (2624400 % lam, -3559904 % lam, 1744784 % lam, 4190401 % lam)
    assert tuple(cx.iterate_step(prog, v, lam)) == tuple(py.iterate_step(prog, v, lam))
    a = cx.iterate_until_identity(prog, v, lam, 2 * n)
    b = py.iterate_until_identity(prog, v, lam, 2 * n)
    assert a[0] == b[0] and tuple(a[1]) == tuple(b[1]) and tuple(a[2]) == tuple(b[2])
