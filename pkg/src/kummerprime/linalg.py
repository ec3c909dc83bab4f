"""Exact kernels of integer matrices.

Two routes to the same answer, the reduced-row-echelon kernel basis over Q:

* :func:`bareiss_kernel` does fraction-free elimination on big integers.  It
  is exact and simple, but slow on tall systems with long entries.
* :func:`modular_kernel` computes the RREF modulo a run of word-size primes,
  combines the residues by CRT and recovers rationals by rational
  reconstruction.  The reconstructed basis is checked against the integer
  matrix before it is returned, so the result is exact.

The RREF kernel basis is unique (one vector per free column, with a 1 there
and 0 at every other free column), which is what makes the two comparable.
"""

from __future__ import annotations

import logging
from functools import reduce
from math import gcd, isqrt, lcm

from sympy import prevprime

from . import kernels
from .exactfield import Rational

log = logging.getLogger(__name__)

__all__ = ["bareiss_kernel", "modular_kernel", "rational_reconstruct", "crt_combine",
           "word_primes", "integer_rows", "primitive_integer_vector", "KernelNotFound"]


class KernelNotFound(RuntimeError):
    pass


def integer_rows(rows):
    """Scale each rational row by its denominator lcm; integers pass through."""
    out = []
    for row in rows:
        den = reduce(lcm, (int(Rational(x).denominator) for x in row if x), 1)
        if den == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(Rational(x) * den) for x in row])
    return out


def primitive_integer_vector(vec) -> list[int]:
    """Clear denominators and content.  The sign is left as given."""
    qs = [Rational(x) for x in vec]
    den = reduce(lcm, (int(q.denominator) for q in qs), 1)
    ints = [int(q * den) for q in qs]
    g = reduce(gcd, ints, 0)
    return [x // g for x in ints] if g else ints


def _kernel_from_rref(rref, pivots, ncols):
    """RREF kernel basis; ``rref`` rows are rational and already normalized."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Rational(0)] * ncols
        v[f] = Rational(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rref[i][f]
        basis.append(v)
    return basis


def bareiss_kernel(rows, ncols: int):
    """Kernel of an integer (or rational) matrix by fraction-free elimination."""
    A = integer_rows(rows)
    A = [r for r in A if any(r)]
    nrows = len(A)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        p = A[r][c]
        for i in range(r + 1, nrows):
            a = A[i][c]
            Ai = A[i]
            Ar = A[r]
            # one-step Bareiss update: exact division by the previous pivot
            A[i] = [(p * Ai[j] - a * Ar[j]) // prev if j > c else 0 for j in range(ncols)]
        prev = p
        pivots.append(c)
        r += 1
    # back substitution over Q to reach RREF
    R = [[Rational(x) for x in A[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        inv = 1 / R[i][c]
        R[i] = [x * inv for x in R[i]]
        for k in range(i):
            t = R[k][c]
            if t:
                R[k] = [x - t * y for x, y in zip(R[k], R[i])]
    return _kernel_from_rref(R, pivots, ncols)


def rational_reconstruct(a: int, M: int):
    """Return n/d with n = a d (mod M), |n|, d <= sqrt(M/2); None if none exists."""
    a %= M
    bound = isqrt(M // 2)
    r0, r1 = M, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    return Rational(r1, t1)


def crt_combine(x: int, M: int, r: int, p: int) -> int:
    """The residue mod M*p agreeing with x mod M and r mod p."""
    return x + M * ((r - x) * pow(M, -1, p) % p)


def word_primes(start: int = 2**31 - 1):
    """Primes below 2**31, descending, deterministic."""
    p = start + 1
    while True:
        p = prevprime(p)
        yield p


def _better(piv_a, piv_b):
    # unlucky primes lose rank or push pivots right
    if len(piv_a) != len(piv_b):
        return len(piv_a) > len(piv_b)
    return piv_a < piv_b


def _check_kernel(rows, basis) -> bool:
    for v in basis:
        iv = primitive_integer_vector(v)
        nz = [(j, x) for j, x in enumerate(iv) if x]
        for row in rows:
            if sum(row[j] * x for j, x in nz):
                return False
    return True


def modular_kernel(rows, ncols: int, max_primes: int = 400, min_primes: int = 2):
    """Kernel of an integer matrix via multi-modular RREF and reconstruction."""
    import numpy as np

    A = integer_rows(rows)
    A = [r for r in A if any(r)]
    if not A:
        return _kernel_from_rref([], [], ncols)
    best = None
    X = M = None
    last = None
    used = 0
    for p in word_primes():
        if used >= max_primes:
            break
        used += 1
        Ap = np.array([[x % p for x in row] for row in A], dtype=np.int64)
        R, piv = kernels.rref_mod_p(Ap, p)
        if best is not None and piv != best and not _better(piv, best):
            log.debug("prime %d unlucky, discarded", p)
            continue
        free = [c for c in range(ncols) if c not in set(piv)]
        if not free:
            return []
        res = [[int(x) for x in R[i, free]] for i in range(len(piv))]
        if best is None or piv != best:
            best, X, M = piv, res, p
            last = None
            continue
        X = [[crt_combine(x, M, r, p) for x, r in zip(xr, rr)] for xr, rr in zip(X, res)]
        M *= p
        if used < min_primes or not X or not X[0]:
            continue
        # cheap sentinel first: one entry must reconstruct to the same value twice
        probe = rational_reconstruct(X[-1][-1], M)
        if probe is None or probe != last:
            last = probe
            continue
        cand = []
        for xr in X:
            row = [rational_reconstruct(x, M) for x in xr]
            if any(q is None for q in row):
                cand = None
                break
            cand.append(row)
        if cand is None:
            continue
        R_full = []
        for i, pc in enumerate(best):
            r = [Rational(0)] * ncols
            r[pc] = Rational(1)
            for f, q in zip(free, cand[i]):
                r[f] = q
            R_full.append(r)
        basis = _kernel_from_rref(R_full, best, ncols)
        if _check_kernel(A, basis):
            log.info("modular kernel: dim %d after %d primes", len(basis), used)
            return basis
    raise KernelNotFound("rational reconstruction did not stabilise")
