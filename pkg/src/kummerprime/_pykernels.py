"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; selected by
:mod:`kummerprime.kernels` when the extension is missing or disabled.

Small-field divisors are 5-tuples ``(deg, u1, u0, v1, v0)`` of ints mod p:
``u = X^2 + u1 X + u0`` (deg 2), ``u = X + u0`` (deg 1, u1 = v1 = 0),
identity ``(0, 0, 0, 0, 0)``.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

BACKEND = "python"
IDENTITY = (0, 0, 0, 0, 0)


# --- Kummer iteration mod a big integer ------------------------------------

def iterate_step(program, v, lam):
    """One application of the map: shared monomial products, then dot products."""
    instr, rows, nslots = program
    lam = mpz(lam)
    s = [mpz(x) for x in v] + [None] * (nslots - 4)
    for t, a, b in instr:
        s[t] = s[a] * s[b] % lam
    return tuple(int(sum(c * s[j] for j, c in row) % lam) for row in rows)


def iterate_until_identity(program, start, lam, max_steps):
    """Iterate from ``start`` until the first three coordinates vanish mod lam.

    Returns ``(r, v_prev, v_r)``; ``r`` is 0 when ``max_steps`` iterations did
    not reach the identity pattern (then ``v_r`` is the last vector computed).
    """
    instr, rows, nslots = program
    lam = mpz(lam)
    rows = [[(j, mpz(c)) for j, c in row] for row in rows]
    v = [mpz(x) % lam for x in start]
    prev = v
    s = [None] * nslots
    for r in range(1, max_steps + 1):
        prev = v
        s[0], s[1], s[2], s[3] = v
        for t, a, b in instr:
            s[t] = s[a] * s[b] % lam
        v = [sum(c * s[j] for j, c in row) % lam for row in rows]
        if not v[0] and not v[1] and not v[2]:
            return r, tuple(int(x) for x in prev), tuple(int(x) for x in v)
    return 0, tuple(int(x) for x in prev), tuple(int(x) for x in v)


# --- linear algebra mod a word-size prime ----------------------------------

def rref_mod_p(matrix, p):
    """Reduced row echelon form mod p (p < 2**31).

    Returns ``(rref, pivots)`` where ``rref`` holds only the nonzero rows.
    """
    M = np.array(matrix, dtype=np.int64) % p
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        inv = pow(int(M[r, c]), -1, p)
        M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            M[rows] = (M[rows] - (col[rows, None] * M[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return M[:r].copy(), pivots


# --- Jacobian arithmetic over small prime fields ---------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, x in enumerate(b):
        r[i] = (r[i] + x) % p
    return _trim(r)


def _psub(a, b, p):
    return _padd(a, [(-x) % p for x in b], p)


def _pmul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return _trim([x % p for x in r])


def _pdivmod(a, b, p):
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for d in range(len(r) - 1 - db, -1, -1):
        c = r[d + db] * inv % p
        q[d] = c
        if c:
            for i in range(db + 1):
                r[d + i] = (r[d + i] - c * b[i]) % p
    return _trim(q), _trim(r[:db])


def _pxgcd(a, b, p):
    r0, r1 = a, b
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return ([x * inv % p for x in r0], _trim([x * inv % p for x in s0]),
            _trim([x * inv % p for x in t0]))


def _unpack(D):
    deg, u1, u0, v1, v0 = D
    if deg == 0:
        return [1], []
    if deg == 1:
        return [u0, 1], _trim([v0])
    return [u0, u1, 1], _trim([v0, v1])


def _pack(u, v):
    deg = len(u) - 1
    v = v + [0] * (2 - len(v))
    if deg == 0:
        return IDENTITY
    if deg == 1:
        return (1, 0, u[0], 0, v[0])
    return (2, u[1], u[0], v[1], v[0])


def jac_add(p, h, D1, D2):
    if D1[0] == 0:
        return D2
    if D2[0] == 0:
        return D1
    f = [h % p, 0, 0, 0, 0, 1]
    u1, v1 = _unpack(D1)
    u2, v2 = _unpack(D2)
    d1, e1, e2 = _pxgcd(u1, u2, p)
    if len(d1) == 1:
        u = _pmul(u1, u2, p)
        w = _padd(_pmul(_pmul(e1, u1, p), v2, p), _pmul(_pmul(e2, u2, p), v1, p), p)
        _, v = _pdivmod(w, u, p)
    else:
        d, c1, c2 = _pxgcd(d1, _padd(v1, v2, p), p)
        u, _ = _pdivmod(_pmul(u1, u2, p), _pmul(d, d, p), p)
        if len(u) == 1:
            return IDENTITY
        w = _padd(_padd(_pmul(_pmul(_pmul(c1, e1, p), u1, p), v2, p),
                        _pmul(_pmul(_pmul(c1, e2, p), u2, p), v1, p), p),
                  _pmul(c2, _padd(_pmul(v1, v2, p), f, p), p), p)
        w, _ = _pdivmod(w, d, p)
        _, v = _pdivmod(w, u, p)
    while len(u) > 3:
        u, _ = _pdivmod(_psub(f, _pmul(v, v, p), p), u, p)
        _, v = _pdivmod([(-x) % p for x in v], u, p)
    inv = pow(u[-1], -1, p)
    u = [x * inv % p for x in u]
    _, v = _pdivmod(v, u, p)
    return _pack(u, v)


def jac_neg(p, D):
    deg, u1, u0, v1, v0 = D
    return (deg, u1, u0, (-v1) % p, (-v0) % p)


def jac_mul(p, h, D, k):
    if k < 0:
        D, k = jac_neg(p, D), -k
    result = IDENTITY
    for bit in bin(k)[2:]:
        result = jac_add(p, h, result, result)
        if bit == "1":
            result = jac_add(p, h, result, D)
    return result


def _square_roots(p):
    roots = defaultdict(list)
    for x in range(p):
        roots[x * x % p].append(x)
    return roots


def _f_mod_u(u1, u0, h, p):
    # X^k = a X + b mod X^2 + u1 X + u0, starting from X^1
    a, b = 1, 0
    for _ in range(4):
        a, b = (b - a * u1) % p, (-a * u0) % p
    return a, (b + h) % p


def jac_enumerate(p, h):
    """Every element of J(F_p), reduced Mumford form, in a fixed order."""
    h %= p
    roots = _square_roots(p)
    out = [IDENTITY]
    for x in range(p):
        for y in roots.get((pow(x, 5, p) + h) % p, ()):
            out.append((1, 0, (-x) % p, 0, y))
    for u1 in range(p):
        for u0 in range(p):
            r1, r0 = _f_mod_u(u1, u0, h, p)
            sols = set()
            if r1 == 0:
                for v0 in roots.get(r0, ()):
                    sols.add((0, v0))
            # v1 != 0: t = v1^2 solves A t^2 + B t + C = 0
            A = (u1 * u1 - 4 * u0) % p
            B = (2 * u1 * r1 - 4 * r0) % p
            C = r1 * r1 % p
            if A:
                inv2a = pow(2 * A, -1, p)
                ts = {(-B + s) * inv2a % p for s in roots.get((B * B - 4 * A * C) % p, ())}
            elif B:
                ts = {(-C) * pow(B, -1, p) % p}
            elif C:
                ts = set()
            else:
                ts = set(range(1, p))
            for t in ts:
                for v1 in roots.get(t, ()) if t else ():
                    v0 = (r1 + u1 * t) * pow(2 * v1, -1, p) % p
                    if (v0 * v0 - u0 * t - r0) % p == 0:
                        sols.add((v1, v0))
            for v1, v0 in sorted(sols):
                out.append((2, u1, u0, v1, v0))
    return out


def count_seeds_killed(p, k):
    """Number of (a, b) in F_p^2, b^2 != a^5, with k * [(a, b) - inf] = 0 on y^2 = x^5 + b^2 - a^5."""
    count = 0
    for a in range(p):
        a5 = pow(a, 5, p)
        for b in range(p):
            h = (b * b - a5) % p
            if h == 0:
                continue
            if jac_mul(p, h, (1, 0, (-a) % p, 0, b), k)[0] == 0:
                count += 1
    return count
