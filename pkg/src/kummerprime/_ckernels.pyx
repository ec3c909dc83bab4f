# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels (same API as ``_pykernels``).

* Kummer iteration mod lambda on GMP integers, driven by the straight-line
  program from ``sqrt5synth.compile_program``.
* Row reduction mod a prime below 2**31 on int64.
* Cantor arithmetic on J(F_p) for p < 2**31 with fixed-size coefficient
  buffers; enumeration of J(F_p) and the seed sweep run entirely in C.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"
IDENTITY = (0, 0, 0, 0, 0)


# --- GMP ----------------------------------------------------------------------

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        int _mp_alloc
        int _mp_size
        void *_mp_d
    ctypedef __mpz_struct *mpz_ptr
    ctypedef const __mpz_struct *mpz_srcptr
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)
    void mpz_set(mpz_ptr, mpz_srcptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    void mpz_mul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_addmul(mpz_ptr, mpz_srcptr, mpz_srcptr)
    void mpz_mod(mpz_ptr, mpz_srcptr, mpz_srcptr)
    int mpz_sgn(mpz_srcptr)


cdef int _set_pyint(mpz_ptr z, object x) except -1:
    cdef bytes s = format(x, "x").encode()
    if mpz_set_str(z, s, 16) != 0:
        raise ValueError("cannot convert %r" % (x,))
    return 0


cdef object _get_pyint(mpz_srcptr z):
    cdef size_t n = mpz_sizeinbase(z, 16) + 2
    cdef char *buf = <char *>malloc(n)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf.decode(), 16)
    finally:
        free(buf)


cdef class _Program:
    """Compiled form of (instructions, sparse rows, slot count) mod lambda."""

    cdef int ninstr, nslots, nterms
    cdef int *ins
    cdef int row_start[5]
    cdef int *term_slot
    cdef __mpz_struct *coef
    cdef __mpz_struct *slots
    cdef __mpz_struct vals[4]
    cdef __mpz_struct prev[4]
    cdef __mpz_struct lam

    def __cinit__(self, program, lam):
        instr, rows, nslots = program
        cdef int i, k
        self.ninstr = len(instr)
        self.nslots = nslots
        self.nterms = sum(len(r) for r in rows)
        self.ins = <int *>malloc(max(1, 3 * self.ninstr) * sizeof(int))
        self.term_slot = <int *>malloc(max(1, self.nterms) * sizeof(int))
        self.coef = <__mpz_struct *>malloc(max(1, self.nterms) * sizeof(__mpz_struct))
        self.slots = <__mpz_struct *>malloc(max(4, nslots) * sizeof(__mpz_struct))
        if not (self.ins and self.term_slot and self.coef and self.slots):
            raise MemoryError()
        mpz_init(&self.lam)
        _set_pyint(&self.lam, lam)
        for i in range(4):
            mpz_init(&self.vals[i])
            mpz_init(&self.prev[i])
        for i in range(max(4, nslots)):
            mpz_init(&self.slots[i])
        for i in range(self.nterms):
            mpz_init(&self.coef[i])
        for i, (t, a, b) in enumerate(instr):
            self.ins[3 * i] = t
            self.ins[3 * i + 1] = a
            self.ins[3 * i + 2] = b
        k = 0
        for i, row in enumerate(rows):
            self.row_start[i] = k
            for j, c in row:
                self.term_slot[k] = j
                _set_pyint(&self.coef[k], c % lam)
                k += 1
        self.row_start[4] = k

    def __dealloc__(self):
        cdef int i
        if self.slots != NULL:
            for i in range(max(4, self.nslots)):
                mpz_clear(&self.slots[i])
            free(self.slots)
        if self.coef != NULL:
            for i in range(self.nterms):
                mpz_clear(&self.coef[i])
            free(self.coef)
        free(self.ins)
        free(self.term_slot)
        for i in range(4):
            mpz_clear(&self.vals[i])
            mpz_clear(&self.prev[i])
        mpz_clear(&self.lam)

    cdef void _step(self) noexcept:
        cdef int i, k, t
        for i in range(4):
            mpz_set(&self.slots[i], &self.vals[i])
        for i in range(self.ninstr):
            t = self.ins[3 * i]
            mpz_mul(&self.slots[t], &self.slots[self.ins[3 * i + 1]], &self.slots[self.ins[3 * i + 2]])
            mpz_mod(&self.slots[t], &self.slots[t], &self.lam)
        for i in range(4):
            mpz_set_ui(&self.vals[i], 0)
            for k in range(self.row_start[i], self.row_start[i + 1]):
                mpz_addmul(&self.vals[i], &self.coef[k], &self.slots[self.term_slot[k]])
            mpz_mod(&self.vals[i], &self.vals[i], &self.lam)

    def load(self, v):
        for i in range(4):
            _set_pyint(&self.vals[i], v[i] % _get_pyint(&self.lam))

    def current(self):
        return tuple(_get_pyint(&self.vals[i]) for i in range(4))

    def previous(self):
        return tuple(_get_pyint(&self.prev[i]) for i in range(4))

    def step(self):
        self._step()

    def run(self, long max_steps):
        cdef long r
        cdef int i
        for r in range(1, max_steps + 1):
            for i in range(4):
                mpz_set(&self.prev[i], &self.vals[i])
            self._step()
            if mpz_sgn(&self.vals[0]) == 0 and mpz_sgn(&self.vals[1]) == 0 and mpz_sgn(&self.vals[2]) == 0:
                return r
        return 0


def iterate_step(program, v, lam):
    prog = _Program(program, lam)
    prog.load(v)
    prog.step()
    return prog.current()


def iterate_until_identity(program, start, lam, max_steps):
    prog = _Program(program, lam)
    prog.load(start)
    r = prog.run(max_steps)
    if max_steps == 0:
        return 0, tuple(x % lam for x in start), tuple(x % lam for x in start)
    return r, prog.previous(), prog.current()


# --- row reduction mod p --------------------------------------------------------

cdef int64_t _inv(int64_t a, int64_t p) noexcept nogil:
    cdef int64_t t = 0, nt = 1, r = p, nr = a % p, q, tmp
    if nr < 0:
        nr += p
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_mod_p(matrix, p):
    cdef cnp.ndarray[int64_t, ndim=2] A = np.array(matrix, dtype=np.int64) % p
    cdef int64_t[:, ::1] M = np.ascontiguousarray(A)
    cdef Py_ssize_t nrows = M.shape[0], ncols = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef int64_t P = p, inv, f, x
    pivots = []
    with nogil:
        for c in range(ncols):
            if r == nrows:
                break
            k = -1
            for i in range(r, nrows):
                if M[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(ncols):
                    x = M[r, j]
                    M[r, j] = M[k, j]
                    M[k, j] = x
            inv = _inv(M[r, c], P)
            for j in range(c, ncols):
                M[r, j] = M[r, j] * inv % P
            for i in range(nrows):
                if i == r:
                    continue
                f = M[i, c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    if M[r, j]:
                        x = (M[i, j] - f * M[r, j]) % P
                        M[i, j] = x + P if x < 0 else x
            with gil:
                pivots.append(c)
            r += 1
    return np.asarray(M)[:r].copy(), pivots


# --- Jacobian arithmetic over F_p -------------------------------------------------

cdef enum:
    MAXC = 16

ctypedef struct Poly:
    int64_t c[MAXC]
    int d


cdef inline int64_t md(int64_t a, int64_t p) noexcept nogil:
    a %= p
    return a + p if a < 0 else a


cdef inline void pnorm(Poly *a) noexcept nogil:
    while a.d >= 0 and a.c[a.d] == 0:
        a.d -= 1


cdef inline void pset(Poly *a, int d) noexcept nogil:
    cdef int i
    a.d = d
    for i in range(MAXC):
        a.c[i] = 0


cdef inline void pcopy(Poly *dst, const Poly *src) noexcept nogil:
    memcpy(dst, src, sizeof(Poly))


cdef void padd(Poly *r, const Poly *a, const Poly *b, int64_t p) noexcept nogil:
    cdef Poly t
    cdef int i, d = a.d if a.d > b.d else b.d
    pset(&t, d)
    for i in range(d + 1):
        t.c[i] = md((a.c[i] if i <= a.d else 0) + (b.c[i] if i <= b.d else 0), p)
    pnorm(&t)
    pcopy(r, &t)


cdef void pneg(Poly *r, const Poly *a, int64_t p) noexcept nogil:
    cdef Poly t
    cdef int i
    pset(&t, a.d)
    for i in range(a.d + 1):
        t.c[i] = md(-a.c[i], p)
    pcopy(r, &t)


cdef void psub(Poly *r, const Poly *a, const Poly *b, int64_t p) noexcept nogil:
    cdef Poly nb
    pneg(&nb, b, p)
    padd(r, a, &nb, p)


cdef void pmul(Poly *r, const Poly *a, const Poly *b, int64_t p) noexcept nogil:
    cdef Poly t
    cdef int i, j
    if a.d < 0 or b.d < 0:
        pset(r, -1)
        return
    pset(&t, a.d + b.d)
    for i in range(a.d + 1):
        if a.c[i]:
            for j in range(b.d + 1):
                t.c[i + j] = (t.c[i + j] + a.c[i] * b.c[j]) % p
    pnorm(&t)
    pcopy(r, &t)


cdef void pdivmod(Poly *q, Poly *r, const Poly *a, const Poly *b, int64_t p) noexcept nogil:
    cdef Poly qq, rr
    cdef int d, i
    cdef int64_t inv, c
    pcopy(&rr, a)
    pset(&qq, -1)
    if rr.d >= b.d:
        qq.d = rr.d - b.d
        inv = _inv(b.c[b.d], p)
        d = rr.d - b.d
        while d >= 0:
            c = rr.c[d + b.d] * inv % p
            qq.c[d] = c
            if c:
                for i in range(b.d + 1):
                    rr.c[d + i] = md(rr.c[d + i] - c * b.c[i], p)
            d -= 1
        rr.d = b.d - 1
        pnorm(&rr)
        pnorm(&qq)
    if q != NULL:
        pcopy(q, &qq)
    if r != NULL:
        pcopy(r, &rr)


cdef void pscale(Poly *r, const Poly *a, int64_t c, int64_t p) noexcept nogil:
    cdef int i
    cdef Poly t
    pcopy(&t, a)
    for i in range(t.d + 1):
        t.c[i] = t.c[i] * c % p
    pnorm(&t)
    pcopy(r, &t)


cdef void pxgcd(Poly *g, Poly *s, Poly *t, const Poly *a, const Poly *b, int64_t p) noexcept nogil:
    cdef Poly r0, r1, s0, s1, t0, t1, q, rem, tmp
    cdef int64_t inv
    pcopy(&r0, a)
    pcopy(&r1, b)
    pset(&s0, 0)
    s0.c[0] = 1
    pset(&s1, -1)
    pset(&t0, -1)
    pset(&t1, 0)
    t1.c[0] = 1
    while r1.d >= 0:
        pdivmod(&q, &rem, &r0, &r1, p)
        pcopy(&r0, &r1)
        pcopy(&r1, &rem)
        pmul(&tmp, &q, &s1, p)
        psub(&tmp, &s0, &tmp, p)
        pcopy(&s0, &s1)
        pcopy(&s1, &tmp)
        pmul(&tmp, &q, &t1, p)
        psub(&tmp, &t0, &tmp, p)
        pcopy(&t0, &t1)
        pcopy(&t1, &tmp)
    inv = _inv(r0.c[r0.d], p)
    pscale(g, &r0, inv, p)
    pscale(s, &s0, inv, p)
    pscale(t, &t0, inv, p)


cdef inline void unpack(const int64_t *D, Poly *u, Poly *v) noexcept nogil:
    pset(u, D[0])
    pset(v, -1)
    if D[0] == 0:
        u.c[0] = 1
    elif D[0] == 1:
        u.c[0] = D[2]
        u.c[1] = 1
        v.d = 0
        v.c[0] = D[4]
    else:
        u.c[0] = D[2]
        u.c[1] = D[1]
        u.c[2] = 1
        v.d = 1
        v.c[0] = D[4]
        v.c[1] = D[3]
    pnorm(v)


cdef inline void pack(int64_t *out, const Poly *u, const Poly *v) noexcept nogil:
    out[0] = u.d
    out[1] = 0
    out[2] = 0
    out[3] = 0
    out[4] = 0
    if u.d == 1:
        out[2] = u.c[0]
        out[4] = v.c[0] if v.d >= 0 else 0
    elif u.d == 2:
        out[1] = u.c[1]
        out[2] = u.c[0]
        out[3] = v.c[1] if v.d >= 1 else 0
        out[4] = v.c[0] if v.d >= 0 else 0


cdef void cadd(int64_t p, const Poly *f, const int64_t *D1, const int64_t *D2, int64_t *out) noexcept nogil:
    cdef Poly u1, v1, u2, v2, d1, e1, e2, d, c1, c2, u, v, w, x, y
    cdef int i
    cdef int64_t inv
    if D1[0] == 0:
        for i in range(5):
            out[i] = D2[i]
        return
    if D2[0] == 0:
        for i in range(5):
            out[i] = D1[i]
        return
    unpack(D1, &u1, &v1)
    unpack(D2, &u2, &v2)
    pxgcd(&d1, &e1, &e2, &u1, &u2, p)
    if d1.d == 0:
        pmul(&u, &u1, &u2, p)
        pmul(&x, &e1, &u1, p)
        pmul(&x, &x, &v2, p)
        pmul(&y, &e2, &u2, p)
        pmul(&y, &y, &v1, p)
        padd(&w, &x, &y, p)
        pdivmod(NULL, &v, &w, &u, p)
    else:
        padd(&x, &v1, &v2, p)
        pxgcd(&d, &c1, &c2, &d1, &x, p)
        pmul(&x, &u1, &u2, p)
        pmul(&y, &d, &d, p)
        pdivmod(&u, NULL, &x, &y, p)
        if u.d == 0:
            for i in range(5):
                out[i] = 0
            return
        pmul(&x, &c1, &e1, p)
        pmul(&x, &x, &u1, p)
        pmul(&x, &x, &v2, p)
        pmul(&y, &c1, &e2, p)
        pmul(&y, &y, &u2, p)
        pmul(&y, &y, &v1, p)
        padd(&w, &x, &y, p)
        pmul(&x, &v1, &v2, p)
        padd(&x, &x, f, p)
        pmul(&x, &c2, &x, p)
        padd(&w, &w, &x, p)
        pdivmod(&w, NULL, &w, &d, p)
        pdivmod(NULL, &v, &w, &u, p)
    while u.d > 2:
        pmul(&x, &v, &v, p)
        psub(&x, f, &x, p)
        pdivmod(&u, NULL, &x, &u, p)
        pneg(&x, &v, p)
        pdivmod(NULL, &v, &x, &u, p)
    inv = _inv(u.c[u.d], p)
    pscale(&u, &u, inv, p)
    pdivmod(NULL, &v, &v, &u, p)
    pack(out, &u, &v)


cdef inline void make_f(Poly *f, int64_t h, int64_t p) noexcept nogil:
    pset(f, 5)
    f.c[0] = md(h, p)
    f.c[5] = 1


cdef void cmul(int64_t p, const Poly *f, const int64_t *D, uint64_t k, int64_t *out) noexcept nogil:
    cdef int64_t acc[5]
    cdef int64_t tmp[5]
    cdef int i, bit
    for i in range(5):
        acc[i] = 0
    if k == 0:
        for i in range(5):
            out[i] = 0
        return
    bit = 63
    while not (k >> bit) & 1:
        bit -= 1
    while bit >= 0:
        cadd(p, f, acc, acc, tmp)
        if (k >> bit) & 1:
            cadd(p, f, tmp, D, acc)
        else:
            for i in range(5):
                acc[i] = tmp[i]
        bit -= 1
    for i in range(5):
        out[i] = acc[i]


cdef inline void _load(object D, int64_t *out, int64_t p):
    cdef int i
    for i in range(5):
        out[i] = D[i] % p if i else D[0]


cdef inline tuple _tuple(const int64_t *D):
    return (int(D[0]), int(D[1]), int(D[2]), int(D[3]), int(D[4]))


def jac_add(p, h, D1, D2):
    cdef int64_t a[5]
    cdef int64_t b[5]
    cdef int64_t out[5]
    cdef Poly f
    make_f(&f, h % p, p)
    _load(D1, a, p)
    _load(D2, b, p)
    cadd(p, &f, a, b, out)
    return _tuple(out)


def jac_neg(p, D):
    deg, u1, u0, v1, v0 = D
    return (deg, u1, u0, (-v1) % p, (-v0) % p)


def jac_mul(p, h, D, k):
    cdef int64_t a[5]
    cdef int64_t out[5]
    cdef int64_t tmp[5]
    cdef Poly f
    if k < 0:
        D, k = jac_neg(p, D), -k
    make_f(&f, h % p, p)
    _load(D, a, p)
    if k < (1 << 63):
        cmul(p, &f, a, k, out)
        return _tuple(out)
    for i in range(5):
        out[i] = 0
    for ch in bin(k)[2:]:
        cadd(p, &f, out, out, tmp)
        if ch == "1":
            cadd(p, &f, tmp, a, out)
        else:
            memcpy(out, tmp, 5 * sizeof(int64_t))
    return _tuple(out)


cdef void f_mod_u(int64_t u1, int64_t u0, int64_t h, int64_t p, int64_t *r1, int64_t *r0) noexcept nogil:
    cdef int64_t a = 1, b = 0, na, nb
    cdef int i
    for i in range(4):
        na = md(b - a * u1, p)
        nb = md(-a * u0, p)
        a = na
        b = nb
    r1[0] = a
    r0[0] = md(b + h, p)


def jac_enumerate(p, h):
    cdef int64_t P = p, H = h % p
    cdef int64_t *rt = <int64_t *>malloc(P * sizeof(int64_t))
    cdef int64_t x, y, u1, u0, r1, r0, A, B, C, disc, s, t, v1, v0, sgn
    cdef int64_t ts[2]
    cdef int64_t sol[16]
    cdef int nts, nsol, i, j, k
    cdef int64_t inv2a
    if rt == NULL:
        raise MemoryError()
    out = [IDENTITY]
    try:
        for x in range(P):
            rt[x] = -1
        for x in range(P):
            y = x * x % P
            if rt[y] < 0:
                rt[y] = x
        for x in range(P):
            y = md(x * x % P * x % P * x % P * x % P + H, P)
            if rt[y] >= 0:
                s = rt[y]
                out.append((1, 0, int(md(-x, P)), 0, int(s)))
                if s:
                    out.append((1, 0, int(md(-x, P)), 0, int(P - s)))
        for u1 in range(P):
            for u0 in range(P):
                f_mod_u(u1, u0, H, P, &r1, &r0)
                nsol = 0
                if r1 == 0 and rt[r0] >= 0:
                    s = rt[r0]
                    sol[0] = 0
                    sol[1] = s
                    nsol = 1
                    if s:
                        sol[2] = 0
                        sol[3] = P - s
                        nsol = 2
                A = md(u1 * u1 - 4 * u0, P)
                B = md(2 * u1 % P * r1 - 4 * r0, P)
                C = r1 * r1 % P
                nts = 0
                if A:
                    disc = md(B * B % P - 4 * A % P * C, P)
                    if rt[disc] >= 0:
                        inv2a = _inv(2 * A % P, P)
                        s = rt[disc]
                        ts[0] = md(-B + s, P) * inv2a % P
                        nts = 1
                        if s:
                            ts[1] = md(-B - s, P) * inv2a % P
                            nts = 2
                elif B:
                    ts[0] = md(-C, P) * _inv(B, P) % P
                    nts = 1
                elif C == 0:
                    # f would have a double root; cannot happen for p not dividing 10h
                    raise RuntimeError("degenerate quadratic at u = (%d, %d)" % (u1, u0))
                for i in range(nts):
                    t = ts[i]
                    if t == 0 or rt[t] < 0:
                        continue
                    for sgn in range(2):
                        v1 = rt[t] if sgn == 0 else P - rt[t]
                        v0 = md(r1 + u1 * t, P) * _inv(2 * v1 % P, P) % P
                        if md(v0 * v0 % P - u0 * t % P - r0, P) != 0:
                            continue
                        k = 0
                        for j in range(nsol):
                            if sol[2 * j] == v1 and sol[2 * j + 1] == v0:
                                k = 1
                        if not k:
                            sol[2 * nsol] = v1
                            sol[2 * nsol + 1] = v0
                            nsol += 1
                # emit sorted by (v1, v0) to match the Python backend
                for i in range(nsol):
                    k = i
                    for j in range(i + 1, nsol):
                        if sol[2 * j] < sol[2 * k] or (sol[2 * j] == sol[2 * k] and sol[2 * j + 1] < sol[2 * k + 1]):
                            k = j
                    if k != i:
                        v1 = sol[2 * i]
                        v0 = sol[2 * i + 1]
                        sol[2 * i] = sol[2 * k]
                        sol[2 * i + 1] = sol[2 * k + 1]
                        sol[2 * k] = v1
                        sol[2 * k + 1] = v0
                    out.append((2, int(u1), int(u0), int(sol[2 * i]), int(sol[2 * i + 1])))
    finally:
        free(rt)
    # the Python backend lists degree-one points x by x with roots ascending
    return out


def count_seeds_killed(p, k):
    cdef int64_t P = p, a, b, h
    cdef uint64_t K = k
    cdef int64_t D[5]
    cdef int64_t out[5]
    cdef Poly f
    cdef long count = 0
    with nogil:
        for a in range(P):
            for b in range(P):
                h = md(b * b % P - a * a % P * a % P * a % P * a % P, P)
                if h == 0:
                    continue
                make_f(&f, h, P)
                D[0] = 1
                D[1] = 0
                D[2] = md(-a, P)
                D[3] = 0
                D[4] = b
                cmul(P, &f, D, K, out)
                if out[0] == 0:
                    count += 1
    return count
