"""Divisor-class arithmetic on the Jacobian of y^2 = x^5 + h.

Divisor classes are kept in reduced Mumford form <u(X), v(X)>: u monic of
degree <= 2, deg v < deg u and u | f - v^2 with f = X^5 + h.  Polynomials are
tuples of field elements, constant term first.  The group law is Cantor's
composition followed by reduction, so every degenerate case (shared
x-coordinates, Weierstrass points, degree-0/1 inputs) goes through the same
gcd-based path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .exactfield import FieldContext, PrimeField, QuadraticExtension, RationalField

__all__ = [
    "Curve", "MumfordDivisor", "CyclotomicIntegerEndo", "SQRT5_ENDO",
    "InvalidPoint", "CurveMismatch", "NoZetaInField",
    "embed_point", "cantor_add", "negate", "zeta_action", "apply_endo",
    "scalar_mul", "sqrt5_on_jacobian", "is_valid", "random_point", "random_divisor",
]


class InvalidPoint(ValueError):
    pass


class CurveMismatch(ValueError):
    pass


class NoZetaInField(ValueError):
    pass


# --- polynomial helpers (tuples, constant term first) ----------------------

def _trim(a: list) -> tuple:
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, x in enumerate(b):
        r[i] = r[i] + x
    return _trim(r)


def _pneg(a):
    return tuple(-x for x in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return ()
    r = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t = x * y
            r[i + j] = t if r[i + j] is None else r[i + j] + t
    return _trim(r)


def _pscale(a, c):
    return _trim([x * c for x in a])


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return (), tuple(r)
    inv = 1 / b[-1]
    q = [None] * (len(r) - db)
    for d in range(len(r) - 1 - db, -1, -1):
        c = r[d + db] * inv
        q[d] = c
        if c:
            for i in range(db + 1):
                r[d + i] = r[d + i] - c * b[i]
    return _trim(q), _trim(r[:db])


def _pmonic(a):
    if not a:
        return a
    lc = a[-1]
    if lc == 1:
        return a
    inv = 1 / lc
    return tuple(x * inv for x in a)


def _pxgcd(a, b, one):
    """Monic gcd d and cofactors with d = s*a + t*b."""
    r0, r1 = a, b
    s0, s1 = (one,), ()
    t0, t1 = (), (one,)
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if not r0:
        return (), s0, t0
    inv = 1 / r0[-1]
    return (tuple(x * inv for x in r0), _pscale(s0, inv), _pscale(t0, inv))


def _peval(a, x):
    acc = None
    for c in reversed(a):
        acc = c if acc is None else acc * x + c
    return acc


# --- curve and divisors ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Curve:
    """The genus-2 curve y^2 = x^5 + h over ``field``."""

    h: object
    field: FieldContext = field(default_factory=RationalField)

    def __post_init__(self):
        h = self.field(self.h)
        if not h:
            raise ValueError("h must be nonzero in the field")
        p = getattr(self.field, "p", None)
        if p is not None and p in (2, 5):
            raise ValueError("bad reduction: characteristic divides 10")
        object.__setattr__(self, "h", h)
        zero, one = self.field(0), self.field(1)
        object.__setattr__(self, "f", (h, zero, zero, zero, zero, one))

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.field == other.field
                and self.h == other.h)

    def __hash__(self):
        return hash((self.field, self.h))

    def __repr__(self):
        return "Curve(y^2 = x^5 + %s over %r)" % (self.h, self.field)

    @property
    def identity(self) -> "MumfordDivisor":
        return MumfordDivisor((self.field(1),), (), self)

    def contains(self, x, y) -> bool:
        x, y = self.field(x), self.field(y)
        return y * y == x ** 5 + self.h


@dataclass(frozen=True)
class MumfordDivisor:
    u: tuple
    v: tuple
    curve: Curve = field(compare=False, repr=False, hash=False)

    @property
    def degree(self) -> int:
        return len(self.u) - 1

    @property
    def is_identity(self) -> bool:
        return len(self.u) == 1

    def __add__(self, other):
        return cantor_add(self.curve, self, other)

    def __neg__(self):
        return negate(self.curve, self)

    def __sub__(self, other):
        return cantor_add(self.curve, self, negate(self.curve, other))

    def __rmul__(self, k: int):
        if k < 0:
            return scalar_mul(self.curve, negate(self.curve, self), -k)
        return scalar_mul(self.curve, self, k)

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.u == other.u and self.v == other.v and self.curve == other.curve

    def __hash__(self):
        return hash((self.u, self.v))


@dataclass(frozen=True)
class CyclotomicIntegerEndo:
    """a + b*z + c*z^2 + d*z^3 in Z[z], acting on the Jacobian."""

    a: int
    b: int = 0
    c: int = 0
    d: int = 0

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))


SQRT5_ENDO = CyclotomicIntegerEndo(1, 0, 2, 2)


def _check(curve, *divs):
    for D in divs:
        if D.curve is not curve and D.curve != curve:
            raise CurveMismatch("divisor %r belongs to %r, not %r" % (D, D.curve, curve))


def is_valid(curve: Curve, D: MumfordDivisor) -> bool:
    u, v = D.u, D.v
    if not u or u[-1] != 1 or len(u) > 3 or len(v) >= len(u):
        return False
    _, r = _pdivmod(_psub(curve.f, _pmul(v, v)), u)
    return not r


def embed_point(curve: Curve, x, y) -> MumfordDivisor:
    """The class of (x, y) - infinity, i.e. <X - x, y>."""
    F = curve.field
    x, y = F(x), F(y)
    if y * y != x ** 5 + curve.h:
        raise InvalidPoint("(%s, %s) is not on %r" % (x, y, curve))
    return MumfordDivisor((-x, F(1)), _trim([y]), curve)


def negate(curve: Curve, D: MumfordDivisor) -> MumfordDivisor:
    _check(curve, D)
    return MumfordDivisor(D.u, _pneg(D.v), curve)


def _reduce(curve, u, v):
    f = curve.f
    while len(u) > 3:
        u, rem = _pdivmod(_psub(f, _pmul(v, v)), u)
        assert not rem, "Mumford invariant broken during reduction"
        _, v = _pdivmod(_pneg(v), u)
    u = _pmonic(u)
    _, v = _pdivmod(v, u)
    return MumfordDivisor(u, v, curve)


def cantor_add(curve: Curve, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
    _check(curve, D1, D2)
    if D1.is_identity:
        return D2
    if D2.is_identity:
        return D1
    one = curve.field(1)
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d1, e1, e2 = _pxgcd(u1, u2, one)
    if len(d1) == 1:
        u = _pmul(u1, u2)
        w = _padd(_pmul(_pmul(e1, u1), v2), _pmul(_pmul(e2, u2), v1))
        _, v = _pdivmod(w, u)
    else:
        d, c1, c2 = _pxgcd(d1, _padd(v1, v2), one)
        s1, s2 = _pmul(c1, e1), _pmul(c1, e2)
        u, rem = _pdivmod(_pmul(u1, u2), _pmul(d, d))
        assert not rem
        w = _padd(_padd(_pmul(_pmul(s1, u1), v2), _pmul(_pmul(s2, u2), v1)),
                  _pmul(c2, _padd(_pmul(v1, v2), curve.f)))
        w, rem = _pdivmod(w, d)
        assert not rem
        if len(u) == 1:
            return curve.identity
        _, v = _pdivmod(w, u)
    return _reduce(curve, u, v)


def scalar_mul(curve: Curve, D: MumfordDivisor, k: int) -> MumfordDivisor:
    """k*D by left-to-right double-and-add; negative k negates first."""
    _check(curve, D)
    if k < 0:
        D, k = negate(curve, D), -k
    result = curve.identity
    for bit in bin(k)[2:]:
        result = cantor_add(curve, result, result)
        if bit == "1":
            result = cantor_add(curve, result, D)
    return result


def zeta_action(curve: Curve, D: MumfordDivisor, k: int) -> MumfordDivisor:
    """[z^k]D, induced by (x, y) -> (z^k x, y)."""
    _check(curve, D)
    z = curve.field.zeta
    if z is None:
        raise NoZetaInField("%r has no primitive 5th root of unity" % curve.field)
    k %= 5
    if k == 0 or D.is_identity:
        return D
    zk = z ** k
    zinv = z ** (5 - k)
    d = D.degree
    u = tuple(c * zk ** (d - j) for j, c in enumerate(D.u))
    v = tuple(c * zinv ** j for j, c in enumerate(D.v))
    return MumfordDivisor(u, v, curve)


def apply_endo(curve: Curve, D: MumfordDivisor, e) -> MumfordDivisor:
    """[a + b z + c z^2 + d z^3] D."""
    result = curve.identity
    for k, coeff in enumerate(e):
        if coeff:
            result = cantor_add(curve, result, scalar_mul(curve, zeta_action(curve, D, k), coeff))
    return result


def sqrt5_on_jacobian(curve: Curve, D: MumfordDivisor) -> MumfordDivisor:
    """Real multiplication [sqrt 5] = [1 + 2z^2 + 2z^3]."""
    if curve.field.zeta is None:
        raise NoZetaInField("%r has no primitive 5th root of unity" % curve.field)
    return apply_endo(curve, D, SQRT5_ENDO)


# --- random sampling over finite fields ------------------------------------

def random_point(curve: Curve, rng: random.Random) -> MumfordDivisor:
    """A random affine point of the curve as a degree-1 divisor.

    Over F_p^2 the point is drawn from the base field F_p.
    """
    F = curve.field
    if isinstance(F, QuadraticExtension):
        base = PrimeField(F.p)
        hb = curve.h
        if not hb.in_base_field():
            raise ValueError("random_point over F_p^2 needs h in F_p")
        sub = Curve(hb.a, base)
        P = random_point(sub, rng)
        return MumfordDivisor(tuple(F(c) for c in P.u), tuple(F(c) for c in P.v), curve)
    if not isinstance(F, PrimeField):
        raise TypeError("random points need a finite field")
    tries = 0
    while True:
        x = F.random_element(rng)
        y = F.sqrt(x ** 5 + curve.h)
        if y is not None:
            if rng.random() < 0.5:
                y = -y
            return embed_point(curve, x, y)
        tries += 1
        # tiny fields can have no affine points at all (e.g. p = 11, h = 7)
        if tries == 64 and F.p < 1 << 20 and not any(
                F.sqrt(t ** 5 + curve.h) is not None for t in F.elements()):
            raise InvalidPoint("%r has no affine points" % curve)


def random_divisor(curve: Curve, rng: random.Random) -> MumfordDivisor:
    """Random class P1 + P2 (over F_p^2: P1 + [z^k] P2 with base-field points)."""
    P1 = random_point(curve, rng)
    P2 = random_point(curve, rng)
    if isinstance(curve.field, QuadraticExtension) and curve.field.zeta is not None:
        P2 = zeta_action(curve, P2, rng.randrange(5))
    return cantor_add(curve, P1, P2)
