"""The Kummer surface J/<+-1> of y^2 = x^5 + h, embedded in P^3.

Coordinates follow the classical genus-2 construction for a quintic model
(f0 = h, f5 = 1, other coefficients zero).  For a class
<X^2 - s X + p, c X + d> they reduce to

    (1 : s : p : c^2 - s^3 + s p),

degree-one classes <X - x, y> map to (0 : 1 : x : x^2) and the identity to
(0 : 0 : 0 : 1).  This ordering reproduces the published start vectors for
h = 2, Q0 = (-1, 1) without any permutation or rescaling.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm

from .exactfield import Rational
from .genus2 import Curve, MumfordDivisor, embed_point, scalar_mul

__all__ = ["KummerPoint", "kappa", "kummer_quartic", "evaluate_quartic", "is_on_kummer",
           "projectively_equal", "canonical_integers", "start_vector", "StartVectorTooLarge",
           "KAPPA_CONVENTION", "MAX_START_M"]

MAX_START_M = 32
KAPPA_CONVENTION = "x0,x1,x2,x3 = 1, s, p, c^2 - s^3 + s*p for <X^2 - sX + p, cX + d>"


@dataclass(frozen=True)
class KummerPoint:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 4:
            raise ValueError("Kummer points have four coordinates")
        if not any(self.coords):
            raise ValueError("(0:0:0:0) is not a projective point")

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, KummerPoint):
            return NotImplemented
        return projectively_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.normalized())

    def normalized(self) -> tuple:
        """Scale so that the last nonzero coordinate is 1."""
        c = self.coords
        last = next(x for x in reversed(c) if x)
        if isinstance(last, numbers.Rational):
            inv = Rational(1) / last
        else:
            inv = 1 / last
        return tuple(x * inv for x in c)


def projectively_equal(a, b, modulus: int | None = None) -> bool:
    """Equality in P^3: every 2x2 minor vanishes and neither vector is zero.

    With ``modulus`` the integer vectors are compared mod that prime.
    """
    if modulus is not None:
        a = [int(x) % modulus for x in a]
        b = [int(x) % modulus for x in b]
    if not any(a) or not any(b):
        return False
    for i in range(4):
        for j in range(i + 1, 4):
            d = a[i] * b[j] - a[j] * b[i]
            if (d % modulus if modulus else d):
                return False
    return True


def kappa(curve: Curve, D: MumfordDivisor) -> KummerPoint:
    F = curve.field
    deg = D.degree
    if deg == 0:
        return KummerPoint((F(0), F(0), F(0), F(1)))
    if deg == 1:
        x = -D.u[0]
        return KummerPoint((F(0), F(1), x, x * x))
    s = -D.u[1]
    p = D.u[0]
    c = D.v[1] if len(D.v) > 1 else F(0)
    return KummerPoint((F(1), s, p, c * c - s * s * s + s * p))


def evaluate_quartic(h, x0, x1, x2, x3):
    """K(x0..x3) for y^2 = x^5 + h (works on ints, rationals, field elements)."""
    k2 = x1 * x1 - 4 * x0 * x2
    k1 = -2 * (2 * h * x0 * x0 * x0 + x1 * x2 * x2)
    k0 = 4 * h * x0 * x0 * x1 * x2 - 4 * h * x0 * x1 * x1 * x1 + x2 * x2 * x2 * x2
    return k2 * x3 * x3 + k1 * x3 + k0


def kummer_quartic(curve: Curve):
    """The defining quartic as a callable on four coordinates."""
    h = curve.h

    def K(x0, x1, x2, x3):
        return evaluate_quartic(h, x0, x1, x2, x3)

    K.monomials = {  # exponent tuple -> coefficient, for inspection and tests
        (0, 2, 0, 2): 1, (1, 0, 1, 2): -4, (3, 0, 0, 1): -4 * h, (0, 1, 2, 1): -2,
        (2, 1, 1, 0): 4 * h, (1, 3, 0, 0): -4 * h, (0, 0, 4, 0): 1,
    }
    return K


def is_on_kummer(curve: Curve, P) -> bool:
    coords = P.coords if isinstance(P, KummerPoint) else tuple(P)
    return not evaluate_quartic(curve.h, *coords)


def canonical_integers(coords) -> tuple:
    """Coprime integers, last nonzero entry positive (for rational input)."""
    qs = [Rational(c) for c in coords]
    den = reduce(lcm, (int(q.denominator) for q in qs), 1)
    ints = [int(q * den) for q in qs]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("zero vector")
    ints = [x // g for x in ints]
    last = next(x for x in reversed(ints) if x)
    if last < 0:
        ints = [-x for x in ints]
    return tuple(ints)


class StartVectorTooLarge(ValueError):
    pass


def start_vector(h: int, alpha, beta, m: int, cap: int = MAX_START_M) -> tuple:
    """kappa(4 m^2 [(alpha, beta) - inf]) over Q as coprime integers.

    Coordinate length grows like 16 m^4 times the canonical height of the
    seed point (in nats), so about 7 m^4 digits for a height near 1.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m > cap:
        raise StartVectorTooLarge(
            "m = %d exceeds the cap %d: coordinates would have roughly %d digits"
            % (m, cap, int(16 * m ** 4 / 2.302585)))
    curve = Curve(h)
    Q0 = embed_point(curve, Rational(alpha), Rational(beta))
    return canonical_integers(kappa(curve, scalar_mul(curve, Q0, 4 * m * m)).coords)
