"""Exact arithmetic over the fields used by the rest of the package.

Four kinds of field are supported behind a small common interface
(:class:`FieldContext`):

* the rationals, with elements represented by ``gmpy2.mpq`` when available
  (``fractions.Fraction`` otherwise);
* the cyclotomic field Q(zeta_5), elements :class:`CyclotomicNumber`;
* prime fields F_p, elements :class:`PrimeFieldElement`;
* quadratic extensions F_p[t]/(t^2 - q), elements :class:`QuadraticElement`.

Every element type is immutable and supports ``+ - * /``, unary minus,
``==`` and truthiness (``bool(x)`` is False exactly for zero), which is all
the polynomial and divisor code needs.
"""

from __future__ import annotations

import numbers
import random
from typing import Iterator

try:
    from gmpy2 import mpq as Rational, mpz
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rational
    mpz = int
    HAVE_GMPY2 = False

__all__ = [
    "Rational", "mpz", "CyclotomicNumber", "PrimeFieldElement", "QuadraticElement",
    "FieldContext", "RationalField", "CyclotomicField", "PrimeField",
    "QuadraticExtension", "NotInBaseField", "find_zeta_in_prime_field",
    "ZETA", "SQRT5",
]


class NotInBaseField(ValueError):
    """Raised when F_p contains no primitive 5th root of unity."""


def _rat(x) -> Rational:
    return x if type(x) is Rational else Rational(x)


# ---------------------------------------------------------------------------
# Q(zeta_5)
# ---------------------------------------------------------------------------

def _reduce5(d: list) -> tuple:
    """Reduce coefficients on 1, z, .., z^4 using z^4 = -1 - z - z^2 - z^3."""
    t = d[4]
    return (d[0] - t, d[1] - t, d[2] - t, d[3] - t)


class CyclotomicNumber:
    """Element c0 + c1*z + c2*z^2 + c3*z^3 of Q(z), z a primitive 5th root of unity."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        self.c = (_rat(c0), _rat(c1), _rat(c2), _rat(c3))

    @classmethod
    def _raw(cls, c: tuple) -> "CyclotomicNumber":
        obj = object.__new__(cls)
        obj.c = c
        return obj

    @classmethod
    def coerce(cls, x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        return cls._raw((_rat(x), Rational(0), Rational(0), Rational(0)))

    def __repr__(self) -> str:
        return "CyclotomicNumber(%s)" % ", ".join(str(x) for x in self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicNumber):
            return self.c == other.c
        if isinstance(other, numbers.Rational):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def __add__(self, other):
        if not isinstance(other, CyclotomicNumber):
            if isinstance(other, numbers.Rational):
                a = self.c
                return CyclotomicNumber._raw((a[0] + other, a[1], a[2], a[3]))
            return NotImplemented
        a, b = self.c, other.c
        return CyclotomicNumber._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    __radd__ = __add__

    def __neg__(self):
        a = self.c
        return CyclotomicNumber._raw((-a[0], -a[1], -a[2], -a[3]))

    def __sub__(self, other):
        if not isinstance(other, (CyclotomicNumber, numbers.Rational)):
            return NotImplemented
        return self + (-CyclotomicNumber.coerce(other))

    def __rsub__(self, other):
        return CyclotomicNumber.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            if isinstance(other, numbers.Rational):
                a = self.c
                return CyclotomicNumber._raw((a[0] * other, a[1] * other, a[2] * other, a[3] * other))
            return NotImplemented
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = other.c
        # product on 1..z^6, then fold z^5 = 1, z^6 = z, z^4 = -(1+z+z^2+z^3)
        d0 = a0 * b0
        d1 = a0 * b1 + a1 * b0
        d2 = a0 * b2 + a1 * b1 + a2 * b0
        d3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        d4 = a1 * b3 + a2 * b2 + a3 * b1
        d5 = a2 * b3 + a3 * b2
        d6 = a3 * b3
        d0 += d5
        d1 += d6
        return CyclotomicNumber._raw((d0 - d4, d1 - d4, d2 - d4, d3 - d4))

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "CyclotomicNumber":
        """Image under the automorphism z -> z^k (k not divisible by 5)."""
        k %= 5
        if k == 0:
            raise ValueError("z -> 1 is not an automorphism")
        d = [Rational(0)] * 5
        for i, ci in enumerate(self.c):
            d[(i * k) % 5] += ci
        return CyclotomicNumber._raw(_reduce5(d))

    def norm(self) -> Rational:
        prod = self * self.conjugate(2) * self.conjugate(3) * self.conjugate(4)
        return prod.c[0]

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_5)")
        # a^-1 = s2(a) s3(a) s4(a) / N(a)
        rest = self.conjugate(2) * self.conjugate(3) * self.conjugate(4)
        nrm = (self * rest).c[0]
        return rest * (1 / nrm)

    def __truediv__(self, other):
        if isinstance(other, numbers.Rational):
            if not other:
                raise ZeroDivisionError("division by zero in Q(zeta_5)")
            inv = 1 / _rat(other)
            return self * inv
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def denominator_lcm(self) -> int:
        from math import lcm
        return lcm(*(int(x.denominator) for x in self.c))


ZETA = CyclotomicNumber(0, 1, 0, 0)
SQRT5 = CyclotomicNumber(1, 0, 2, 2)


# ---------------------------------------------------------------------------
# F_p and F_p^2
# ---------------------------------------------------------------------------

class PrimeFieldElement:
    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = int(value) % p

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError("elements of different prime fields")
            return other.value
        if isinstance(other, numbers.Integral):
            return int(other)
        if isinstance(other, numbers.Rational):
            return int(other.numerator) * pow(int(other.denominator), -1, self.p)
        return None

    def __repr__(self) -> str:
        return "F%d(%d)" % (self.p, self.value)

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(o - self.value, self.p)

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return PrimeFieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return PrimeFieldElement(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElement(o, self.p) / self

    def __pow__(self, e: int):
        return PrimeFieldElement(pow(self.value, e, self.p), self.p)


class QuadraticElement:
    """a + b*t in F_p[t]/(t^2 - q)."""

    __slots__ = ("a", "b", "p", "q")

    def __init__(self, a: int, b: int, p: int, q: int):
        self.a = int(a) % p
        self.b = int(b) % p
        self.p = p
        self.q = q

    def _coerce(self, other):
        if isinstance(other, QuadraticElement):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.a, other.b
        if isinstance(other, PrimeFieldElement):
            return other.value, 0
        if isinstance(other, numbers.Integral):
            return int(other), 0
        if isinstance(other, numbers.Rational):
            return int(other.numerator) * pow(int(other.denominator), -1, self.p), 0
        return None

    def _new(self, a, b):
        return QuadraticElement(a, b, self.p, self.q)

    def __repr__(self) -> str:
        return "F%d^2(%d + %d*t)" % (self.p, self.a, self.b)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.a - o[0]) % self.p == 0 and (self.b - o[1]) % self.p == 0

    def __hash__(self) -> int:
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.a + o[0], self.b + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.a - o[0], self.b - o[1])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(o[0] - self.a, o[1] - self.b)

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = o
        return self._new(self.a * c + self.q * self.b * d, self.a * d + self.b * c)

    __rmul__ = __mul__

    def frobenius(self) -> "QuadraticElement":
        return self._new(self.a, -self.b)

    def inverse(self) -> "QuadraticElement":
        nrm = (self.a * self.a - self.q * self.b * self.b) % self.p
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero in F_%d^2" % self.p)
        inv = pow(nrm, -1, self.p)
        return self._new(self.a * inv, -self.b * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * self._new(*o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(*o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self._new(1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def in_base_field(self) -> bool:
        return self.b == 0


# ---------------------------------------------------------------------------
# field contexts
# ---------------------------------------------------------------------------

def find_zeta_in_prime_field(p: int) -> PrimeFieldElement:
    """Deterministic primitive 5th root of unity in F_p (requires p = 1 mod 5).

    Candidates g = 2, 3, ... are tried in increasing order and the first
    g^((p-1)/5) different from 1 is returned.
    """
    if p == 5:
        raise ValueError("p = 5 has no primitive 5th roots of unity")
    if p % 5 != 1:
        raise NotInBaseField("no primitive 5th root of unity in F_%d (p = %d mod 5)" % (p, p % 5))
    e = (p - 1) // 5
    g = 2
    while True:
        z = pow(g, e, p)
        if z != 1:
            return PrimeFieldElement(z, p)
        g += 1


def smallest_nonresidue(p: int) -> int:
    q = 2
    while pow(q, (p - 1) // 2, p) != p - 1:
        q += 1
    return q


class FieldContext:
    """Common interface of the supported fields."""

    tag = "abstract"
    zeta = None

    def __call__(self, x):
        raise NotImplementedError

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def random_element(self, rng: random.Random, bound: int = 10):
        raise NotImplementedError

    @property
    def has_zeta(self) -> bool:
        return self.zeta is not None


class RationalField(FieldContext):
    tag = "Rationals"

    def __call__(self, x):
        return _rat(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "RationalField()"

    def random_element(self, rng, bound=10):
        den = rng.randint(1, bound)
        return Rational(rng.randint(-bound, bound), den)


class CyclotomicField(FieldContext):
    tag = "Cyclotomic"
    zeta = ZETA

    def __call__(self, x):
        return CyclotomicNumber.coerce(x)

    def __eq__(self, other):
        return isinstance(other, CyclotomicField)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "CyclotomicField()"

    def random_element(self, rng, bound=10):
        return CyclotomicNumber(*(Rational(rng.randint(-bound, bound), rng.randint(1, bound))
                                  for _ in range(4)))


class PrimeField(FieldContext):
    tag = "PrimeField"

    def __init__(self, p: int):
        self.p = p
        self.zeta = find_zeta_in_prime_field(p) if p % 5 == 1 else None

    def __call__(self, x):
        if isinstance(x, PrimeFieldElement):
            return x
        if isinstance(x, numbers.Rational) and not isinstance(x, numbers.Integral):
            return PrimeFieldElement(int(x.numerator) * pow(int(x.denominator), -1, self.p), self.p)
        return PrimeFieldElement(int(x), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash((self.tag, self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p

    def random_element(self, rng, bound=None):
        return PrimeFieldElement(rng.randrange(self.p), self.p)

    def elements(self) -> Iterator[PrimeFieldElement]:
        for i in range(self.p):
            yield PrimeFieldElement(i, self.p)

    def sqrt(self, x: PrimeFieldElement):
        """A square root of x, or None if x is a non-residue."""
        from sympy.ntheory import sqrt_mod
        r = sqrt_mod(int(x), self.p)
        return None if r is None else PrimeFieldElement(r, self.p)


class QuadraticExtension(FieldContext):
    """F_p^2 = F_p[t]/(t^2 - q), q the smallest positive non-residue mod p."""

    tag = "QuadraticExtension"

    def __init__(self, p: int):
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        self.p = p
        self.q = smallest_nonresidue(p)
        self.zeta = self._find_zeta()

    def _find_zeta(self):
        p = self.p
        if p % 5 == 1:
            return self(find_zeta_in_prime_field(p).value)
        if p % 5 != 4:
            return None
        e = (p * p - 1) // 5
        a = 0
        while True:
            z = QuadraticElement(a, 1, p, self.q) ** e
            if z != 1:
                return z
            a += 1

    def __call__(self, x):
        if isinstance(x, QuadraticElement):
            return x
        if isinstance(x, PrimeFieldElement):
            return QuadraticElement(x.value, 0, self.p, self.q)
        if isinstance(x, numbers.Rational) and not isinstance(x, numbers.Integral):
            return QuadraticElement(int(x.numerator) * pow(int(x.denominator), -1, self.p), 0,
                                    self.p, self.q)
        return QuadraticElement(int(x), 0, self.p, self.q)

    def element(self, a: int, b: int) -> QuadraticElement:
        return QuadraticElement(a, b, self.p, self.q)

    def __eq__(self, other):
        return isinstance(other, QuadraticExtension) and other.p == self.p

    def __hash__(self):
        return hash((self.tag, self.p))

    def __repr__(self):
        return "QuadraticExtension(%d)" % self.p

    def random_element(self, rng, bound=None):
        return QuadraticElement(rng.randrange(self.p), rng.randrange(self.p), self.p, self.q)
