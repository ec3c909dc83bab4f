"""Primality certification of lambda = 4 m^2 5^n - 1 on the Kummer surface.

Starting from v0 = kappa(4 m^2 Q0) mod lambda, apply the [sqrt 5] map until
the first three coordinates vanish.  If lambda is prime, the number of steps
r is the [sqrt 5]-order of the start point, which is at most 2n.  A large r
(at least the safe threshold) proves primality once the gcd of v_{r-1} with
lambda is checked; never reaching the pattern proves compositeness; a small r
is inconclusive and calls for a different seed point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd, isqrt

from . import kernels
from .sqrt5synth import Sqrt5Map

__all__ = ["CertificationTask", "Verdict", "Prime", "Composite", "Unknown",
           "BoundViolated", "NotCoprime", "InputError",
           "validate_task", "m_bound_holds", "minimal_n", "sqrt5_residue", "fifth_root",
           "safe_threshold", "iterate_step", "certify"]

PRIME, COMPOSITE, UNKNOWN = "prime", "composite", "unknown"


class BoundViolated(ValueError):
    def __init__(self, m, n):
        super().__init__("m = %d is too large for n = %d" % (m, n))
        self.m, self.n = m, n


class NotCoprime(ValueError):
    pass


class InputError(ValueError):
    pass


def m_bound_holds(m: int, n: int) -> bool:
    """Exact integer form of m^2 < ((sqrt(5^n) - 1)^4 + 1) / (4 * 5^n).

    With S = 5^n, expanding (sqrt S - 1)^4 and isolating the irrational
    part 4 sqrt(S) (S + 1) gives R > 4 sqrt(S) (S + 1) where
    R = S^2 + 6S + 2 - 4 m^2 S; both sides positive, so square.
    """
    S = 5 ** n
    R = S * S + 6 * S + 2 - 4 * m * m * S
    return R > 0 and 16 * S * (S + 1) ** 2 < R * R


def minimal_n(m: int) -> int:
    """Smallest n >= 1 with the m-bound satisfied (any parity)."""
    n = 1
    while not m_bound_holds(m, n):
        n += 1
    return n


@dataclass(frozen=True)
class CertificationTask:
    m: int
    n: int

    @property
    def lam(self) -> int:
        return 4 * self.m * self.m * 5 ** self.n - 1


@dataclass(frozen=True)
class Verdict:
    outcome: str
    r: int = 0
    threshold: int = 0
    factor: int | None = None
    reason: str = ""
    lam: int | None = None
    elapsed: float = field(default=0.0, compare=False)
    factors: tuple = ()

    @property
    def is_prime(self) -> bool:
        return self.outcome == PRIME

    def __str__(self):
        extra = ""
        if self.factor is not None:
            extra = " factor=%d" % self.factor
        if self.reason:
            extra += " (%s)" % self.reason
        return "%s r=%d T_safe=%d%s" % (self.outcome, self.r, self.threshold, extra)


def Prime(r, threshold, **kw) -> Verdict:
    return Verdict(PRIME, r, threshold, **kw)


def Composite(r=0, threshold=0, factor=None, **kw) -> Verdict:
    return Verdict(COMPOSITE, r, threshold, factor, **kw)


def Unknown(reason, r=0, threshold=0, **kw) -> Verdict:
    return Verdict(UNKNOWN, r, threshold, reason=reason, **kw)


def validate_task(m: int, n: int):
    """A CertificationTask, or an immediate Composite verdict for even n."""
    if m < 1 or n < 1:
        raise InputError("m and n must be positive")
    if m % 5 == 0:
        raise InputError("5 must not divide m")
    if n % 2 == 0:
        a = 2 * m * 5 ** (n // 2)
        lam = a * a - 1
        return Composite(factor=a - 1, reason="even n", lam=lam, factors=(a - 1, a + 1))
    if not m_bound_holds(m, n):
        raise BoundViolated(m, n)
    task = CertificationTask(m, n)
    lam = task.lam
    assert lam % 5 == 4 and lam % 2 == 1
    return task


def sqrt5_residue(task: CertificationTask) -> int:
    """2 m 5^((n+1)/2), a square root of 5 mod lambda."""
    return 2 * task.m * 5 ** ((task.n + 1) // 2) % task.lam


def fifth_root(task: CertificationTask, h: int) -> int:
    """alpha = (-h)^(12 m^2 5^(n-1) - 1) mod lambda, so alpha^5 = -h when lambda is prime."""
    lam = task.lam
    if gcd(h, lam) != 1:
        raise NotCoprime("gcd(%d, lambda) = %d" % (h, gcd(h, lam)))
    return pow(-h, 12 * task.m * task.m * 5 ** (task.n - 1) - 1, lam)


def safe_threshold(lam: int) -> int:
    """Smallest T with 5^T > (u + 2)^4, u the integer fourth root of lambda.

    Since lambda^(1/4) + 1 < u + 2, every r >= T exceeds 4 log_5(lambda^(1/4) + 1).
    """
    if lam < 3:
        raise ValueError("lambda must be at least 3")
    u = isqrt(isqrt(lam))
    bound = (u + 2) ** 4
    T, p = 0, 1
    while p <= bound:
        p *= 5
        T += 1
    return T


def _program_mod(smap: Sqrt5Map, lam: int):
    instr, rows, nslots = smap.program
    return instr, tuple(tuple((j, c % lam) for j, c in row) for row in rows), nslots


def iterate_step(v, smap: Sqrt5Map, lam: int) -> tuple:
    """One application of the map mod lambda."""
    return kernels.iterate_step(_program_mod(smap, lam), tuple(int(x) % lam for x in v), lam)


def certify(task: CertificationTask, smap: Sqrt5Map, start, h: int | None = None) -> Verdict:
    """Run the iteration and classify lambda."""
    if not isinstance(task, CertificationTask):
        raise InputError("expected a CertificationTask")
    if len(start) != 4:
        raise InputError("start vector needs four coordinates")
    h = smap.h if h is None else h
    if h != smap.h:
        raise InputError("start vector and map disagree on h")
    t0 = time.perf_counter()
    lam, n = task.lam, task.n
    T = safe_threshold(lam)

    def done(v):
        return Verdict(v.outcome, v.r, v.threshold, v.factor, v.reason, lam,
                       time.perf_counter() - t0, v.factors)

    g = gcd(h, lam)
    if g == lam:
        return done(Unknown("lambda divides h; retry with another alpha, beta", 0, T))
    if g > 1:
        return done(Composite(0, T, g, reason="gcd(h, lambda)"))
    v0 = tuple(int(x) % lam for x in start)
    if not any(v0[:3]):
        return done(Unknown("start vector is the identity mod lambda", 0, T))
    r, prev, _ = kernels.iterate_until_identity(_program_mod(smap, lam), v0, lam, 2 * n)
    if r == 0:
        return done(Composite(2 * n, T, reason="identity not reached within 2n steps"))
    if r < T:
        return done(Unknown("identity reached below the safe threshold", r, T))
    for x in prev[:3]:
        d = gcd(x, lam)
        if 1 < d < lam:
            return done(Composite(r, T, d, reason="gcd with v_(r-1)"))
    return done(Prime(r, T))
