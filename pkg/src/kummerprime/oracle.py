"""Brute-force ground truth over small prime fields.

Everything here enumerates: the whole Jacobian J(F_p) for p up to a few
hundred or thousand, curve points, seed pairs (alpha, beta).  The results
check the structure the certifier relies on (group order, 2-torsion, the
cyclic Z[sqrt 5]-module of 5-power order) and measure how often a random
seed lands in the inconclusive region.

Small-field divisors are 5-tuples ``(deg, u1, u0, v1, v0)``; see
:mod:`kummerprime._pykernels`.  Applying [sqrt 5] needs a fifth root of
unity, which for p = 4 (mod 5) only exists in F_p^2, so those steps convert
to :class:`~kummerprime.genus2.MumfordDivisor` over the quadratic extension
and back.
"""

from __future__ import annotations

import logging
import math
import os
import random
from dataclasses import dataclass, field

from sympy import factorint, isprime

from . import kernels
from .certify import fifth_root, safe_threshold, CertificationTask
from .exactfield import PrimeField, QuadraticExtension
from .genus2 import Curve, MumfordDivisor, sqrt5_on_jacobian

log = logging.getLogger(__name__)

__all__ = ["GroupTable", "TwoTorsionReport", "FivePartReport", "ExperimentReport",
           "OracleRefused", "enumerate_jacobian", "verify_two_torsion",
           "verify_five_part_cyclic", "group_structure", "indeterminate_fraction",
           "curve_points", "x_y_sets", "kummer_image", "sqrt5_small", "to_divisor",
           "from_divisor", "table_ceiling", "sweep_ceiling"]

IDENTITY = kernels.IDENTITY


class OracleRefused(ValueError):
    pass


def table_ceiling() -> int:
    return int(os.environ.get("KUMMERPRIME_TABLE_CEILING", "1000"))


def sweep_ceiling() -> int:
    """Largest lambda for an exhaustive seed sweep (environment-configurable)."""
    return int(os.environ.get("KUMMERPRIME_SWEEP_CEILING", "2000"))


# --- conversions ----------------------------------------------------------------

def to_divisor(curve: Curve, D) -> MumfordDivisor:
    F = curve.field
    deg, u1, u0, v1, v0 = D
    if deg == 0:
        return curve.identity
    trim = lambda t: tuple(t[:max((i + 1 for i, c in enumerate(t) if c), default=0)])
    if deg == 1:
        return MumfordDivisor((F(u0), F(1)), trim((F(v0),)), curve)
    return MumfordDivisor((F(u0), F(u1), F(1)), trim((F(v0), F(v1))), curve)


def _base(x) -> int:
    if hasattr(x, "in_base_field"):
        if not x.in_base_field():
            raise ValueError("element %r is not in the base field" % (x,))
        return int(x.a)
    return int(x)


def from_divisor(D: MumfordDivisor) -> tuple:
    deg = D.degree
    u = [_base(c) for c in D.u]
    v = [_base(c) for c in D.v] + [0, 0]
    if deg == 0:
        return IDENTITY
    if deg == 1:
        return (1, 0, u[0], 0, v[0])
    return (2, u[1], u[0], v[1], v[0])


def sqrt5_small(p: int, h: int, D, times: int = 1):
    """[sqrt 5]^times D for an F_p-rational divisor tuple.

    Even powers are scalar multiplications by 5^(times/2); the odd remainder
    goes through F_p^2 (or F_p itself when it contains a fifth root of unity).
    """
    half, odd = divmod(times, 2)
    if half:
        D = kernels.jac_mul(p, h, D, 5 ** half)
    if odd and D[0]:
        F = PrimeField(p) if p % 5 == 1 else QuadraticExtension(p)
        curve = Curve(h, F)
        D = from_divisor(sqrt5_on_jacobian(curve, to_divisor(curve, D)))
    return D


def kummer_image(p: int, D) -> tuple:
    """kappa of a small-field divisor, normalized (last nonzero coordinate 1)."""
    deg, u1, u0, v1, v0 = D
    if deg == 0:
        return (0, 0, 0, 1)
    if deg == 1:
        x = (-u0) % p
        return (0, 1, x, x * x % p)
    s, q, c = (-u1) % p, u0, v1
    return (1, s, q, (c * c - s ** 3 + s * q) % p)


# --- group table -------------------------------------------------------------------

@dataclass
class GroupTable:
    p: int
    h: int
    elements: list
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {D: i for i, D in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def add(self, A, B):
        return kernels.jac_add(self.p, self.h, A, B)

    def mul(self, A, k: int):
        return kernels.jac_mul(self.p, self.h, A, k)

    def check_closure(self, samples: int = 500, seed: int = 0) -> bool:
        rng = random.Random(seed)
        for _ in range(samples):
            A, B = rng.choice(self.elements), rng.choice(self.elements)
            if self.add(A, B) not in self.index:
                return False
        return True

    def curve(self, field_ctx=None) -> Curve:
        return Curve(self.h, field_ctx or PrimeField(self.p))


def enumerate_jacobian(p: int, h: int, ceiling: int | None = None) -> GroupTable:
    """All of J(F_p) for y^2 = x^5 + h."""
    if not isprime(p):
        raise OracleRefused("%d is not prime" % p)
    if p in (2, 5) or h % p == 0:
        raise OracleRefused("bad reduction at p = %d" % p)
    ceiling = table_ceiling() if ceiling is None else ceiling
    if p > ceiling:
        raise OracleRefused("p = %d above the enumeration ceiling %d" % (p, ceiling))
    return GroupTable(p, h % p, list(kernels.jac_enumerate(p, h % p)))


def curve_points(p: int, h: int) -> list:
    """Affine points of y^2 = x^5 + h over F_p as degree-one divisor tuples."""
    out = []
    for x in range(p):
        rhs = (pow(x, 5, p) + h) % p
        for y in range(p):
            if y * y % p == rhs:
                out.append((1, 0, (-x) % p, 0, y))
    return out


# --- structure checks ------------------------------------------------------------

@dataclass
class TwoTorsionReport:
    involutions: list
    rational_alpha: int | None
    quadratic_irreducible: bool

    @property
    def count(self) -> int:
        return len(self.involutions)


def _has_root(p, u1, u0) -> bool:
    disc = (u1 * u1 - 4 * u0) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def verify_two_torsion(table: GroupTable) -> TwoTorsionReport:
    p = table.p
    inv = [D for D in table.elements if D[0] and D[3] == 0 and D[4] == 0]
    alpha = None
    irreducible = True
    for D in inv:
        if D[0] == 1:
            alpha = (-D[2]) % p
        elif _has_root(p, D[1], D[2]):
            irreducible = False
    return TwoTorsionReport(inv, alpha, irreducible)


@dataclass
class FivePartReport:
    order: int
    five_part_order: int
    exponent_ok: bool
    q_ranks: dict
    is_square_group: bool
    generator: tuple | None = None
    sqrt5_order: int | None = None
    spanned: int = 0
    five_part_is_image: bool = False

    @property
    def cyclic(self) -> bool:
        return self.generator is not None and self.spanned == self.five_part_order


def _order_divides(table, D, k):
    return table.mul(D, k)[0] == 0


def verify_five_part_cyclic(table: GroupTable, m: int, n: int, seed: int = 0) -> FivePartReport:
    """Shape (Z/N)^2 with N = 4 m^2 5^n, and the 5-part Z[sqrt 5]/(sqrt 5^(2n))."""
    lam = 4 * m * m * 5 ** n - 1
    if table.p != lam:
        raise OracleRefused("table is for p = %d, not lambda = %d" % (table.p, lam))
    N = lam + 1
    rng = random.Random(seed)
    order = len(table)
    # q-rank via #J[q] = q^2, exponent via an element of order N
    q_ranks = {}
    for q in factorint(N):
        killed = sum(1 for D in table.elements if _order_divides(table, D, q))
        q_ranks[q] = round(math.log(killed, q))
    exponent_ok = False
    for _ in range(200):
        D = rng.choice(table.elements)
        if all(not _order_divides(table, D, N // q) for q in factorint(N)):
            exponent_ok = True
            break
    square = order == N * N and exponent_ok and all(r == 2 for r in q_ranks.values())

    # 5-primary part as the image of multiplication by 4 m^2
    c = 4 * m * m
    five = {table.mul(D, c) for D in table.elements}
    five_ok = all(table.mul(D, 5 ** n)[0] == 0 for D in five)
    report = FivePartReport(order, len(five), exponent_ok, q_ranks, square,
                            five_part_is_image=five_ok and len(five) == 5 ** (2 * n))
    # a Z[sqrt 5]-generator: [sqrt 5]^(2n-1) P != 0
    pool = sorted(five)
    rng.shuffle(pool)
    for P in pool[:100]:
        if sqrt5_small(table.p, table.h, P, 2 * n - 1)[0]:
            break
    else:
        return report
    S = sqrt5_small(table.p, table.h, P, 1)
    k, Q = 0, P
    while Q[0]:
        Q = sqrt5_small(table.p, table.h, Q, 1)
        k += 1
    # {a P + b S : 0 <= a, b < 5^n} must be the whole 5-part
    span = set()
    aP = IDENTITY
    for _ in range(5 ** n):
        x = aP
        for _ in range(5 ** n):
            span.add(x)
            x = table.add(x, S)
        aP = table.add(aP, P)
    report.generator = P
    report.sqrt5_order = k
    report.spanned = len(span) if span == five else -len(span)
    return report


def group_structure(m: int, n: int, h: int, seed: int = 0) -> dict:
    """Everything the CLI prints for ``oracle group-structure``."""
    lam = 4 * m * m * 5 ** n - 1
    if not isprime(lam):
        raise OracleRefused("lambda = %d is composite" % lam)
    table = enumerate_jacobian(lam, h, ceiling=max(table_ceiling(), lam))
    tt = verify_two_torsion(table)
    fp = verify_five_part_cyclic(table, m, n, seed)
    alpha = fifth_root(CertificationTask(m, n), h)
    return {
        "lambda": lam, "h": h, "order": len(table),
        "expected_order": 16 * m ** 4 * 5 ** (2 * n),
        "involutions": tt.count, "rational_involution_alpha": tt.rational_alpha,
        "fifth_root": alpha, "other_involutions_irreducible": tt.quadratic_irreducible,
        "group_is_Z_N_squared": fp.is_square_group, "q_ranks": fp.q_ranks,
        "five_part_order": fp.five_part_order, "five_part_is_4m2_image": fp.five_part_is_image,
        "five_part_cyclic": fp.cyclic, "sqrt5_annihilator_exponent": fp.sqrt5_order,
    }


# --- the indeterminacy experiment --------------------------------------------------

@dataclass
class ExperimentReport:
    lam: int
    m: int
    n: int
    mode: str
    steps: int  # seeds with [sqrt 5]^steps (4 m^2 Q) = 0 are inconclusive
    tested: int = 0
    indeterminate: int = 0
    x_size: int | None = None
    y_size: int | None = None

    @property
    def bound(self) -> float:
        return 2 * self.m / 5 ** (self.n / 2)

    @property
    def fraction(self) -> float:
        return self.indeterminate / self.tested if self.tested else 0.0

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "m": self.m, "n": self.n, "mode": self.mode,
                "steps": self.steps, "tested": self.tested, "indeterminate": self.indeterminate,
                "fraction": self.fraction, "bound": self.bound,
                "X": self.x_size, "Y": self.y_size}


def _killed(p, h, Q, c, steps) -> bool:
    return sqrt5_small(p, h, kernels.jac_mul(p, h, Q, c), steps)[0] == 0


def indeterminate_fraction(m: int, n: int, mode: str = "exhaustive", samples: int = 10000,
                           seed: int = 0, ceiling: int | None = None) -> ExperimentReport:
    """Fraction of seeds (alpha, beta) that leave the certifier undecided.

    A seed is inconclusive when r < T_safe, i.e. when [sqrt 5]^(T_safe - 1)
    kills P = 4 m^2 Q.
    """
    lam = 4 * m * m * 5 ** n - 1
    if lam <= 100:
        raise OracleRefused("the bound needs lambda > 100")
    if not isprime(lam):
        raise OracleRefused("lambda = %d is composite" % lam)
    steps = safe_threshold(lam) - 1
    c = 4 * m * m
    rep = ExperimentReport(lam, m, n, mode, steps)
    if mode == "exhaustive":
        ceiling = sweep_ceiling() if ceiling is None else ceiling
        if lam > ceiling:
            raise OracleRefused("lambda = %d above the sweep ceiling %d" % (lam, ceiling))
        rep.tested = lam * lam - sum(1 for a in range(lam) for b in range(lam)
                                     if (b * b - pow(a, 5, lam)) % lam == 0)
        if steps % 2 == 0:
            rep.indeterminate = kernels.count_seeds_killed(lam, c * 5 ** (steps // 2))
        else:
            rep.indeterminate = sum(
                1 for a in range(lam) for b in range(lam)
                if (b * b - pow(a, 5, lam)) % lam
                and _killed(lam, (b * b - pow(a, 5, lam)) % lam, (1, 0, (-a) % lam, 0, b), c, steps))
    elif mode == "sampled":
        rng = random.Random(seed)
        while rep.tested < samples:
            a, b = rng.randrange(lam), rng.randrange(lam)
            h = (b * b - pow(a, 5, lam)) % lam
            if h == 0:
                continue
            rep.tested += 1
            if _killed(lam, h, (1, 0, (-a) % lam, 0, b), c, steps):
                rep.indeterminate += 1
    else:
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    return rep


def x_y_sets(m: int, n: int, h: int, steps: int | None = None):
    """The sets X (curve points plus infinity in the image of [sqrt 5]^k) and Y = X + X.

    Membership in the image of [sqrt 5]^k is tested as annihilation of
    4 m^2 P by [sqrt 5]^(2n - k) (the 5-part is a cyclic Z[sqrt 5]-module).
    ``steps`` is 2n - k; it defaults to T_safe - 1.
    """
    lam = 4 * m * m * 5 ** n - 1
    if not isprime(lam):
        raise OracleRefused("lambda = %d is composite" % lam)
    steps = safe_threshold(lam) - 1 if steps is None else steps
    c = 4 * m * m
    h %= lam
    X = [IDENTITY] + [P for P in curve_points(lam, h) if _killed(lam, h, P, c, steps)]
    Y = {kernels.jac_add(lam, h, P, Q) for i, P in enumerate(X) for Q in X[i:]}
    return X, Y, 2 * n - steps
