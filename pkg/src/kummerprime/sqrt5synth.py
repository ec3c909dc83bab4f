"""Interpolate the action of [sqrt 5] on the Kummer surface.

The multiplication-by-sqrt(5) endomorphism descends to the Kummer surface as
four homogeneous polynomials of degree N.  We recover them the direct way:
pick many points [a + b z + c z^2 + d z^3] Q0 of the Jacobian over Q(z), pair
each Kummer image v with w = kappa([sqrt 5] P), and solve for coefficients
a_{i,mu} such that sum_mu a_{i,mu} mu(v) = lambda_v w_i for every sample.

Solving goes through a reduced system.  For each sample choose j with
w_j != 0; then lambda_v = phi_j(v) / w_j and the remaining equations become

    phi_i(v) w_j - phi_j(v) w_i = 0    (i != j),

which mentions only the 4 * M(N) unknowns a.  Its kernel is the a-part of the
kernel of the full matrix.  The kernel is not one-dimensional: adding the
Kummer quartic times any linear form to one phi_i leaves the map unchanged on
the surface, so a correct solution is picked among the basis vectors.

Validation is randomized: on many random divisors over several primes
p = 1 (mod 5) the map must agree projectively with kappa([sqrt 5] D).
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field, replace
from functools import cached_property, reduce
from math import gcd

from . import linalg
from .exactfield import CyclotomicField, CyclotomicNumber, PrimeField, Rational
from .genus2 import (Curve, MumfordDivisor, apply_endo, embed_point, random_divisor,
                     sqrt5_on_jacobian)
from .kummer import KummerPoint, kappa, projectively_equal

log = logging.getLogger(__name__)

__all__ = ["Sqrt5Map", "SamplePair", "InterpolationSystem", "ValidationReport",
           "DegenerateSamples", "MapInvalid", "BoundTooSmall",
           "monomials", "monomial_count", "sample_endos", "build_sample_set", "sample_pairs",
           "build_linear_system", "solve_map", "validate_map", "synthesize", "compile_program"]

MONOMIAL_ORDER = "lex-desc-e0e1e2e3"


class DegenerateSamples(RuntimeError):
    pass


class MapInvalid(AssertionError):
    def __init__(self, msg, p=None, divisor=None):
        super().__init__(msg)
        self.p = p
        self.divisor = divisor


class BoundTooSmall(ValueError):
    pass


def monomials(N: int) -> list[tuple]:
    """Exponent tuples of degree N in 4 variables, lex-descending (x0^N first)."""
    return sorted((e for e in itertools.product(range(N + 1), repeat=4) if sum(e) == N),
                  reverse=True)


def monomial_count(N: int) -> int:
    return (N + 1) * (N + 2) * (N + 3) // 6


def _mono_values(v, monos):
    """All monomial values at v, sharing products through a memo."""
    one = v[0] * 0 + 1
    memo = {(0, 0, 0, 0): one}

    def get(e):
        if e in memo:
            return memo[e]
        k = max(i for i in range(4) if e[i])
        parent = e[:k] + (e[k] - 1,) + e[k + 1:]
        val = get(parent) * v[k]
        memo[e] = val
        return val

    return [get(e) for e in monos]


def _divides(a, e):
    return all(x <= y for x, y in zip(a, e))


def _plan_products(targets):
    """Pick a factorisation e = a * b for every monomial needed, level by level.

    Targets of degree d are covered greedily by factors of degree d - d // 2,
    favouring factors that are needed anyway; factors and cofactors join the
    next levels.  For the degree-5 maps this gives all squares, a handful of
    cubes and one product per target.
    """
    need = set(targets)
    recipe = {}
    top = max((sum(e) for e in need), default=0)
    for d in range(top, 1, -1):
        left = {e for e in need if sum(e) == d}
        hi = d - d // 2
        while left:
            cands = {}
            for e in left:
                for a in _sub_monomials(e, hi):
                    cands.setdefault(a, []).append(e)
            a = max(sorted(cands), key=lambda c: (len(cands[c]), c in need))
            for e in cands[a]:
                b = tuple(x - y for x, y in zip(e, a))
                recipe[e] = (a, b)
                need.update((a, b))
                left.discard(e)
    return recipe


def _sub_monomials(e, k):
    for a in itertools.product(*(range(x + 1) for x in e)):
        if sum(a) == k:
            yield a


def compile_program(monos, rows):
    """Straight-line program for the kernels: (instructions, sparse rows, slot count).

    Slots 0..3 hold the coordinates; each instruction ``(t, a, b)`` sets
    slot t to slot a times slot b.  Only monomials with a nonzero coefficient
    (and the factors chosen for them) are built.
    """
    used = sorted({j for row in rows for j, c in enumerate(row) if c})
    if any(sum(monos[j]) == 0 for j in used):
        raise ValueError("degree-0 maps are not supported")
    slot = {tuple(int(i == k) for k in range(4)): i for i in range(4)}
    recipe = _plan_products([monos[j] for j in used])
    instr = []
    for e in sorted(recipe, key=lambda e: (sum(e), e)):
        a, b = recipe[e]
        slot[e] = len(slot)
        instr.append((slot[e], slot[a], slot[b]))
    sparse = [[(slot[monos[j]], c) for j, c in enumerate(row) if c] for row in rows]
    return tuple(instr), tuple(tuple(r) for r in sparse), len(slot)


@dataclass(frozen=True)
class Sqrt5Map:
    """Four degree-N forms in x0..x3, coefficients in monomial order."""

    h: int
    degree: int
    coefficients: tuple
    validated: bool = False

    def __post_init__(self):
        M = monomial_count(self.degree)
        rows = tuple(tuple(int(c) for c in row) for row in self.coefficients)
        if len(rows) != 4 or any(len(r) != M for r in rows):
            raise ValueError("expected 4 rows of %d coefficients" % M)
        object.__setattr__(self, "coefficients", rows)

    @cached_property
    def monomials(self) -> list:
        return monomials(self.degree)

    @cached_property
    def program(self):
        return compile_program(self.monomials, self.coefficients)

    def content(self) -> int:
        return reduce(gcd, (c for row in self.coefficients for c in row), 0)

    def terms(self, i: int) -> dict:
        """Nonzero terms of phi_i as {exponent tuple: coefficient}."""
        return {e: c for e, c in zip(self.monomials, self.coefficients[i]) if c}

    def evaluate(self, v):
        """Plain evaluation (ints, rationals, field elements)."""
        vals = _mono_values(tuple(v), self.monomials)
        zero = v[0] * 0
        return tuple(sum((c * m for c, m in zip(row, vals) if c), zero)
                     for row in self.coefficients)

    def evaluate_mod(self, v, modulus: int):
        return tuple(x % modulus for x in self.evaluate(tuple(int(c) % modulus for c in v)))

    def mark_validated(self) -> "Sqrt5Map":
        return replace(self, validated=True)


@dataclass(frozen=True)
class SamplePair:
    source: KummerPoint
    image: KummerPoint


def sample_endos(B: int):
    """Tuples (a, b, c, d) in [-B, B]^4, sorted by norm then lexicographically.

    The zero tuple is skipped, and so is one of each +-pair (first nonzero
    coordinate positive), since kappa cannot tell P from -P.
    """
    tups = [t for t in itertools.product(range(-B, B + 1), repeat=4)
            if any(t) and next(x for x in t if x) > 0]
    tups.sort(key=lambda t: (sum(x * x for x in t), t))
    return tups


def build_sample_set(curve: Curve, Q0: MumfordDivisor, B: int, target: int) -> list:
    """At least ``target`` distinct divisors [alpha] Q0, no P and -P together."""
    if target <= 0:
        raise ValueError("target must be positive")
    seen = set()
    out = []
    for t in sample_endos(B):
        D = apply_endo(curve, Q0, t)
        if D.is_identity:
            continue
        key = (D.u, D.v)
        neg = (D.u, tuple(-c for c in D.v))
        if key in seen or neg in seen:
            continue
        seen.add(key)
        out.append(D)
        if len(out) == target:
            return out
    raise BoundTooSmall("only %d samples available with B = %d (need %d)" % (len(out), B, target))


def sample_pairs(curve: Curve, divisors) -> list:
    return [SamplePair(kappa(curve, D), kappa(curve, sqrt5_on_jacobian(curve, D)))
            for D in divisors]


def _to_cyclo_ints(point) -> list:
    """Scale a projective point over Q(z) so all coordinates lie in Z[z]."""
    cs = [CyclotomicNumber.coerce(x) for x in point]
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator_lcm() for c in cs), 1)
    return [c * den for c in cs]


def _int_coords(x: CyclotomicNumber) -> list:
    return [int(c) for c in x.c]


@dataclass
class InterpolationSystem:
    """The interpolation matrix for a set of sample pairs.

    Columns of the full matrix: a_{i,mu} at ``i*M + mu`` (4M of them), then
    the four Q-coordinates of each lambda_v.  Every Q(z)-equation contributes
    four rational rows, one per basis coordinate.
    """

    pairs: list
    degree: int
    monos: list = field(init=False)
    _sources: list = field(init=False, repr=False)
    _images: list = field(init=False, repr=False)
    _mvals: list = field(init=False, repr=False)

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("empty sample set")
        self.monos = monomials(self.degree)
        self._sources = [_to_cyclo_ints(p.source) for p in self.pairs]
        self._images = [_to_cyclo_ints(p.image) for p in self.pairs]
        self._mvals = [_mono_values(v, self.monos) for v in self._sources]

    @property
    def M(self) -> int:
        return len(self.monos)

    @property
    def a_columns(self) -> int:
        return 4 * self.M

    @property
    def shape(self) -> tuple:
        s = len(self.pairs)
        return (16 * s, 4 * self.M + 4 * s)

    def full_rows(self):
        """Rows of the full matrix as sparse {column: integer} dicts."""
        M, s0 = self.M, 4 * self.M
        zpow = [CyclotomicNumber(1), CyclotomicNumber(0, 1), CyclotomicNumber(0, 0, 1),
                CyclotomicNumber(0, 0, 0, 1)]
        for s, (mv, w) in enumerate(zip(self._mvals, self._images)):
            lam_terms = [[_int_coords(-(zpow[t] * w[i])) for t in range(4)] for i in range(4)]
            for i in range(4):
                for k in range(4):
                    row = {}
                    for mu, val in enumerate(mv):
                        c = int(val.c[k])
                        if c:
                            row[i * M + mu] = c
                    for t in range(4):
                        c = lam_terms[i][t][k]
                        if c:
                            row[s0 + 4 * s + t] = c
                    yield row

    def dense_full(self) -> list:
        ncols = self.shape[1]
        out = []
        for r in self.full_rows():
            row = [0] * ncols
            for j, c in r.items():
                row[j] = c
            out.append(row)
        return out

    def pivot_index(self, s: int) -> int:
        return next(j for j in range(4) if self._images[s][j])

    def reduced_rows(self) -> list:
        """Integer rows in the a-unknowns only (lambda_v eliminated)."""
        M = self.M
        rows = []
        for s, (mv, w) in enumerate(zip(self._mvals, self._images)):
            j = self.pivot_index(s)
            for i in range(4):
                if i == j:
                    continue
                left = [_int_coords(m * w[j]) for m in mv]
                right = [_int_coords(m * w[i]) for m in mv]
                for k in range(4):
                    row = [0] * (4 * M)
                    for mu in range(M):
                        row[i * M + mu] = left[mu][k]
                        row[j * M + mu] = -right[mu][k]
                    rows.append(row)
        return rows

    def phi_values(self, coeffs) -> list:
        """phi_i(v) over Z[z] for every sample (coeffs: 4 rows of integers)."""
        out = []
        zero = CyclotomicNumber(0)
        for mv in self._mvals:
            out.append([sum((m * c for m, c in zip(mv, row) if c), zero) for row in coeffs])
        return out

    def lambdas(self, coeffs) -> list:
        vals = self.phi_values(coeffs)
        res = []
        for s, phi in enumerate(vals):
            j = self.pivot_index(s)
            res.append(phi[j] / self._images[s][j])
        return res


def build_linear_system(pairs, N: int) -> InterpolationSystem:
    return InterpolationSystem(list(pairs), N)


def _strip_monomial_factor(N, monos, rows):
    nz = [monos[j] for row in rows for j, c in enumerate(row) if c]
    common = tuple(min(e[k] for e in nz) for k in range(4))
    g = sum(common)
    if g == 0:
        return N, rows
    newN = N - g
    new_monos = monomials(newN)
    index = {e: j for j, e in enumerate(new_monos)}
    new_rows = []
    for row in rows:
        r = [0] * len(new_monos)
        for j, c in enumerate(row):
            if c:
                e = tuple(a - b for a, b in zip(monos[j], common))
                r[index[e]] = c
        new_rows.append(r)
    log.info("removed common monomial factor %s", common)
    return newN, new_rows


def solve_map(system: InterpolationSystem, h: int, method: str = "modular") -> Sqrt5Map:
    """Pick a kernel representative with every lambda_v nonzero and tidy it up."""
    ncols = system.a_columns
    rows = system.reduced_rows()
    if method == "modular":
        basis = linalg.modular_kernel(rows, ncols)
    elif method == "bareiss":
        basis = linalg.bareiss_kernel(rows, ncols)
    else:
        raise ValueError("unknown method %r" % method)
    log.info("kernel dimension %d", len(basis))
    M = system.M
    best = None
    for vec in basis:
        iv = linalg.primitive_integer_vector(vec)
        coeffs = [iv[i * M:(i + 1) * M] for i in range(4)]
        if not all(any(r) for r in coeffs):
            continue
        if not all(system.lambdas(coeffs)):
            continue
        key = (max(abs(x) for x in iv), tuple(iv))
        if best is None or key < best[0]:
            best = (key, coeffs)
    if best is None:
        raise DegenerateSamples("no kernel vector has every lambda_v nonzero")
    coeffs = best[1]
    N, coeffs = _strip_monomial_factor(system.degree, system.monos, coeffs)
    g = reduce(gcd, (c for r in coeffs for c in r), 0)
    coeffs = [[c // g for c in r] for r in coeffs]
    smap = Sqrt5Map(int(h), N, tuple(tuple(r) for r in coeffs))
    # exact check on every sample: phi(v) must be proportional to w
    for p in system.pairs:
        got = smap.evaluate(tuple(CyclotomicNumber.coerce(x) for x in p.source))
        if not projectively_equal(got, tuple(p.image)):
            raise DegenerateSamples("solution does not reproduce a sample pair")
    return smap


@dataclass
class ValidationReport:
    h: int
    trials: int
    per_prime: dict = field(default_factory=dict)  # p -> number of agreeing trials

    @property
    def ok(self) -> bool:
        return bool(self.per_prime) and all(v == self.trials for v in self.per_prime.values())


def validation_primes(h: int, count: int, start: int = 1 << 20):
    """The first ``count`` primes p = 1 (mod 5) above ``start`` with p not dividing 10h."""
    from sympy import nextprime
    out = []
    p = start
    while len(out) < count:
        p = nextprime(p)
        if p % 5 == 1 and h % p:
            out.append(p)
    return out


def validate_map(smap: Sqrt5Map, h: int | None = None, trials: int = 50, primes: int = 5,
                 seed: int = 0, start: int = 1 << 20) -> ValidationReport:
    """Randomized check that smap(kappa(D)) = kappa([sqrt 5] D) over F_p."""
    h = smap.h if h is None else int(h)
    report = ValidationReport(h, trials)
    for p in validation_primes(h, primes, start):
        F = PrimeField(p)
        curve = Curve(h, F)
        rng = random.Random(seed * 1000003 + p)
        good = 0
        for _ in range(trials):
            D = random_divisor(curve, rng)
            src = [int(c) for c in kappa(curve, D)]
            want = [int(c) for c in kappa(curve, sqrt5_on_jacobian(curve, D))]
            got = smap.evaluate_mod(src, p)
            if not projectively_equal(got, want, p):
                report.per_prime[p] = good
                raise MapInvalid("map disagrees with [sqrt 5] over F_%d" % p, p, D)
            good += 1
        report.per_prime[p] = good
    return report


def synthesize(h: int, alpha, beta, B: int = 4, npairs: int = 120, degree: int = 5,
               fallback_degree: int = 6, trials: int = 50, primes: int = 5,
               method: str = "modular") -> Sqrt5Map:
    """Full pipeline from a rational point (alpha, beta) on y^2 = x^5 + h."""
    F = CyclotomicField()
    curve = Curve(h, F)
    Q0 = embed_point(curve, Rational(alpha), Rational(beta))
    divisors = build_sample_set(curve, Q0, B, npairs)
    pairs = sample_pairs(curve, divisors)
    last_err = None
    for N in (degree, fallback_degree):
        if N is None:
            continue
        need = -(-4 * monomial_count(N) // 3)
        if len(pairs) < need:
            divisors = build_sample_set(curve, Q0, B, need)
            pairs = sample_pairs(curve, divisors)
        try:
            smap = solve_map(build_linear_system(pairs, N), h, method=method)
        except DegenerateSamples as exc:
            log.warning("degree %d failed: %s", N, exc)
            last_err = exc
            continue
        validate_map(smap, trials=trials, primes=primes)
        return smap.mark_validated()
    raise last_err
