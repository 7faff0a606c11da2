"""BSD-side invariants of S_a and the Tate-Shafarevich estimate.

Rank 0 and ``Reg = 1`` are inputs here; they follow from ``L(1/q) ≠ 0``,
which :func:`artsha.lfun.special_value` asserts.  The BSD identity is only
used solved for ``|Sha|``:

    |Sha| = L* · |tors|² · H / (q² · c_∞),    H = q^h,  h = q^a + 1,

with every input an exact rational.  ``c_∞`` is known only to divide 9 and
the torsion only through a bound, so the report enumerates candidates.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import gmpy2
import mpmath
import numpy as np

from .family import get_level
from .ffield import FieldParams, field_suite
from .lfun import log_special_value, special_value

C_INFINITY = (1, 3, 9)


class InvariantError(AssertionError):
    """An internal consistency check on the BSD invariants failed."""


@dataclass(frozen=True)
class Invariants:
    q: int
    a: int
    h: int
    conductor_degree: int
    conductor_exponents: dict
    tamagawa_finite: int
    tamagawa_infinity: tuple
    rank: int = 0
    regulator: int = 1

    @property
    def log_height(self):
        """``log H = h log q``."""
        return self.h * math.log(self.q)

    @property
    def l_degree(self):
        return self.conductor_degree - 8

    def to_json(self):
        return dict(q=self.q, a=self.a, h=str(self.h), H_exponent=str(self.h),
                    conductor_degree=str(self.conductor_degree),
                    conductor_exponents=self.conductor_exponents,
                    tamagawa_finite=self.tamagawa_finite,
                    tamagawa_infinity=list(self.tamagawa_infinity),
                    rank=self.rank, regulator=self.regulator)


def invariants(q, a, min_char=7):
    """Closed-form height, conductor and Tamagawa data."""
    FieldParams.from_q(q, min_char)
    qa = q ** a
    exps = {"finite_bad": 2, "infinity": 4, "good": 0}
    # the finite bad places are the factors of ℘² − 4, of total degree 2q^a
    deg_n = exps["finite_bad"] * 2 * qa + exps["infinity"]
    if deg_n != 4 * qa + 4:
        raise InvariantError("conductor degree")
    return Invariants(q, a, qa + 1, deg_n, exps, 1, C_INFINITY)


# -- torsion ---------------------------------------------------------------------


@dataclass(frozen=True)
class PlaceCount:
    """Local data of a good place ``v`` of degree ``d`` with ``℘(v) = w``."""

    degree: int
    label: str
    n1: int
    n2: int
    t1: int
    t2: int
    jacobian_order: int

    def to_json(self):
        return dict(degree=self.degree, place=self.label, N1=self.n1, N2=self.n2,
                    t1=self.t1, t2=self.t2, P1=str(self.jacobian_order))


def jacobian_order(qv, n1, n2):
    """``P_v(1)`` for a genus 2 curve from its counts over F_v and F_{v²}."""
    t1 = qv + 1 - n1
    t2 = qv * qv + 1 - n2
    if (t1 * t1 - t2) % 2:
        raise InvariantError("inconsistent point counts")
    e1, e2 = t1, (t1 * t1 - t2) // 2
    return 1 - e1 + e2 - qv * e1 + qv * qv, t1, t2


def weil_interval(qv):
    """Integer bounds for ``P_v(1)``: ``[(√q_v − 1)⁴, (√q_v + 1)⁴]``."""
    with mpmath.workprec(128):
        r = mpmath.sqrt(qv)
        return int(mpmath.ceil((r - 1) ** 4)), int(mpmath.floor((r + 1) ** 4))


def _fiber_affine(F, w, sub):
    """Affine points of ``y² = x⁶ + 2w x³ + w² − 4`` with ``x, y`` in ``sub``."""
    x3 = F.pow(sub, 3)
    two_w = F.add(w, w)
    four = F.encode([4 % F.p] + [0] * (F.degree - 1))
    rhs = F.add(F.add(F.mul(x3, x3), F.mul(x3, two_w)), F.sub(F.mul(w, w), four))
    roots = np.bincount(F.pow(sub, 2), minlength=F.size)
    return int(roots[rhs].sum())


def good_points(q, a, d, count, min_char=7):
    """Encodings (in F_{q^{2d}}) of the least elements of exact degree ``d``
    with ``℘_a(c)² ≠ 4``, one per place.

    For ``d > 1`` places are also required to have different values of
    ``℘_a`` up to conjugacy (``c`` and ``c + 1`` reduce to the same fiber).
    """
    params = FieldParams.from_q(q, min_char)
    F = field_suite(params, 2 * d)
    e = params.e
    four = int(F.encode([4 % F.p] + [0] * (F.degree - 1)))
    seen, seen_w, out = set(), set(), []
    for cand in np.sort(F.subfield_elements(e * d)):
        cand = int(cand)
        if cand in seen:
            continue
        if any(F.in_subfield(cand, e * k) for k in range(1, d) if d % k == 0):
            continue
        w = int(F.sub(F.pow(cand, q ** a), cand))
        if int(F.mul(w, w)) == four or (d > 1 and w in seen_w):
            continue
        seen.update(int(x) for x in F.frobenius_orbit(cand, q))
        seen_w.update(int(x) for x in F.frobenius_orbit(w, q))
        out.append(cand)
        if len(out) == count:
            return out
    raise InvariantError(f"fewer than {count} good places of degree {d}")


def count_fiber(q, a, d, c, min_char=7):
    """:class:`PlaceCount` for the place of degree ``d`` through ``c``, an
    encoding in F_{q^{2d}} of an element of exact degree ``d``."""
    params = FieldParams.from_q(q, min_char)
    F = field_suite(params, 2 * d)
    sub = F.subfield_elements(params.e * d)
    w = int(F.sub(F.pow(c, q ** a), c))
    qv = q ** d
    n1 = _fiber_affine(F, w, sub) + 2
    n2 = _fiber_affine(F, w, F.elements()) + 2
    order, t1, t2 = jacobian_order(qv, n1, n2)
    lo, hi = weil_interval(qv)
    if not lo <= order <= hi:
        raise InvariantError(f"P_v(1) = {order} outside the Weil interval")
    coords = [int(x) for x in F.digits(c)]
    return PlaceCount(d, f"deg{d}:c={coords}", n1, n2, t1, t2, order)


def extra_place_degree(a):
    """Least ``d ≥ 2`` not dividing ``a``.

    Places of degree dividing ``a`` lie where ``℘_a`` vanishes, so they all
    reduce to the same curve ``y² = x⁶ − 4``; a degree that does not divide
    ``a`` gives a genuinely different fiber.
    """
    d = 2
    while a % d == 0:
        d += 1
    return d


@dataclass(frozen=True)
class TorsionBound:
    bound: int
    prime_to_p: int
    places: tuple
    running_gcd: tuple

    @property
    def stabilized(self):
        return len(self.running_gcd) >= 3 and self.running_gcd[-1] == self.running_gcd[-2]

    def to_json(self):
        return dict(bound=str(self.bound), prime_to_p=str(self.prime_to_p),
                    running_gcd=[str(x) for x in self.running_gcd],
                    places=[p.to_json() for p in self.places],
                    caveat="only the prime-to-p part is certified by reduction")


def torsion_bound(q, a, degree_one=3, extra=2, min_char=7):
    """gcd of ``#J(F_v)`` over good places.

    Uses the first ``degree_one`` places ``t − c`` (``c`` in F_q, always good
    since ``℘_a(c) = 0``) and ``extra`` places of degree
    :func:`extra_place_degree`.
    """
    params = FieldParams.from_q(q, min_char)
    plan = [(1, degree_one)]
    if extra:
        plan.append((extra_place_degree(a), extra))
    places = [count_fiber(q, a, d, c, min_char)
              for d, n in plan for c in good_points(q, a, d, n, min_char)]
    running, g = [], 0
    for pl in places:
        g = gcd(g, pl.jacobian_order)
        running.append(g)
    p = params.p
    prime_to_p = g
    while prime_to_p % p == 0:
        prime_to_p //= p
    return TorsionBound(g, prime_to_p, tuple(places), tuple(running))


def divisors(n):
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


# -- Sha ------------------------------------------------------------------------


@dataclass(frozen=True)
class ShaCandidate:
    c_inf: int
    torsion: int
    value: Fraction

    @property
    def integral(self):
        return self.value.denominator == 1 and self.value > 0


@dataclass
class ShaReport:
    q: int
    a: int
    special_value: Fraction
    invariants: Invariants
    torsion: TorsionBound
    candidates: list
    log_ratio: float
    bs_interval: tuple
    dim_sha: int = None
    notes: list = field(default_factory=list)

    @property
    def flagged(self):
        return [c for c in self.candidates if c.integral]

    def to_json(self):
        sv = self.special_value
        return dict(
            q=self.q, a=self.a,
            special_value={"num": str(sv.numerator), "den": str(sv.denominator),
                           "provenance": "exact"},
            invariants=self.invariants.to_json(),
            torsion=self.torsion.to_json(),
            candidates=[{"c_inf": c.c_inf, "torsion": str(c.torsion),
                         "num": str(c.value.numerator), "den": str(c.value.denominator),
                         "integral": c.integral} for c in self.candidates],
            log_special_over_log_height={"value": repr(self.log_ratio),
                                         "provenance": "numeric"},
            brauer_siegel_interval={"value": [repr(x) for x in self.bs_interval],
                                    "provenance": "numeric"},
            dim_sha=self.dim_sha, notes=self.notes)


def sha_value(lstar, inv, t, c_inf):
    return lstar * t * t * Fraction(inv.q) ** (inv.h - 2) / c_inf


def sha_candidates(lstar, inv, t_max):
    """Every ``(c_∞, t)`` with ``t | t_max``; at least one must be integral."""
    if lstar <= 0:
        raise InvariantError("special value must be positive in rank 0")
    out = [ShaCandidate(c, t, sha_value(lstar, inv, t, c))
           for c in inv.tamagawa_infinity for t in divisors(t_max)]
    if not any(c.integral for c in out):
        raise InvariantError("no integral Sha candidate")
    return out


def log_fraction(x):
    return float(log_special_value(Fraction(x)))


def brauer_siegel(lstar, inv, sha):
    """``log|Sha| / log H`` (``Reg = 1``) for a candidate ``sha``."""
    return log_fraction(sha) / inv.log_height


def ratio_special_height(lstar, inv):
    """``log L* / log H``."""
    return log_fraction(lstar) / inv.log_height


# -- dim Sha ----------------------------------------------------------------------


def dim_sha_formula(level):
    """``h − 2 − Σ_o Σ_i max{0, |o| − ord(γ(o)κ_i(o))}``.

    ``ord κ_i`` is 0 for one root and ``|o|`` for the other.
    """
    total = Fraction(0)
    for o in level.orbits:
        vg = level.valuation(o)
        for vk in (0, o.size):
            total += max(Fraction(0), o.size - vg - vk)
    h = level.q ** level.a + 1
    val = h - 2 - total
    if val.denominator != 1:
        raise InvariantError("dim Sha is not an integer")
    return int(val)


def coefficient_valuations(L, q):
    """``ord_p(a_i)/e`` for nonzero coefficients, as ``(i, Fraction)`` pairs."""
    params = FieldParams.from_q(q, min_char=2)
    p, e = params.p, params.e
    out = []
    for i, c in enumerate(L.coeffs):
        if c:
            _, k = gmpy2.remove(gmpy2.mpz(abs(c)), p)
            out.append((i, Fraction(int(k), e)))
    return out


def newton_polygon(L, q):
    """Lower convex hull of the coefficient valuations: list of
    ``(length, slope)`` segments.  Slope ``λ`` with length ``m`` means ``m``
    reciprocal roots of valuation ``λ``."""
    pts = coefficient_valuations(L, q)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [(x2 - x1, Fraction(y2 - y1) / (x2 - x1))
            for (x1, y1), (x2, y2) in zip(hull, hull[1:])]


def dim_sha_newton(L, q, a):
    """The same quantity from the Newton polygon of ``L``."""
    total = Fraction(0)
    for length, slope in newton_polygon(L, q):
        total += length * max(Fraction(0), 1 - slope)
    val = q ** a - 1 - total
    if val.denominator != 1:
        raise InvariantError("Newton polygon gives a non-integral dim Sha")
    return int(val)


def dim_sha(q, a, L, level=None):
    level = level or get_level(q, a)
    f, n = dim_sha_formula(level), dim_sha_newton(L, q, a)
    if f != n:
        raise InvariantError(f"dim Sha mismatch: formula {f}, Newton polygon {n}")
    if f != 0:
        raise InvariantError(f"dim Sha = {f} is nonzero")
    return f


def sha_report(q, a, L, level=None, torsion=None, min_char=7):
    """Assemble the full BSD/Sha report for one level."""
    level = level or get_level(q, a, min_char=min_char)
    inv = invariants(q, a, min_char)
    if inv.l_degree != L.degree:
        raise InvariantError(f"deg N − 8 = {inv.l_degree} but deg L = {L.degree}")
    lstar = special_value(L, q)
    torsion = torsion or torsion_bound(q, a, min_char=min_char)
    cands = sha_candidates(lstar, inv, torsion.bound)
    bs = [brauer_siegel(lstar, inv, c.value) for c in cands if c.integral]
    rep = ShaReport(q, a, lstar, inv, torsion, cands, ratio_special_height(lstar, inv),
                    (min(bs), max(bs)))
    rep.dim_sha = dim_sha(q, a, L, level)
    rep.notes.append("c_inf is only known to divide 9; all values are enumerated")
    rep.notes.append("torsion candidates run over divisors of a gcd of #J(F_v); "
                     "only the prime-to-p part of the bound is certified")
    return rep
