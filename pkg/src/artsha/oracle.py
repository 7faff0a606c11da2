"""Brute-force verifiers, independent of the fast paths.

* point counts on the auxiliary curves ``X: u³ = ℘(t)`` and
  ``Y: v + 1/v = ℘(t)`` (also in the form ``y² = ℘(t)² − 4``) over
  F_{q^k}, compared with the trace of Frobenius predicted by the Gauss and
  Kloosterman sums;
* raw summation of every Gauss and Kloosterman sum under a size budget;
* the Gauss/Kloosterman identity suite, checked exactly orbit by orbit;
* squarefreeness of ``℘(t)² − 4`` and the sextic discriminant identity.

Counts are histogram based: ``#{(u, t): u³ = ℘(t)}`` is the sum over ``t``
of the number of cube roots of ``℘(t)``, so a count over F_{q^k} costs
about ``2 q^k`` evaluations instead of ``q^{2k}``.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .chars import CharacterContext, dickson, gauss_valuation
from .family import get_level
from .ffield import FieldParams, field_suite
from .orbits import working_field

DEFAULT_BUDGET = 10 ** 7


class BudgetError(RuntimeError):
    """A brute-force request exceeds the evaluation budget."""


class OracleMismatch(AssertionError):
    """A fast-path value disagrees with its brute-force witness."""


@dataclass(frozen=True)
class CurveCount:
    curve: str
    q: int
    a: int
    k: int
    count: int
    affine: int
    at_infinity: int

    @property
    def genus(self):
        return self.q ** self.a - 1

    def weil_ok(self):
        qk = self.q ** self.k
        # |N - (q^k + 1)| <= 2 g q^{k/2}, squared to stay in integers
        return (self.count - qk - 1) ** 2 <= 4 * self.genus ** 2 * qk


def _count_field(q, k, budget, cost_factor, min_char):
    params = FieldParams.from_q(q, min_char)
    size = q ** k
    if cost_factor * size > budget:
        raise BudgetError(f"{cost_factor * size} evaluations exceed the budget {budget}")
    return field_suite(params, k)


def _wp(F, q, a, t):
    """``℘_a(t) = t^{q^a} − t`` on an array of encodings."""
    return F.sub(F.pow(t, q ** a), t)


def count_X(q, a, k, budget=DEFAULT_BUDGET, method="histogram", min_char=7):
    """Points of ``X: u³ = t^{q^a} − t`` over F_{q^k}, with its one point at
    infinity.  ``method="pairs"`` enumerates all ``(u, t)`` instead."""
    if k < 1:
        raise ValueError("k must be positive")
    cost = 2 if method == "histogram" else q ** k
    F = _count_field(q, k, budget, cost, min_char)
    elems = F.elements()
    wp = _wp(F, q, a, elems)
    if method == "histogram":
        roots = np.bincount(F.pow(elems, 3), minlength=F.size)
        affine = int(roots[wp].sum())
    elif method == "pairs":
        cubes = F.pow(elems, 3)
        affine = int(sum(np.count_nonzero(cubes == w) for w in wp))
    else:
        raise ValueError(f"unknown method {method!r}")
    return CurveCount("X", q, a, k, affine + 1, affine, 1)


def count_Y(q, a, k, budget=DEFAULT_BUDGET, model="v", min_char=7):
    """Points of ``Y`` over F_{q^k} with its two points at infinity.

    ``model="v"`` counts ``v ≠ 0`` with ``v + 1/v = ℘(t)``;
    ``model="hyperelliptic"`` counts ``y² = ℘(t)² − 4``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    F = _count_field(q, k, budget, 2, min_char)
    elems = F.elements()
    wp = _wp(F, q, a, elems)
    if model == "v":
        units = elems[1:]
        hits = np.bincount(F.add(units, F.inv(units)), minlength=F.size)
        affine = int(hits[wp].sum())
    elif model == "hyperelliptic":
        four = F.encode([4 % F.p] + [0] * (F.degree - 1))
        rhs = F.sub(F.mul(wp, wp), four)
        roots = np.bincount(F.pow(elems, 2), minlength=F.size)
        affine = int(roots[rhs].sum())
    else:
        raise ValueError(f"unknown model {model!r}")
    return CurveCount("Y", q, a, k, affine + 2, affine, 2)


# -- trace formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class TracePrediction:
    curve: str
    k: int
    count: int
    trace: int
    rounding_gap: float


def _predict(curve, q, k, total, level):
    tr = total.is_rational_integer()
    if tr is None:
        raise OracleMismatch(f"trace of Frobenius on H¹({curve}) is not a rational integer")
    with mpmath.workprec(level.precision_bits):
        z, _ = total.embed(level.precision_bits)
        gap = float(abs(z - mpmath.nint(z.real)))
        if int(mpmath.nint(z.real)) != tr:
            raise OracleMismatch("embedded trace rounds to the wrong integer")
    return TracePrediction(curve, k, q ** k + 1 - tr, tr, gap)


def predicted_X(q, a, k, level=None):
    """``q^k + 1 − Σ_{|o| divides k} |o| γ(o)^{k/|o|}``, exactly."""
    level = level or get_level(q, a)
    total = level.ring.zero()
    for o, g in zip(level.orbits, level.gammas):
        if k % o.size == 0:
            total = total + (g ** (k // o.size)) * o.size
    return _predict("X", q, k, total, level)


def predicted_Y(q, a, k, level=None):
    """``q^k + 1 − Σ_{|v| divides k} |v| (κ₁(v)^{k/|v|} + κ₂(v)^{k/|v|})``.

    A place of degree ``d`` carries ``d`` conjugate pairs of eigenvalues, so
    its contribution to the trace of ``Fr^k`` is ``d`` times the power sum.
    """
    level = level or get_level(q, a)
    total = level.ring.zero()
    for v, kl in zip(level.places, level.place_kloosterman):
        if k % v.size == 0:
            total = total + dickson(kl, q ** v.size, k // v.size) * v.size
    return _predict("Y", q, k, total, level)


@dataclass
class CountReport:
    q: int
    a: int
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r["match"] and r["weil"] for r in self.rows)


def point_count_check(q, a, k_max=3, budget=DEFAULT_BUDGET, level=None, min_char=7):
    """Compare counts on X and Y with the trace formulas for ``k ≤ k_max``.

    Extensions over the budget are recorded in ``skipped``, never truncated.
    """
    level = level or get_level(q, a, min_char=min_char)
    report = CountReport(q, a)
    for k in range(1, k_max + 1):
        for curve, counter, predictor in (("X", count_X, predicted_X),
                                          ("Y", count_Y, predicted_Y)):
            try:
                c = counter(q, a, k, budget=budget, min_char=min_char)
            except BudgetError:
                report.skipped.append((curve, k))
                continue
            pred = predictor(q, a, k, level)
            report.rows.append(dict(curve=curve, k=k, count=c.count,
                                    predicted=pred.count, trace=pred.trace,
                                    rounding_gap=pred.rounding_gap,
                                    match=c.count == pred.count, weil=c.weil_ok()))
    if not report.ok:
        bad = [r for r in report.rows if not (r["match"] and r["weil"])]
        raise OracleMismatch(f"point counts disagree: {bad}")
    return report


# -- raw character sums ------------------------------------------------------------


@dataclass
class SumsReport:
    q: int
    a: int
    budget: int
    gauss_checked: int = 0
    kloosterman_checked: int = 0
    skipped: int = 0


def direct_sums_check(q, a, budget=10 ** 6, level=None, min_char=7):
    """Recompute γ(o) and Kl(o) by raw summation for every orbit with
    ``q^{|o|} ≤ budget`` and require exact equality with the fast paths."""
    level = level or get_level(q, a, min_char=min_char)
    rep = SumsReport(q, a, budget)
    for i, o in enumerate(level.orbits):
        if q ** o.size > budget:
            rep.skipped += 1
            continue
        if level.gauss_direct(o) != level.gammas[i]:
            raise OracleMismatch(f"Gauss sum mismatch on orbit {i}")
        rep.gauss_checked += 1
        if level.kloosterman_direct(o) != level.kloostermans[i]:
            raise OracleMismatch(f"Kloosterman sum mismatch on orbit {i}")
        rep.kloosterman_checked += 1
    return rep


# -- polynomial sanity -------------------------------------------------------------


def _mod_np(a, f, p):
    """Remainder of ``a`` by ``f`` over F_p (numpy arrays, constant term first)."""
    a = np.array(a, dtype=np.int64) % p
    f = np.array(f, dtype=np.int64) % p
    n = len(f) - 1
    inv = pow(int(f[-1]), -1, p)
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i] * inv % p
        if c:
            a[i - n:i + 1] = (a[i - n:i + 1] - c * f) % p
    r = a[:n] if len(a) > n else a
    nz = np.nonzero(r)[0]
    return r[:nz[-1] + 1] if len(nz) else r[:0]


def poly_gcd_mod_p(a, b, p):
    """Monic gcd over F_p of two coefficient sequences (constant term first)."""
    a = np.array(a, dtype=np.int64) % p
    b = np.array(b, dtype=np.int64) % p
    a = a[:np.nonzero(a)[0][-1] + 1] if np.any(a) else a[:0]
    b = b[:np.nonzero(b)[0][-1] + 1] if np.any(b) else b[:0]
    while len(b):
        a, b = b, _mod_np(a, b, p)
    if not len(a):
        return a
    return a * pow(int(a[-1]), -1, p) % p


def wp_squared_minus_four(q, a):
    """Coefficients of ``(t^{q^a} − t)² − 4`` over F_p (it lies in F_p[t])."""
    p = FieldParams.from_q(q, min_char=2).p
    n = q ** a
    f = np.zeros(2 * n + 1, dtype=np.int64)
    f[2 * n] = 1
    f[n + 1] = -2 % p
    f[2] = 1
    f[0] = -4 % p
    return f % p, p


def _derivative_mod_p(f, p):
    return (np.arange(1, len(f), dtype=np.int64) * f[1:]) % p


def _bareiss_det(m):
    m = [list(r) for r in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(f, g):
    """Sylvester resultant of integer polynomials (constant term first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_det(rows)


def discriminant(f):
    """``(−1)^{n(n−1)/2} Res(f, f') / lc(f)`` over Z."""
    n = len(f) - 1
    df = [i * f[i] for i in range(1, n + 1)]
    res = resultant(f, df)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    val = Fraction(sign * res, f[-1])
    if val.denominator != 1:
        raise ArithmeticError("discriminant is not integral")
    return int(val)


def sextic_discriminant_formula(alpha, beta, gamma):
    """Closed form of ``disc(αx⁶ + βx³ + γ)``.

    The sign is positive: ``3⁶ (αγ)² (β² − 4αγ)³``.  With ``α = 1``,
    ``β = 2w``, ``γ = w² − 4`` it becomes ``2¹² 3⁶ (w² − 4)²``.
    """
    return 3 ** 6 * (alpha * gamma) ** 2 * (beta ** 2 - 4 * alpha * gamma) ** 3


def fiber_discriminant_formula(w):
    """``disc((x³ + w − 2)(x³ + w + 2)) = 2¹² 3⁶ (w² − 4)²``."""
    return 2 ** 12 * 3 ** 6 * (w * w - 4) ** 2


@dataclass(frozen=True)
class SquarefreeReport:
    q: int
    a: int
    gcd_degree: int
    discriminant_samples: int

    @property
    def squarefree(self):
        return self.gcd_degree == 0


def squarefree_check(q, a, samples=8, seed=0):
    """``gcd(f, f') = 1`` for ``f = ℘_a(t)² − 4`` over F_p, plus spot checks
    of the discriminant identity for ``αx⁶ + βx³ + γ``, both at random
    integer triples and at the fiber sextics ``x⁶ + 2wx³ + w² − 4``."""
    f, p = wp_squared_minus_four(q, a)
    g = poly_gcd_mod_p(f, _derivative_mod_p(f, p), p)
    rng = random.Random(seed)
    for i in range(samples):
        if i % 2:
            w = rng.randrange(-50, 50)
            al, be, ga = 1, 2 * w, w * w - 4
            if discriminant([ga, 0, 0, be, 0, 0, al]) != fiber_discriminant_formula(w):
                raise OracleMismatch(f"fiber discriminant fails at w = {w}")
        else:
            al, be, ga = (rng.choice([-1, 1]) * rng.randrange(1, 30) for _ in range(3))
        lhs = discriminant([ga, 0, 0, be, 0, 0, al])
        if lhs != sextic_discriminant_formula(al, be, ga):
            raise OracleMismatch(f"discriminant identity fails at {(al, be, ga)}")
    return SquarefreeReport(q, a, len(g) - 1, samples)


# -- identity suite -----------------------------------------------------------------


@dataclass
class IdentityReport:
    q: int
    a: int
    checked: dict = field(default_factory=dict)
    prime: tuple = None

    def tick(self, name):
        self.checked[name] = self.checked.get(name, 0) + 1


def relative_norm_to_zeta3(x):
    """``N_{Q(ζ_3p)/Q(ζ_3)}(x)`` as a pair ``(u, v)`` meaning ``u + v ζ_3``."""
    R = x.ring
    p = R.n // 3
    out = R.one()
    for k in R.unit_residues():
        if k % 3 == 1:
            out = out * x.galois(k)
    c = list(out.coords)
    u, v = c[0], c[p]
    c[0] = c[p] = 0
    if any(c):
        raise OracleMismatch("relative norm is not in Z[ζ_3]")
    return u, v


def _eisenstein_prime(p):
    """``(s, t)`` with ``s² − st + t² = p`` for a prime ``p ≡ 1 mod 3``."""
    for s in range(1, p):
        for t in range(0, s):
            if s * s - s * t + t * t == p:
                return s, t
    raise ValueError(f"{p} is not a norm from Z[ζ_3]")


def eisenstein_valuation(x, prime, p):
    """``ord_π(u + vω)`` for ``π = s + tω`` (``ω² = −1 − ω``); for ``p ≡ 2
    mod 3``, ``prime`` is None and ``π = p``."""
    u, v = x
    if u == 0 and v == 0:
        raise ValueError("valuation of zero")
    k = 0
    while True:
        if prime is None:
            if u % p or v % p:
                return k
            u, v = u // p, v // p
        else:
            s, t = prime
            # x · conj(π) with conj(π) = (s − t) − tω
            a, b = s - t, -t
            nu, nv = u * a - v * b, u * b + v * a - v * b
            if nu % p or nv % p:
                return k
            u, v = nu // p, nv // p
        k += 1


def identity_suite(q, a, level=None, budget=10 ** 6, min_char=7):
    """Exact checks of the Gauss identities (Ga 1)–(Ga 5) and the
    Kloosterman identities (Kl 1)–(Kl 4) on every orbit of level ``a``.

    Raw sums over F_{q^{2|o|}} (for Hasse-Davenport and the quadratic
    extension of Kloosterman sums) are computed in a field of twice the
    working degree, and only when ``q^{2|o|} ≤ budget``.
    """
    level = level or get_level(q, a, min_char=min_char)
    params = level.params
    p, e = params.p, params.e
    ctx = level.ctx
    big = CharacterContext(working_field(q, 2 * ctx.L, min_char), q, level.psi_scale)
    rep = IdentityReport(q, a)
    one_mod_three = q % 3 == 1
    primes = [None]
    if p % 3 == 1:
        s, t = _eisenstein_prime(p)
        primes = [(s, t), (s - t, -t)]
    # normalized valuations for each candidate prime, compared at the end
    ratios = {pr: [] for pr in primes}

    for i, o in enumerate(level.orbits):
        d = o.size
        qd = q ** d
        g = level.gammas[i]
        kl = level.kloostermans[i]
        a0 = o.log // ctx.step(d)
        # (Ga 1): γ γ̄ = q^{|o|}
        if g * g.conj() != level.ring.from_int(qd):
            raise OracleMismatch(f"(Ga 1) fails on orbit {i}")
        rep.tick("Ga1")
        # (Ga 5): valuation inside the Stickelberger window, matching the
        # closed formula for one consistent choice of prime
        val = level.valuation(o)
        if not Fraction(d, 3) <= val <= Fraction(2 * d, 3):
            raise OracleMismatch(f"(Ga 5) window fails on orbit {i}")
        norm = relative_norm_to_zeta3(g)
        for pr in primes:
            ratios[pr].append((i, Fraction(eisenstein_valuation(norm, pr, p), e * (p - 1)), val))
        rep.tick("Ga5")
        # (Kl 3): real, strictly inside the Weil bound
        if kl.conj() != kl:
            raise OracleMismatch(f"(Kl 3) reality fails on orbit {i}")
        kv = level.kloosterman_values[i]
        z, _ = kl.embed(level.precision_bits)
        with mpmath.workprec(level.precision_bits):
            tol = mpmath.ldexp(1, -(level.precision_bits // 2)) * qd
            if abs(z.imag) > tol or abs(z.real) >= 2 * mpmath.sqrt(qd):
                raise OracleMismatch(f"(Kl 3) bound fails on orbit {i}")
            # (Kl 2): κ₁ + κ₂ = Kl and κ₁κ₂ = q^{|o|}
            if abs(kv.kappa1 + kv.kappa2 - z.real) > tol or abs(kv.kappa1 * kv.kappa2 - qd) > tol:
                raise OracleMismatch(f"(Kl 2) fails on orbit {i}")
            sq = dickson(kl, qd, 2)
            if abs(sq.embed(level.precision_bits)[0] - (kv.kappa1 ** 2 + kv.kappa2 ** 2)) > tol * qd:
                raise OracleMismatch(f"(Kl 2) extension fails on orbit {i}")
        rep.tick("Kl2")
        rep.tick("Kl3")
        # (Kl 4): Kl is a 𝔭-adic unit, so exactly one of κ₁, κ₂ is
        if relative_norm_to_zeta3(kl)[0] % p == 0:
            raise OracleMismatch(f"(Kl 4) fails on orbit {i}")
        rep.tick("Kl4")
        if qd > budget:
            continue
        # (Ga 2): G(χ, ψ_α) = χ(α)⁻¹ G(χ, ψ_1)
        base = ctx.gauss_sum(d, o.j, 0)
        if ctx.gauss_sum(d, o.j, a0) != ctx.zeta3(-ctx.chi_exponent(d, o.j, ctx.field.exp[a0 * ctx.step(d)])) * base:
            raise OracleMismatch(f"(Ga 2) fails on orbit {i}")
        rep.tick("Ga2")
        # (Ga 3): constant along the orbit (j, α) ↦ (qj, α^{1/q})
        order = qd - 1
        nxt = (a0 * pow(q, d - 1, order)) % order
        if ctx.gauss_sum(d, (q * o.j) % 3, nxt) != g:
            raise OracleMismatch(f"(Ga 3) fails on orbit {i}")
        rep.tick("Ga3")
        # (Kl 1): Kl(α^q) = Kl(α)
        if ctx.kloosterman_sum(d, (a0 * q) % order) != kl:
            raise OracleMismatch(f"(Kl 1) fails on orbit {i}")
        rep.tick("Kl1")
        if qd * qd > budget:
            continue
        # (Ga 4) and the quadratic case of (Kl 2), over F_{q^{2|o|}}
        lift = a0 * (qd + 1)
        if big.gauss_sum(2 * d, o.j, lift) != big.gauss_sum(d, o.j, a0) ** 2:
            raise OracleMismatch(f"(Ga 4) fails on orbit {i}")
        rep.tick("Ga4")
        if big.kloosterman_sum(2 * d, lift) != dickson(big.kloosterman_sum(d, a0), qd, 2):
            raise OracleMismatch(f"(Kl 2) lift fails on orbit {i}")
        rep.tick("Kl2_lift")

    good = [pr for pr in primes if all(v == w for _, v, w in ratios[pr])]
    if not good:
        raise OracleMismatch("Gauss sum valuations do not match the closed formula "
                             "for any prime above p")
    rep.prime = good[0]
    if not one_mod_three and rep.prime is not None:
        raise OracleMismatch("unexpected split prime for q ≡ 2 mod 3")
    return rep
