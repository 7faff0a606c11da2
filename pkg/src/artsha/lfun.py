"""Exact assembly and verification of L(S_a, T).

The L-function is the product over orbits ``o`` of

    1 - γ(o) Kl(o) T^{|o|} + γ(o)² q^{|o|} T^{2|o|}

with coefficients in Z[ζ_{3p}].  Orbits are grouped into Galois-stable
blocks (see :attr:`artsha.family.Level.galois_blocks`); each block product
is computed in Z[ζ_{3p}][T] and collapsed to Z[T] by an exact coordinate
check, and the integer block polynomials are multiplied in a balanced tree
using Kronecker substitution on gmpy2 integers.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import gmpy2
import mpmath
import numpy as np

from .cyclo import DEFAULT_PRECISION, ring
from .family import get_level

RH_TOLERANCE = 1e-8


class IntegralityError(ArithmeticError):
    """A product that must lie in Z[T] has a non-rational coefficient."""


class VerificationError(AssertionError):
    """A property that must hold for every L-function failed."""


# -- integer polynomials --------------------------------------------------------


def _to_bytes(values, nbytes):
    return b"".join(int(v).to_bytes(nbytes, "little") for v in values)


def kronecker_multiply(a, b):
    """Product of two integer coefficient sequences (constant term first)."""
    if not a or not b:
        return ()
    amax = max(abs(x) for x in a)
    bmax = max(abs(x) for x in b)
    if amax == 0 or bmax == 0:
        return (0,) * (len(a) + len(b) - 1)
    bits = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8

    def pack(seq):
        pos = _to_bytes((x if x > 0 else 0 for x in seq), nbytes)
        neg = _to_bytes((-x if x < 0 else 0 for x in seq), nbytes)
        return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))

    n = len(a) + len(b) - 1
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes(((b"\x00" * (nbytes - 1)) + b"\x80") * n, "little")
    prod = int(pack(a) * pack(b)) + offset
    raw = prod.to_bytes(n * nbytes, "little")
    return tuple(int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
                 for i in range(n))


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, constant term first."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c) or (0,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def __mul__(self, other):
        return IntPoly(kronecker_multiply(self.coeffs, other.coeffs))

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def evaluate(self, x):
        """Exact value at a rational ``x``."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        n = len(self.coeffs) - 1
        acc = 0
        for i in range(n, -1, -1):
            acc = acc * num + self.coeffs[i] * den ** (n - i)
        return Fraction(acc, den ** n)

    def to_json(self, **extra):
        return dict(extra, coeffs=[str(c) for c in self.coeffs])


def product_tree(polys):
    """Balanced-tree product of a list of :class:`IntPoly`."""
    polys = list(polys)
    if not polys:
        return IntPoly((1,))
    while len(polys) > 1:
        nxt = [polys[i] * polys[i + 1] for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


# -- products in Z[ζ][T] --------------------------------------------------------


def _mult_matrix(cring, coords):
    """Rows ``i`` hold the coordinates of ``ζ^i · x``."""
    phi, poly = cring.phi, cring.poly
    rows = []
    vec = [int(c) for c in coords]
    for _ in range(phi):
        rows.append(vec)
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            vec = [v - top * poly[k] for k, v in enumerate(vec)]
    return np.array(rows, dtype=object)


def zeta_poly_product(n, factors, start=None):
    """Multiply trinomials ``1 + b T^d + c T^{2d}`` over Z[ζ_n].

    ``factors`` holds ``(d, b_coords, c_coords)``.  Returns an object array
    of shape ``(degree + 1, φ(n))``.
    """
    cring = ring(n)
    if start is None:
        acc = np.zeros((1, cring.phi), dtype=object)
        acc[0, 0] = 1
    else:
        acc = start
    for d, b, c in factors:
        out = np.zeros((acc.shape[0] + 2 * d, cring.phi), dtype=object)
        out[:acc.shape[0]] += acc
        out[d:d + acc.shape[0]] += acc.dot(_mult_matrix(cring, b))
        out[2 * d:2 * d + acc.shape[0]] += acc.dot(_mult_matrix(cring, c))
        acc = out
    return acc


def collapse(zpoly):
    """Integer coefficients of a Z[ζ][T] polynomial, or raise."""
    if zpoly.shape[1] > 1 and any(x != 0 for x in zpoly[:, 1:].ravel()):
        raise IntegralityError("coefficient outside Z")
    return IntPoly(tuple(int(x) for x in zpoly[:, 0]))


def _block_polynomial(args):
    n, factors = args
    return collapse(zeta_poly_product(n, factors)).coeffs


def _block_jobs(level):
    n = level.ring.n
    jobs = []
    for block in level.galois_blocks:
        factors = []
        for i in block:
            d, b, c = level.factor(i)
            factors.append((d, b.coords, c.coords))
        jobs.append((n, factors))
    return jobs


def block_polynomials(level, jobs=1):
    work = _block_jobs(level)
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_block_polynomial, work))
    else:
        results = [_block_polynomial(w) for w in work]
    return [IntPoly(r) for r in results]


def full_zeta_product(level):
    """The whole product in Z[ζ_{3p}][T] without blockwise collapse."""
    factors = []
    for i in range(len(level.orbits)):
        d, b, c = level.factor(i)
        factors.append((d, b.coords, c.coords))
    return zeta_poly_product(level.ring.n, factors)


def expected_degree(q, a):
    return 4 * (q ** a - 1)


def l_polynomial(q, a, precision_bits=DEFAULT_PRECISION, psi_scale=1, jobs=1,
                 min_char=7, level=None):
    """L(S_a, T) as an exact :class:`IntPoly`."""
    level = level or get_level(q, a, precision_bits, psi_scale, min_char)
    L = product_tree(block_polynomials(level, jobs))
    if L.degree != expected_degree(q, a):
        raise VerificationError(f"degree {L.degree} != {expected_degree(q, a)}")
    if L[0] != 1:
        raise VerificationError("constant term is not 1")
    return L


# -- verification --------------------------------------------------------------


def verify_functional_equation(L, q, a=None):
    """The sign ``w`` with ``a_{b-i} = w q^{b-2i} a_i`` for all ``i``."""
    b = L.degree
    for w in (1, -1):
        ok = True
        for i in range(b + 1):
            lhs = L[b - i]
            e = b - 2 * i
            if e >= 0:
                ok = lhs == w * q ** e * L[i]
            else:
                ok = lhs * q ** (-e) == w * L[i]
            if not ok:
                break
        if ok:
            return w
    raise VerificationError("no sign satisfies the functional equation")


# -- exact polynomial arithmetic over Z (constant term first) -------------------


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _primitive(a):
    """Divide by the positive content; the leading coefficient keeps its sign."""
    g = 0
    for x in a:
        g = gcd(g, x)
    return [x // g for x in a] if g > 1 else list(a)


def _derivative(a):
    return _trim([i * a[i] for i in range(1, len(a))] or [0])


def _pseudo_rem(a, b):
    """Remainder of ``lc(b)^k a`` by ``b`` for an even ``k``, so it differs from
    the true remainder by a positive factor."""
    a, b = _trim(a), _trim(b)
    lc = b[-1]
    db = len(b) - 1
    r = list(a)
    steps = 0
    while len(r) - 1 >= db and any(r):
        top = r[-1]
        shift = len(r) - 1 - db
        r = [lc * x for x in r]
        for i, c in enumerate(b):
            r[i + shift] -= top * c
        r = _trim(r[:-1] or [0])
        steps += 1
    if lc < 0 and steps % 2:
        r = [-x for x in r]
    return _primitive(r)


def _gcd(a, b):
    a, b = _primitive(_trim(a)), _primitive(_trim(b))
    while any(b):
        a, b = b, _pseudo_rem(a, b)
    return a


def _exact_div(a, b):
    """``a / b`` over Q, returned as a primitive integer polynomial."""
    a, b = [Fraction(x) for x in _trim(a)], _trim(b)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        out[k] = c
        for i, x in enumerate(b):
            a[k + i] -= c * x
    if any(a):
        raise ArithmeticError("division is not exact")
    den = 1
    for c in out:
        den = den * c.denominator // gcd(den, c.denominator)
    return _primitive([int(c * den) for c in out])


def _sign_at(a, x):
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _sturm_count(f, lo, hi):
    """Distinct real roots of a squarefree ``f`` in ``(lo, hi]``."""
    seq = [f, _primitive(_derivative(f))]
    while len(seq[-1]) > 1:
        r = _pseudo_rem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append([-x for x in r])

    def changes(x):
        signs = [s for s in (_sign_at(p, x) for p in seq) if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return changes(lo) - changes(hi)


def trace_polynomial(poly, q):
    """``R`` with ``q^m F(z/q) = z^m R(z + 1/z)`` for a palindromic ``F(z/q)``.

    ``poly`` must satisfy the functional equation with sign +1 and have even
    degree ``2m``.  Returns integer coefficients of ``R`` (constant first).
    """
    b = poly.degree
    if b % 2 or verify_functional_equation(poly, q) != 1:
        raise VerificationError("polynomial is not palindromic with sign +1")
    m = b // 2
    # c_k = q^m · (coefficient of z^{m-k}) = a_{m-k} q^k
    c = [poly[m - k] * q ** k for k in range(m + 1)]
    out = [0] * (m + 1)
    out[0] = c[0]
    # z^k + z^{-k} = D_k(y): D_0 = 2, D_1 = y, D_k = y D_{k-1} - D_{k-2}
    d_prev, d_cur = [2], [0, 1]
    for k in range(1, m + 1):
        for i, x in enumerate(d_cur):
            out[i] += c[k] * x
        nxt = [0] + d_cur
        for i, x in enumerate(d_prev):
            nxt[i] -= x
        d_prev, d_cur = d_cur, nxt
    return _trim(out)


@dataclass(frozen=True)
class Certificate:
    """Exact check that every root of ``F(z/q)`` lies on the unit circle."""

    degree: int
    distinct: int
    real_in_range: int
    numeric_deviation: float

    @property
    def certified(self):
        return self.distinct == self.real_in_range


def certify_unit_circle(poly, q):
    """Certify the Riemann hypothesis for one palindromic integer polynomial.

    With ``y = z + 1/z`` all roots lie on ``|z| = 1`` exactly when all roots
    of ``R(y)`` are real and in ``[-2, 2]``.  That is decided by comparing
    the degree of the squarefree part of ``R`` with a Sturm count.  The
    numeric deviation comes from the (simple) roots of the squarefree part.
    """
    R = trace_polynomial(poly, q)
    if len(R) == 1:
        return Certificate(poly.degree, 0, 0, 0.0)
    sf = _exact_div(R, _gcd(R, _derivative(R)))
    n = len(sf) - 1
    count = 0
    work = sf
    for end in (-2, 2):
        if _sign_at(work, end) == 0:
            work = _exact_div(work, [-end, 1])
            count += 1
    if len(work) > 1:
        count += _sturm_count(work, -2, 2)
    top = max(abs(x) for x in sf)
    ys = np.roots([x / top for x in reversed(sf)]) if n else np.array([])
    dev = 0.0
    for y in ys:
        disc = np.sqrt(complex(y) * complex(y) - 4)
        for z in ((y + disc) / 2, (y - disc) / 2):
            dev = max(dev, abs(abs(z) - 1.0) / q)
    return Certificate(poly.degree, n, count, float(dev))


@dataclass(frozen=True)
class RHReport:
    degree: int
    tolerance: float
    factor_deviation: float
    numeric_deviation: float
    certified: bool
    n_factors: int

    @property
    def max_deviation(self):
        vals = [x for x in (self.factor_deviation, self.numeric_deviation) if x is not None]
        return max(vals) if vals else None

    @property
    def ok(self):
        return self.certified and self.max_deviation is not None \
            and self.max_deviation < self.tolerance


def factor_root_deviation(level):
    """Max over orbits of ``| |T| - 1/q |`` for the roots of each factor.

    The roots satisfy ``T^{|o|} = 1/(γ κ_i)``, so ``|T| = |γ κ_i|^{-1/|o|}``.
    """
    worst = mpmath.mpf(0)
    with mpmath.workprec(level.precision_bits):
        for gv, kv, o in zip(level.gauss_values, level.kloosterman_values, level.orbits):
            zg = abs(gv.value.embed(level.precision_bits)[0])
            for kappa in (kv.kappa1, kv.kappa2):
                t = (zg * abs(kappa)) ** (-mpmath.mpf(1) / o.size)
                worst = max(worst, abs(t - mpmath.mpf(1) / level.q))
    return float(worst)


def verify_riemann_hypothesis(L, q, tol=RH_TOLERANCE, level=None, factors=None):
    """Check that every root of ``L`` has absolute value ``1/q``.

    ``factors`` (integer polynomials whose product is ``L``, such as the
    Galois block polynomials) are certified one at a time; otherwise ``L``
    itself is.  With ``level`` the closed-form roots of every orbit factor
    are measured as well.
    """
    factor_dev = factor_root_deviation(level) if level is not None else None
    if factors is None:
        factors = [L]
    elif product_tree(factors) != L:
        raise VerificationError("factors do not multiply to L")
    certs = [certify_unit_circle(f, q) for f in factors if f.degree > 0]
    report = RHReport(L.degree, tol, factor_dev,
                      max((c.numeric_deviation for c in certs), default=0.0),
                      all(c.certified for c in certs), len(certs))
    if not report.ok:
        raise VerificationError(
            f"root off the critical circle (certified={report.certified}, "
            f"deviation={report.max_deviation:.3e})")
    return report


def special_value(L, q):
    """Exact ``L(1/q)``; positive for every surface in the family."""
    val = L.evaluate(Fraction(1, q))
    if val == 0:
        raise VerificationError("L vanishes at 1/q")
    if val < 0:
        raise VerificationError("L(1/q) is negative")
    return val


@dataclass(frozen=True)
class AngleProduct:
    log_value: mpmath.mpf
    log_error: mpmath.mpf
    min_factor: mpmath.mpf

    @property
    def value(self):
        return mpmath.exp(self.log_value)


def special_value_angles(q, a, precision=DEFAULT_PRECISION, level=None, min_char=7):
    """``Π_o 4|sin((ε+θ)/2) sin((ε−θ)/2)|`` over all orbits, in log form."""
    level = level or get_level(q, a, precision, 1, min_char)
    with mpmath.workprec(level.precision_bits):
        total = mpmath.mpf(0)
        err = mpmath.mpf(0)
        smallest = mpmath.inf
        for gv, kv in zip(level.gauss_values, level.kloosterman_values):
            eps, th = gv.angle, kv.angle
            f = 4 * abs(mpmath.sin((eps + th) / 2) * mpmath.sin((eps - th) / 2))
            if f <= 0:
                raise VerificationError("vanishing sine factor")
            smallest = min(smallest, f)
            total += mpmath.log(f)
            # each factor is 2-Lipschitz in each angle
            err += 4 * (gv.angle_err + kv.angle_err) / f
        return AngleProduct(total, err, smallest)


def log_special_value(val):
    """Natural log of a positive Fraction, accurate for huge numerators."""
    with mpmath.workprec(128):
        return mpmath.log(val.numerator) - mpmath.log(val.denominator)
