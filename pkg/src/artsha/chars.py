"""Cubic Gauss sums and Kloosterman sums over subfields of a working field.

A subfield F_{q^d} of the working field F = F_{q^L} is the group generated
by ``g_d = g**m_d`` with ``m_d = (|F| - 1)/(q^d - 1)``, where ``g`` is the
table generator of F.  Characters are evaluated through discrete logs:

* the additive character ``ψ_{F_d,α}(x) = ζ_p^{Tr(αx)}`` uses a per-subfield
  table of absolute traces ``tr_d[k] = Tr(g_d**k)``;
* the cubic character is ``χ_d(g_d**k) = ζ_3^{c k}`` for a global ``c``
  in {1, 2} fixed by the identification of μ_3 with complex cube roots.

Sums come out as exact :class:`~artsha.cyclo.CycInt` values in Z[ζ_{3p}],
with ζ_3 = ζ_{3p}^p and ζ_p = ζ_{3p}^3.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
import numpy as np

from . import kernels
from .cyclo import DEFAULT_PRECISION, embed_complex, ring
from .ffield import prime_power
from .orbits import cube_order

ANGLE_RESOLUTION = mpmath.mpf(10) ** -30
MAX_PRECISION = 4096


class PrecisionError(ArithmeticError):
    """An embedded quantity could not be resolved at the allowed precision."""


class CharacterContext:
    """Characters on the subfields of one working field.

    ``psi_scale`` replaces the base additive character ``x ↦ ζ_p^x`` with
    ``x ↦ ζ_p^{scale·x}``; every reported invariant must be independent
    of it.
    """

    def __init__(self, field, q, psi_scale=1):
        p, e = prime_power(q)
        if field.p != p or field.degree % e:
            raise ValueError("working field does not contain F_q")
        if psi_scale % p == 0:
            raise ValueError("additive twist must be a unit mod p")
        self.field = field
        self.q = q
        self.p = p
        self.e = e
        self.L = field.degree // e
        self.s = cube_order(q)
        if self.L % self.s:
            raise ValueError("working field does not contain the cube roots of unity")
        self.psi_scale = psi_scale % p
        self.ring = ring(3 * p)
        self.zring = self.ring  # Kloosterman sums live in Z[ζ_p] ⊂ Z[ζ_{3p}]
        self._tr = {}
        self.cube_twist, self.omega = self._fix_cube_roots()

    # subfield bookkeeping
    def check_degree(self, d):
        if d < 1 or self.L % d:
            raise ValueError(f"F_q^{d} is not a subfield of the working field")

    def group_order(self, d):
        self.check_degree(d)
        return self.q ** d - 1

    def step(self, d):
        return self.field.order // self.group_order(d)

    def sub_log(self, x, d):
        """``k`` with ``x = g_d**k``; raises if ``x`` is zero or not in F_{q^d}."""
        lg = int(self.field.log[int(x)])
        st = self.step(d)
        if lg < 0 or lg % st:
            raise ValueError("element is zero or outside the subfield")
        return lg // st

    def trace_table(self, d):
        """``tr_d[k] = Tr_{F_{q^d}/F_p}(g_d**k)`` as integers in [0, p)."""
        if d not in self._tr:
            self.check_degree(d)
            self._tr[d] = kernels.trace_table(self.field.exp_c0, self.step(d),
                                              self.group_order(d), self.p,
                                              self.e * d, self.field.order)
        return self._tr[d]

    def _fix_cube_roots(self):
        # The least primitive element of F_{q^s} (in the encoding order)
        # is g_s**u; its cube-root-of-unity power goes to exp(2πi/3).
        s = self.s
        order = self.group_order(s)
        ks = np.arange(order, dtype=np.int64)
        codes = self.field.exp[ks * self.step(s)]
        units = np.array([gcd(int(k), order) == 1 for k in ks])
        u = int(ks[units][np.argmin(codes[units])])
        omega = int(self.field.exp[(u * self.step(s) * (order // 3)) % self.field.order])
        return u % 3, omega

    # characters
    def psi_exponent(self, d, alpha, x):
        """``t`` in Z/p with ``ψ_{F_{q^d},α}(x) = ζ_p^t``."""
        if int(alpha) == 0 or int(x) == 0:
            return 0
        tr = self.trace_table(d)
        k = (self.sub_log(alpha, d) + self.sub_log(x, d)) % self.group_order(d)
        return int(tr[k] * self.psi_scale % self.p)

    def chi_exponent(self, d, j, x):
        """``t`` in Z/3 with ``χ_d(x)^j = ζ_3^t``; ``x`` must be nonzero."""
        if self.group_order(d) % 3:
            raise ValueError("no cubic character on this field")
        return (j * self.cube_twist * self.sub_log(x, d)) % 3

    def zeta3(self, t):
        return self.ring.zeta(self.p * t)

    def zetap(self, t):
        return self.ring.zeta(3 * t)

    # raw sums
    def gauss_sum(self, d, j, alpha_log):
        """``-Σ_{x≠0} χ_d(x)^j ψ_{F_{q^d},α}(x)`` with ``α = g_d**alpha_log``,
        by direct summation."""
        if self.group_order(d) % 3:
            raise ValueError("no cubic character on this field")
        if j % 3 == 0:
            raise ValueError("j must be 1 or 2 mod 3")
        tr = self.trace_table(d)
        counts = kernels.gauss_counts(tr, alpha_log % len(tr), j * self.cube_twist,
                                      self.p, self.psi_scale)
        return self.ring.from_exponent_counts(counts, sign=-1)

    def additive_sum(self, d, alpha_log):
        """``-Σ_{x≠0} ψ_{F_{q^d},α}(x)``; equals 1 for every α ≠ 0."""
        tr = self.trace_table(d)
        t = (tr * self.psi_scale) % self.p
        counts = np.bincount(3 * t, minlength=3 * self.p)
        return self.ring.from_exponent_counts(counts, sign=-1)

    def kloosterman_sums(self, d, beta_logs, alpha_log=0):
        """``-Σ_{x≠0} ψ_{F_{q^d},β}(x + α/x)`` for each ``β = g_d**b``,
        by direct summation.  Returns a list of CycInt."""
        tr = self.trace_table(d)
        b = np.atleast_1d(np.asarray(beta_logs, dtype=np.int64)) % len(tr)
        # ψ_β(x + α/x) at x = g_d**k: Tr(g_d**(b+k)) + Tr(g_d**(b+a-k))
        counts = kernels.kloosterman_counts(tr, b, self.p, self.psi_scale,
                                            starts2=(b + int(alpha_log)) % len(tr))
        full = np.zeros((counts.shape[0], 3 * self.p), dtype=np.int64)
        full[:, ::3] = counts
        return [self.ring.from_exponent_counts(row, sign=-1) for row in full]

    def kloosterman_sum(self, d, beta_log, alpha_log=0):
        return self.kloosterman_sums(d, [beta_log], alpha_log)[0]


# -- fast paths ---------------------------------------------------------------


def dickson(kl, qd, r):
    """``κ₁^r + κ₂^r`` from ``κ₁ + κ₂ = kl`` and ``κ₁κ₂ = qd``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    prev, cur = kl.ring.from_int(2), kl
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, kl * cur - prev * qd
    return cur


def gauss_valuation(size, q, pr1=None):
    """Normalized valuation of the Gauss sum attached to an orbit of ``size``."""
    if q % 3 == 1:
        if pr1 not in (1, -1):
            raise ValueError("pr1 must be ±1 when q ≡ 1 mod 3")
        return Fraction(2 * size, 3) if pr1 == 1 else Fraction(size, 3)
    return Fraction(size, 2)


# -- angles -------------------------------------------------------------------


@dataclass(frozen=True)
class GaussValue:
    value: object
    size: int
    angle: mpmath.mpf
    angle_err: mpmath.mpf
    valuation: Fraction
    precision: int


@dataclass(frozen=True)
class KloostermanValue:
    value: object
    size: int
    kappa1: mpmath.mpc
    kappa2: mpmath.mpc
    angle: mpmath.mpf
    angle_err: mpmath.mpf
    precision: int


def _resolve(fn, precision_bits, resolution):
    prec = precision_bits
    while True:
        out = fn(prec)
        if out.angle_err <= resolution:
            return out
        if prec >= MAX_PRECISION:
            raise PrecisionError(f"angle not resolved at {prec} bits")
        prec *= 2


def gauss_value(value, q, size, valuation, precision_bits=DEFAULT_PRECISION,
                resolution=ANGLE_RESOLUTION):
    """Embed a Gauss sum and extract its angle ``ε`` in [0, 2π)."""

    def attempt(prec):
        z, err = embed_complex(value, prec)
        with mpmath.workprec(prec):
            r = mpmath.sqrt(mpmath.mpf(q) ** size)
            if abs(abs(z) - r) > err + r * mpmath.ldexp(1, -(prec // 2)):
                raise AssertionError("Gauss sum does not have modulus q^{|o|/2}")
            ang = mpmath.arg(z)
            if ang < 0:
                ang += 2 * mpmath.pi
            return GaussValue(value, size, ang, 2 * err / r, valuation, prec)

    return _resolve(attempt, precision_bits, resolution)


def kappa_split(value, q, size, precision_bits=DEFAULT_PRECISION,
                resolution=ANGLE_RESOLUTION):
    """Split a Kloosterman sum into ``κ₁ + κ₂`` with ``κ₁κ₂ = q^size`` and
    ``arg κ₁`` in [0, π], and return the angle θ with ``Kl = 2q^{size/2}cos θ``."""
    qd = q ** size
    if value.conj() != value:
        raise AssertionError("Kloosterman sum is not real")
    if (value * value - 4 * qd).is_zero():
        raise AssertionError("Kloosterman sum attains the Weil bound")

    def attempt(prec):
        z, err = embed_complex(value, prec)
        with mpmath.workprec(prec):
            x = z.real
            r = mpmath.sqrt(mpmath.mpf(qd))
            if value.is_zero():
                theta, terr = mpmath.pi / 2, mpmath.mpf(0)
            else:
                c = x / (2 * r)
                margin = 1 - abs(c)
                cerr = err / (2 * r)
                if margin <= cerr:
                    return KloostermanValue(value, size, None, None, mpmath.mpf(0),
                                            mpmath.inf, prec)
                theta = mpmath.acos(c)
                terr = cerr / mpmath.sqrt(margin * (2 - margin) - cerr) + mpmath.ldexp(1, -prec + 4)
            k1 = r * mpmath.expj(theta)
            return KloostermanValue(value, size, k1, mpmath.conj(k1), theta, terr, prec)

    return _resolve(attempt, precision_bits, resolution)
