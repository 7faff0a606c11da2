"""Exact arithmetic in the cyclotomic ring Z[ζ_n].

Elements are integer coordinate vectors in the power basis 1, ζ, ...,
ζ^{φ(n)-1} of Z[x]/Φ_n(x).  Coordinates are Python integers, so nothing
overflows; the reduction table for ζ^k (k < n) is small and kept in numpy.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
import numpy as np

DEFAULT_PRECISION = 256


def _poly_divexact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    if any(a[:len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Φ_n, constant term first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def ord_frak_p(n, params):
    """``ord_p(n) / e`` as a Fraction, so that ``ord(q) == 1``."""
    n = int(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % params.p == 0:
        n //= params.p
        v += 1
    return Fraction(v, params.e)


class CyclotomicRing:
    """Z[ζ_n] with a cached reduction table."""

    def __init__(self, n):
        self.n = n
        self.poly = cyclotomic_polynomial(n)
        self.phi = len(self.poly) - 1
        powers = np.zeros((max(n, 2 * self.phi), self.phi), dtype=object)
        vec = [0] * self.phi
        vec[0] = 1
        for k in range(powers.shape[0]):
            powers[k] = vec
            # multiply by ζ: shift up and fold the top coefficient back
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(self.phi):
                    vec[i] -= top * self.poly[i]
        self._powers = powers
        self._powers_int = np.array(powers[:n], dtype=np.int64)
        self._units = [k for k in range(1, n) if gcd(k, n) == 1]
        self._roots = {}

    def __repr__(self):
        return f"CyclotomicRing({self.n})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicRing) and other.n == self.n

    def __hash__(self):
        return hash(("CyclotomicRing", self.n))

    def zero(self):
        return CycInt(self, (0,) * self.phi)

    def one(self):
        return self.from_int(1)

    def from_int(self, c):
        return CycInt(self, (int(c),) + (0,) * (self.phi - 1))

    def zeta(self, k=1):
        return CycInt(self, tuple(int(c) for c in self._powers[k % self.n]))

    def from_exponent_counts(self, counts, sign=1):
        """``sign * sum(counts[k] * ζ**k)``."""
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (self.n,):
            raise ValueError("need one count per residue mod n")
        if np.abs(counts).max(initial=0) < (1 << 40):
            vec = counts @ self._powers_int
            return CycInt(self, tuple(sign * int(c) for c in vec))
        vec = counts.astype(object) @ self._powers[:self.n]
        return CycInt(self, tuple(sign * int(c) for c in vec))

    def reduce(self, coeffs):
        """Reduce an arbitrary-length coefficient list mod Φ_n."""
        coeffs = list(coeffs)
        out = [0] * self.phi
        for k, c in enumerate(coeffs):
            if c:
                row = self._powers[k % self.n]
                for i in range(self.phi):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)

    def wide_reduction_matrix(self):
        """Object matrix sending a product of two reduced vectors
        (length 2φ-1) to its reduced coordinates."""
        return self._powers[:2 * self.phi - 1]

    def unit_residues(self):
        return list(self._units)

    def roots_of_unity(self, prec):
        """``exp(2πik/n)`` for all k, computed at ``prec`` bits."""
        if prec not in self._roots:
            with mpmath.workprec(prec + 16):
                self._roots[prec] = [mpmath.expjpi(mpmath.mpf(2 * k) / self.n)
                                     for k in range(self.n)]
        return self._roots[prec]


@lru_cache(maxsize=None)
def ring(n):
    return CyclotomicRing(n)


class CycInt:
    """An element of Z[ζ_n]; immutable."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        if len(coords) != ring.phi:
            raise ValueError("coordinate vector has the wrong length")
        self.ring = ring
        self.coords = tuple(coords)

    @property
    def conductor(self):
        return self.ring.n

    def _other(self, other):
        if isinstance(other, CycInt):
            if other.ring.n != self.ring.n:
                raise ValueError("conductor mismatch")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return CycInt(self.ring, tuple(x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.ring, tuple(-x for x in self.coords))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return CycInt(self.ring, tuple(x - y for x, y in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.ring, tuple(other * x for x in self.coords))
        o = self._other(other)
        if o is None:
            return NotImplemented
        phi = self.ring.phi
        wide = [0] * (2 * phi - 1)
        for i, x in enumerate(self.coords):
            if x:
                for j, y in enumerate(o.coords):
                    if y:
                        wide[i + j] += x * y
        return CycInt(self.ring, self.ring.reduce(wide))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not in the ring")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.ring.n, self.coords))

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coords) if c]
        return f"CycInt[{self.ring.n}](" + (" + ".join(terms) or "0") + ")"

    def is_zero(self):
        return not any(self.coords)

    def galois(self, k):
        """Image under the automorphism ζ ↦ ζ^k."""
        n = self.ring.n
        if gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit mod {n}")
        wide = [0] * n
        for i, c in enumerate(self.coords):
            wide[(i * k) % n] += c
        return CycInt(self.ring, self.ring.reduce(wide))

    def conj(self):
        return self.galois(-1)

    def is_rational_integer(self):
        """The integer this element equals, or ``None``."""
        if any(self.coords[1:]):
            return None
        return self.coords[0]

    def embed(self, precision_bits=DEFAULT_PRECISION):
        """Value at ζ = exp(2πi/n) and an upper bound on its error."""
        return embed_complex(self, precision_bits)


def embed_complex(a, precision_bits=DEFAULT_PRECISION):
    """Evaluate ``a`` at exp(2πi/n).

    Returns ``(value, err)`` with ``|value - ι(a)| <= err``.  Each root of
    unity is accurate to about one ulp at ``precision_bits + 16`` bits, and
    each term of the sum adds at most one more rounding, so a bound of
    ``(Σ|c_k|) * (φ + 2) * 2**-(precision_bits + 12)`` is safe.
    """
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    roots = a.ring.roots_of_unity(precision_bits)
    with mpmath.workprec(precision_bits + 16):
        val = mpmath.mpc(0)
        weight = 0
        for k, c in enumerate(a.coords):
            if c:
                val += c * roots[k]
                weight += abs(c)
        err = mpmath.mpf(weight) * (a.ring.phi + 2) * mpmath.ldexp(1, -(precision_bits + 12))
    return val, err
