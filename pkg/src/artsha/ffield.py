"""Finite fields F_{q^n} realized as F_p[X]/(f).

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` is the
coefficient of ``X**i``.  The integer order on encodings is the fixed total
order used for canonical representatives and for choosing moduli and
primitive elements, so every run builds the same tables.

Multiplication goes through discrete-log tables, which limits a field to a
few million elements.  That is the desk scale this package targets.
"""

from dataclasses import dataclass, field as _dc_field
from functools import lru_cache
from math import gcd

import numpy as np

from . import kernels

MAX_FIELD_SIZE = 1 << 24


def factorize(n):
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q):
    """Return ``(p, e)`` with ``q == p**e``, or raise ``ValueError``."""
    f = factorize(q) if q > 1 else {}
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, e), = f.items()
    return p, e


def lcm(*xs):
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


# -- polynomials over F_p as coefficient lists, constant term first -----------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, p):
    a = list(a)
    n = len(f) - 1
    inv = pow(f[-1], -1, p)
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(n + 1):
                a[i - n + j] = (a[i - n + j] - c * f[j]) % p
    return _trim(a[:n] if len(a) > n else a)


def _poly_mulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, f, p)


def _poly_powmod(a, e, f, p):
    result = _poly_mod([1], f, p)
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, f, p)
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f, p):
    """Rabin's irreducibility test for a polynomial over F_p."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _poly_powmod(x, p ** n, f, p) != _poly_mod(x, f, p):
        return False
    for r in factorize(n):
        h = _poly_powmod(x, p ** (n // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(f, _trim(h), p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def lowest_irreducible(p, n):
    """The monic irreducible of degree ``n`` whose lower coefficients,
    read as base-p digits, form the smallest integer."""
    for code in range(p ** n):
        coeffs = [(code // p ** i) % p for i in range(n)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class FieldParams:
    """Base field data: ``q = p**e`` with ``p`` prime."""

    p: int
    e: int = 1
    min_char: int = 7

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("e must be positive")
        if len(factorize(self.p)) != 1 or factorize(self.p) != {self.p: 1}:
            raise ValueError(f"{self.p} is not prime")
        if self.p < self.min_char:
            raise ValueError(f"characteristic {self.p} is below {self.min_char}")

    @property
    def q(self):
        return self.p ** self.e

    @classmethod
    def from_q(cls, q, min_char=7):
        p, e = prime_power(q)
        return cls(p, e, min_char)

    def ord_q(self, n):
        """Valuation of a nonzero integer normalized so that ``ord(q) == 1``."""
        from .cyclo import ord_frak_p
        return ord_frak_p(n, self)


# -- fields -------------------------------------------------------------------


@dataclass(eq=False)
class ExtField:
    """The field with ``p**degree`` elements.

    ``q``/``n`` record how the field was requested (F_{q^n} with
    ``degree == e*n``); all arithmetic is absolute over F_p.
    """

    p: int
    degree: int
    modulus: tuple = None
    q: int = None
    exp: np.ndarray = _dc_field(init=False, repr=False)
    log: np.ndarray = _dc_field(init=False, repr=False)

    def __post_init__(self):
        if self.modulus is None:
            self.modulus = lowest_irreducible(self.p, self.degree)
        else:
            self.modulus = tuple(int(c) % self.p for c in self.modulus)
            if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of the field degree")
            if not is_irreducible(list(self.modulus), self.p):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")
        if self.q is None:
            self.q = self.p
        self.size = self.p ** self.degree
        if self.size > MAX_FIELD_SIZE:
            raise ValueError(f"field of size {self.size} exceeds the table limit")
        self.order = self.size - 1
        self._places = self.p ** np.arange(self.degree, dtype=np.int64)
        self.generator = self._find_primitive()
        self._build_tables()

    @property
    def n(self):
        e = prime_power(self.q)[1]
        return self.degree // e

    # encoding helpers
    def digits(self, x):
        """Coordinates of encoded element(s), constant term first."""
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._places) % self.p

    def encode(self, coords):
        coords = np.asarray(coords, dtype=np.int64) % self.p
        return coords @ self._places

    def _poly(self, x):
        return _trim([int(c) for c in self.digits(int(x))])

    def _find_primitive(self):
        if self.order == 1:
            return 1
        f = list(self.modulus)
        primes = list(factorize(self.order))
        for code in range(1, self.size):
            poly = self._poly(code)
            if all(_poly_powmod(poly, self.order // r, f, self.p) != [1] for r in primes):
                return code
        raise AssertionError("no primitive element")  # pragma: no cover

    def _build_tables(self):
        p, n = self.p, self.degree
        f = list(self.modulus)
        g = self._poly(self.generator)
        mult = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            col = _poly_mulmod(g, [0] * i + [1], f, p)
            mult[:len(col), i] = col
        digits = np.zeros((self.order, n), dtype=np.int64)
        digits[0, 0] = 1
        filled = 1
        step = mult.copy()
        while filled < self.order:
            take = min(filled, self.order - filled)
            digits[filled:filled + take] = (digits[:take] @ step.T) % p
            filled += take
            step = (step @ step) % p
        self.exp = digits @ self._places
        self.exp_c0 = np.ascontiguousarray(digits[:, 0])
        self.log = np.full(self.size, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(self.order, dtype=np.int64)
        if np.any(self.log[1:] < 0):  # pragma: no cover - would mean g is not primitive
            raise AssertionError("exponential table is not a bijection")

    # scalar and vector arithmetic on encodings
    def add(self, a, b):
        return kernels.field_add(a, b, self.p, self.degree)

    def sub(self, a, b):
        return kernels.field_sub(a, b, self.p, self.degree)

    def neg(self, a):
        return kernels.field_sub(0, a, self.p, self.degree)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % self.order]
        return np.where((la < 0) | (lb < 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % self.order]

    def pow(self, a, k):
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        if k < 0 and np.any(la < 0):
            raise ZeroDivisionError("negative power of zero")
        out = self.exp[(la * (k % self.order)) % self.order]
        if k == 0:
            return np.ones_like(out)
        return np.where(la < 0, 0, out)

    def elements(self):
        """All elements, in increasing encoding order."""
        return np.arange(self.size, dtype=np.int64)

    def element(self, x):
        return FieldElement(self, int(x))

    def primitive_element(self):
        return FieldElement(self, int(self.generator))

    # subfields
    def check_subfield(self, d):
        if d < 1 or self.degree % d:
            raise ValueError(f"F_{self.p}^{d} is not a subfield of F_{self.p}^{self.degree}")

    def subfield_elements(self, d):
        """Elements of the subfield with ``p**d`` elements, as encodings."""
        self.check_subfield(d)
        m = self.order // (self.p ** d - 1)
        nonzero = self.exp[np.arange(0, self.order, m)]
        return np.sort(np.concatenate([[0], nonzero]))

    def in_subfield(self, x, d):
        self.check_subfield(d)
        return np.asarray(self.pow(x, self.p ** d) == np.asarray(x))

    def trace(self, x, d=1):
        """Trace to the subfield with ``p**d`` elements."""
        self.check_subfield(d)
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        y = x
        for _ in range(self.degree // d):
            acc = self.add(acc, y)
            y = self.pow(y, self.p ** d)
        return acc

    def norm(self, x, d=1):
        """Norm to the subfield with ``p**d`` elements."""
        self.check_subfield(d)
        return self.pow(x, self.order // (self.p ** d - 1))

    def frobenius_orbit(self, x, q=None):
        """Distinct iterates ``x, x**q, x**(q**2), ...``."""
        q = self.q if q is None else q
        out = [int(x)]
        y = int(self.pow(x, q))
        while y != out[0]:
            out.append(y)
            y = int(self.pow(y, q))
        return out

    def embedding_from(self, small):
        """Table mapping encodings of ``small`` into this field.

        ``small`` must have the same characteristic and a degree dividing
        ours.  The generator ``X`` of ``small`` goes to the least root of
        its modulus, so the embedding is canonical.
        """
        if small.p != self.p or self.degree % small.degree:
            raise ValueError("not a subfield")
        cand = self.subfield_elements(small.degree)
        val = np.zeros_like(cand)
        for c in reversed(small.modulus):
            val = self.add(self.mul(val, cand), c)
        roots = cand[val == 0]
        r = int(roots.min())
        powers = [1]
        for _ in range(1, small.degree):
            powers.append(int(self.mul(powers[-1], r)))
        table = np.zeros(small.size, dtype=np.int64)
        dig = small.digits(np.arange(small.size))
        for i, rp in enumerate(powers):
            coeff = dig[:, i]
            table = self.add(table, self.mul(coeff, rp))
        return table

    def metadata(self):
        return {"p": self.p, "degree": self.degree,
                "modulus": [int(c) for c in self.modulus],
                "generator": int(self.generator)}


class FieldElement:
    """An element of an :class:`ExtField` with operator overloading."""

    __slots__ = ("field", "enc")

    def __init__(self, field, enc):
        self.field = field
        enc = int(enc)
        if not 0 <= enc < field.size:
            raise ValueError("encoding out of range")
        self.enc = enc

    @property
    def coords(self):
        return tuple(int(c) for c in self.field.digits(self.enc))

    @property
    def field_degree(self):
        return self.field.degree

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.enc
        return int(other) % self.field.p

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add(self.enc, self._coerce(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self.enc, self._coerce(other))))

    def __rsub__(self, other):
        return FieldElement(self.field, int(self.field.sub(self._coerce(other), self.enc)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.enc)))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul(self.enc, self._coerce(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FieldElement(self.field, int(self.field.inv(self._coerce(other))))

    def __pow__(self, k):
        return FieldElement(self.field, int(self.field.pow(self.enc, int(k))))

    def inverse(self):
        return FieldElement(self.field, int(self.field.inv(self.enc)))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.enc == other.enc
        if isinstance(other, int):
            return self.enc == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.enc))

    def __repr__(self):
        return f"FieldElement({self.coords}, p={self.field.p})"


@lru_cache(maxsize=32)
def _cached_field(p, degree, q):
    return ExtField(p, degree, q=q)


def field_suite(params, n):
    """The field F_{q^n} for ``q = params.q``, shared across calls."""
    if n < 1:
        raise ValueError("n must be positive")
    return _cached_field(params.p, params.e * n, params.q)
