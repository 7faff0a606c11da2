"""Frobenius orbits on F_{q^a}^× and on (Z/3)^× × F_{q^a}^×.

Places (orbits of x ↦ x^q on F_{q^a}^×) correspond to closed points of
G_m of degree dividing ``a``.  Full orbits are orbits of
``(j, α) ↦ (q j mod 3, α^{1/q})``; each lies over the place of its α.

All field elements are handled inside the working field F_{q^L} with
``L = lcm(a, ord(q mod 3))``, so every orbit's residue field is a subfield
of one table-driven field.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ffield import FieldParams, factorize, field_suite, lcm


def cube_order(q):
    """Multiplicative order of q mod 3 (the degree over F_q of F_q(μ_3))."""
    if q % 3 == 0:
        raise ValueError("q must be prime to 3")
    return 1 if q % 3 == 1 else 2


def working_degree(q, a):
    return lcm(a, cube_order(q))


def working_field(q, a, min_char=7):
    params = FieldParams.from_q(q, min_char)
    return field_suite(params, working_degree(q, a))


@dataclass(frozen=True)
class PlaceOrbit:
    """A place of degree ``size``, represented by its least element ``rep``.

    ``log`` is the discrete log of ``rep`` in the working field.
    """

    rep: int
    log: int
    size: int


@dataclass(frozen=True)
class FullOrbit:
    """An orbit of (Z/3)^× × F_{q^a}^× with least representative ``(j, rep)``."""

    j: int
    rep: int
    log: int
    size: int
    place: int
    pr1: int = None


def _subgroup(field, q, a):
    order_a = q ** a - 1
    step = field.order // order_a
    return order_a, step


def iter_places(q, a, min_char=7):
    """Yield the places of degree dividing ``a`` in increasing order of
    representative (not sorted by size)."""
    field = working_field(q, a, min_char)
    order_a, step = _subgroup(field, q, a)
    seen = np.zeros(order_a, dtype=bool)
    codes = field.exp[np.arange(order_a, dtype=np.int64) * step]
    for k in np.argsort(codes, kind="stable"):
        k = int(k)
        if seen[k]:
            continue
        members = [k]
        nxt = (k * q) % order_a
        while nxt != k:
            members.append(nxt)
            nxt = (nxt * q) % order_a
        seen[members] = True
        yield PlaceOrbit(rep=int(codes[k]), log=k * step, size=len(members))


@lru_cache(maxsize=16)
def _places(q, a, min_char):
    return tuple(sorted(iter_places(q, a, min_char), key=lambda v: (v.size, v.rep)))


def enumerate_places(q, a, min_char=7):
    """All places of degree dividing ``a``, sorted by (size, representative)."""
    return list(_places(q, a, min_char))


@lru_cache(maxsize=16)
def _orbits(q, a, min_char):
    field = working_field(q, a, min_char)
    order_a, step = _subgroup(field, q, a)
    places = _places(q, a, min_char)
    place_of = np.empty(order_a, dtype=np.int64)
    for idx, v in enumerate(places):
        k = v.log // step
        nxt = k
        while True:
            place_of[nxt] = idx
            nxt = (nxt * q) % order_a
            if nxt == k:
                break
    codes = field.exp[np.arange(order_a, dtype=np.int64) * step]
    inv_q = pow(q, a - 1, order_a) if order_a > 1 else 0
    seen = np.zeros((3, order_a), dtype=bool)
    out = []
    for k in np.argsort(codes, kind="stable"):
        k = int(k)
        for j in (1, 2):
            if seen[j, k]:
                continue
            size = 0
            jj, kk = j, k
            while not seen[jj, kk]:
                seen[jj, kk] = True
                size += 1
                jj, kk = (q * jj) % 3, (kk * inv_q) % order_a
            pr1 = (1 if j == 1 else -1) if q % 3 == 1 else None
            out.append(FullOrbit(j=j, rep=int(codes[k]), log=k * step, size=size,
                                 place=int(place_of[k]), pr1=pr1))
    out.sort(key=lambda o: (o.size, o.rep, o.j))
    return tuple(out)


def enumerate_orbits(q, a, min_char=7):
    """All orbits of (Z/3)^× × F_{q^a}^×, sorted by (size, representative)."""
    return list(_orbits(q, a, min_char))


def theta_fibers(q, a, min_char=7):
    """Number of full orbits over each place, indexed like ``enumerate_places``."""
    counts = [0] * len(_places(q, a, min_char))
    for o in _orbits(q, a, min_char):
        counts[o.place] += 1
    return counts


def _mobius(n):
    f = factorize(n) if n > 1 else {}
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def count_places_of_degree(q, d):
    """Number of closed points of degree ``d`` on G_m over F_q."""
    if d < 1:
        raise ValueError("degree must be positive")
    irreducible = sum(_mobius(d // k) * q ** k for k in range(1, d + 1) if d % k == 0) // d
    return irreducible - (1 if d == 1 else 0)


def maximal_orbit_size(q, a):
    if q % 3 == 2 and a % 2 == 1:
        return 2 * a
    return a


def maximal_orbits(q, a, min_char=7):
    size = maximal_orbit_size(q, a)
    return [o for o in _orbits(q, a, min_char) if o.size == size]


def maximal_places(q, a, min_char=7):
    """Places of degree exactly ``a``; there are ``count_places_of_degree(q, a)``."""
    return [v for v in _places(q, a, min_char) if v.size == a]


def nonmaximal_mass(q, a, min_char=7):
    """Total size of the orbits that are not maximal."""
    size = maximal_orbit_size(q, a)
    return sum(o.size for o in _orbits(q, a, min_char) if o.size != size)
