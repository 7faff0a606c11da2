"""Per-level data for the surface S_a over F_q(t).

:class:`Level` gathers everything computed for one pair ``(q, a)``: the
working field, places and orbits, the exact Gauss and Kloosterman sums
attached to each orbit, their complex embeddings and angles, and the
Galois blocks used to assemble the L-function.

Fast paths:

* ``γ(o) = χ(α)^{-j} · G(F_{q^s}, χ^j, ψ_1)^{|o|/s}`` (translation in the
  additive character followed by Hasse-Davenport from the smallest field
  with a cubic character);
* ``Kl(o) = κ₁(v)^r + κ₂(v)^r`` with ``r = |o|/|v|`` from the Kloosterman
  sum of the place ``v`` under ``o``, via the Dickson recurrence.

Both are compared against direct summation in :mod:`artsha.oracle`.
"""

from functools import cached_property, lru_cache

import numpy as np

from .chars import CharacterContext, dickson, gauss_valuation, gauss_value, kappa_split
from .cyclo import DEFAULT_PRECISION
from .ffield import FieldParams
from .orbits import (cube_order, enumerate_orbits, enumerate_places, maximal_orbit_size,
                     working_degree, working_field)


class Level:
    """Exact and embedded orbit data for one ``(q, a)``."""

    def __init__(self, q, a, precision_bits=DEFAULT_PRECISION, psi_scale=1, min_char=7):
        if a < 1:
            raise ValueError("a must be positive")
        self.params = FieldParams.from_q(q, min_char)
        self.q = q
        self.a = a
        self.p = self.params.p
        self.e = self.params.e
        self.min_char = min_char
        self.precision_bits = precision_bits
        self.psi_scale = psi_scale
        self.L = working_degree(q, a)
        self.s = cube_order(q)
        self.field = working_field(q, a, min_char)
        self.ctx = CharacterContext(self.field, q, psi_scale)
        self.ring = self.ctx.ring
        self.places = enumerate_places(q, a, min_char)
        self.orbits = enumerate_orbits(q, a, min_char)

    def __repr__(self):
        return f"Level(q={self.q}, a={self.a})"

    @property
    def order_a(self):
        return self.q ** self.a - 1

    # -- exact sums -------------------------------------------------------------

    @cached_property
    def place_kloosterman(self):
        """``Kl(F_v, ψ_{F_v,β}, 1)`` for each place, by direct summation."""
        out = [None] * len(self.places)
        by_size = {}
        for i, v in enumerate(self.places):
            by_size.setdefault(v.size, []).append(i)
        for d, idx in sorted(by_size.items()):
            step = self.ctx.step(d)
            logs = [self.places[i].log // step for i in idx]
            for i, val in zip(idx, self.ctx.kloosterman_sums(d, logs)):
                out[i] = val
        return out

    @cached_property
    def base_gauss(self):
        """``G(F_{q^s}, χ^j, ψ_1)`` for ``j = 1, 2``."""
        return {j: self.ctx.gauss_sum(self.s, j, 0) for j in (1, 2)}

    def gauss_fast(self, o):
        a0 = o.log // self.ctx.step(o.size)
        twist = self.ctx.zeta3(-o.j * self.ctx.cube_twist * a0)
        return twist * self.base_gauss[o.j] ** (o.size // self.s)

    def gauss_direct(self, o):
        a0 = o.log // self.ctx.step(o.size)
        return self.ctx.gauss_sum(o.size, o.j, a0)

    def kloosterman_fast(self, o):
        v = self.places[o.place]
        return dickson(self.place_kloosterman[o.place], self.q ** v.size, o.size // v.size)

    def kloosterman_direct(self, o):
        return self.ctx.kloosterman_sum(o.size, o.log // self.ctx.step(o.size))

    @cached_property
    def gammas(self):
        return [self.gauss_fast(o) for o in self.orbits]

    @cached_property
    def kloostermans(self):
        return [self.kloosterman_fast(o) for o in self.orbits]

    def valuation(self, o):
        return gauss_valuation(o.size, self.q, o.pr1)

    # -- embeddings and angles -----------------------------------------------------

    @cached_property
    def gauss_values(self):
        return [gauss_value(g, self.q, o.size, self.valuation(o), self.precision_bits)
                for o, g in zip(self.orbits, self.gammas)]

    @cached_property
    def kloosterman_values(self):
        return [kappa_split(k, self.q, o.size, self.precision_bits)
                for o, k in zip(self.orbits, self.kloostermans)]

    @cached_property
    def place_kloosterman_values(self):
        return [kappa_split(k, self.q, v.size, self.precision_bits)
                for v, k in zip(self.places, self.place_kloosterman)]

    def epsilon(self, i):
        return self.gauss_values[i].angle

    def theta(self, i):
        return self.kloosterman_values[i].angle

    # -- Galois blocks ---------------------------------------------------------

    @cached_property
    def orbit_index(self):
        """``index[j, k]``: orbit containing ``(j, g_a**k)``."""
        field = self.field
        step = field.order // self.order_a
        idx = np.full((3, self.order_a), -1, dtype=np.int64)
        inv_q = pow(self.q, self.a - 1, self.order_a) if self.order_a > 1 else 0
        for n, o in enumerate(self.orbits):
            j, k = o.j, o.log // step
            for _ in range(o.size):
                idx[j, k] = n
                j, k = (self.q * j) % 3, (k * inv_q) % self.order_a
        return idx

    @cached_property
    def galois_blocks(self):
        """Unions of orbits stable under every automorphism of Q(ζ_{3p}).

        ζ ↦ ζ^t sends the factor of ``(j, α)`` to the factor of
        ``(t j, t α)`` (t read mod 3 and mod p), so the orbits of the group
        generated by ``j ↦ 2j`` and ``α ↦ cα`` (c in F_p^×) are Galois
        stable and their products have rational integer coefficients.
        """
        idx = self.orbit_index
        step_p = self.order_a // (self.p - 1)
        parent = list(range(len(self.orbits)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        step = self.field.order // self.order_a
        for n, o in enumerate(self.orbits):
            k = o.log // step
            union(n, int(idx[3 - o.j, k]))
            union(n, int(idx[o.j, (k + step_p) % self.order_a]))
        blocks = {}
        for n in range(len(self.orbits)):
            blocks.setdefault(find(n), []).append(n)
        return [blocks[r] for r in sorted(blocks)]

    def factor(self, i):
        """Coefficients ``(d, b, c)`` of ``1 + b T^d + c T^{2d}`` for orbit ``i``."""
        o = self.orbits[i]
        g, k = self.gammas[i], self.kloostermans[i]
        return o.size, -(g * k), g * g * (self.q ** o.size)

    # -- maximal data ------------------------------------------------------------

    @property
    def maximal_size(self):
        return maximal_orbit_size(self.q, self.a)


@lru_cache(maxsize=8)
def get_level(q, a, precision_bits=DEFAULT_PRECISION, psi_scale=1, min_char=7):
    """Shared :class:`Level` instances (they are immutable once computed)."""
    return Level(q, a, precision_bits, psi_scale, min_char)
