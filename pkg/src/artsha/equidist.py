"""Distribution of Kloosterman angles and their distance to Gauss angles.

The sample at level ``a`` is the set of angles ``θ_v`` over places of
degree exactly ``a``; its empirical measure is compared with the Sato-Tate
law ``(2/π) sin²θ dθ``, whose distribution function is
``x/π − sin(2x)/(2π)``.  The gap statistics check that no Kloosterman
angle coincides with ± a Gauss angle of an orbit of the same size.
"""

import math
from collections import Counter
from dataclasses import dataclass

import mpmath
import numpy as np

from .family import get_level

LOG2_LOG3 = math.log(2) / math.log(3)


def sato_tate_cdf(x):
    """``F(x) = x/π − sin(2x)/(2π)`` on ``[0, π]``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > math.pi):
        raise ValueError("Sato-Tate CDF is defined on [0, π]")
    out = arr / math.pi - np.sin(2 * arr) / (2 * math.pi)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AngleSample:
    """Angles ``θ_v`` (sorted) for the places ``v`` of degree ``a``."""

    q: int
    a: int
    angles: np.ndarray
    places: tuple

    @property
    def count(self):
        return len(self.angles)

    @property
    def weights(self):
        return np.full(self.count, 1.0 / self.count)


def angle_sample(q, a, level=None, min_char=7):
    level = level or get_level(q, a, min_char=min_char)
    picked = [(float(kv.angle), i) for i, (v, kv) in
              enumerate(zip(level.places, level.place_kloosterman_values)) if v.size == a]
    picked.sort()
    angles = np.array([x for x, _ in picked])
    if np.any(angles <= 0) or np.any(angles >= math.pi):
        raise AssertionError("a Kloosterman angle is 0 or π")
    return AngleSample(q, a, angles, tuple(i for _, i in picked))


def star_discrepancy(angles):
    """``sup_x |F_n(x) − F(x)|`` via the order statistics."""
    th = np.sort(np.asarray(angles, dtype=float))
    n = len(th)
    if n == 0:
        raise ValueError("empty sample")
    f = sato_tate_cdf(th)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(f - (i - 1) / n)), np.max(np.abs(f - i / n))))


def discrepancy_scale(q, a):
    """``a^{1/2} / q^{a/4}``, the shape of the discrepancy bound."""
    return math.sqrt(a) / q ** (a / 4)


def chebyshev_u(n, theta):
    """``U_n(cos θ) = sin((n+1)θ)/sin θ``, the character of Symⁿ."""
    theta = np.asarray(theta, dtype=float)
    return np.sin((n + 1) * theta) / np.sin(theta)


def weyl_sum(angles, n):
    """``|(1/Π) Σ_v U_n(cos θ_v)|``; its Sato-Tate expectation is 0."""
    if n < 1:
        raise ValueError("n must be positive")
    return float(abs(np.mean(chebyshev_u(n, angles))))


def weyl_scale(q, a, n):
    """``a (n + 1) / q^{a/2}``, the shape of the bound for Symⁿ."""
    return a * (n + 1) / q ** (a / 2)


def fit_constant(ratios):
    """The least ``C`` with ``value ≤ C · scale`` on every row."""
    return max(ratios)


# -- two presentations of ν_a ----------------------------------------------------


@dataclass(frozen=True)
class PresentationCheck:
    elements: int
    places: int
    equal: bool


def element_presentation(q, a, level=None, min_char=7):
    """Compare ν_a built from elements ``β`` of degree ``a`` (one raw
    Kloosterman sum each) with ν_a built from places (each counted ``a``
    times).  The comparison is an exact multiset equality in Z[ζ_p]."""
    level = level or get_level(q, a, min_char=min_char)
    ctx = level.ctx
    step = ctx.step(a)
    betas = []
    for v in level.places:
        if v.size == a:
            k = v.log // step
            order = q ** a - 1
            betas.extend((k * pow(q, i, order)) % order for i in range(a))
    by_element = Counter(ctx.kloosterman_sums(a, sorted(betas)))
    by_place = Counter()
    for v, kl in zip(level.places, level.place_kloosterman):
        if v.size == a:
            by_place[kl] += a
    return PresentationCheck(len(betas), sum(1 for v in level.places if v.size == a),
                             by_element == by_place)


# -- angle gaps ----------------------------------------------------------------


@dataclass(frozen=True)
class GapConstants:
    p: int

    def sigma(self, n):
        p = self.p
        return 2 * n * p * (LOG2_LOG3 + (p - 1) * (3 + 2 * LOG2_LOG3) + 1)

    def tau(self, N):
        return 2 * (self.p - 1) * (LOG2_LOG3 + N / 2) + math.log(N) / math.log(3)

    @property
    def sigma_p(self):
        return self.sigma(3)


def _circle_dist(x):
    x = np.mod(x, 2 * math.pi)
    return np.minimum(x, 2 * math.pi - x)


@dataclass(frozen=True)
class GapRow:
    size: int
    orbits: int
    min_gap: float
    log10_liouville: float
    coincidences: int

    @property
    def ok(self):
        return self.coincidences == 0 and self.min_gap > 0


def min_angle_gap(q, a, level=None, min_char=7):
    """Per orbit size: the least of ``|±θ_o ∓ ε_{o'}|`` mod 2π over orbits
    of that size, together with an exact coincidence count.

    ``θ_o ≡ ±ε_{o'}`` exactly when ``γ(o')`` is a root of
    ``z² − Kl(o) z + q^{|o|}``, which is decided in Z[ζ_{3p}].
    """
    level = level or get_level(q, a, min_char=min_char)
    consts = GapConstants(level.p)
    rows = []
    for size in sorted({o.size for o in level.orbits}):
        idx = [i for i, o in enumerate(level.orbits) if o.size == size]
        th = np.array([float(level.theta(i)) for i in idx])
        ep = np.array([float(level.epsilon(i)) for i in idx])
        d = np.minimum(_circle_dist(th[:, None] - ep[None, :]),
                       _circle_dist(th[:, None] + ep[None, :]))
        qd = q ** size
        gammas = {level.gammas[i] for i in idx}
        kls = {level.kloostermans[i] for i in idx}
        hits = sum(1 for g in gammas for k in kls if (g * g - k * g + qd).is_zero())
        rows.append(GapRow(size, len(idx), float(d.min()),
                           -consts.sigma_p * size * math.log10(q), hits))
    return rows


# -- Gauss angle structure -------------------------------------------------------------


@dataclass(frozen=True)
class GaussAngleCheck:
    phi: float
    classes: dict
    max_residual: float


def gauss_angle_structure(q, a, level=None, min_char=7, tol=1e-20):
    """Sort Gauss angles into the classes allowed by the congruence of q.

    For ``q ≡ 1 mod 3``: ``ε_o − pr₁(o)|o|φ ∈ {0, 2π/3, 4π/3}`` with ``φ``
    the angle of the Gauss sum of the cubic character over F_q.  For
    ``q ≡ 2 mod 3``: ``ε_o`` is a multiple of ``π/3``.  Returns the count
    per class (as a multiple of the class step) and the worst residual.
    """
    level = level or get_level(q, a, min_char=min_char)
    with mpmath.workprec(level.precision_bits):
        if q % 3 == 1:
            phi = mpmath.arg(level.base_gauss[1].embed(level.precision_bits)[0]) % (2 * mpmath.pi)
            step = 2 * mpmath.pi / 3
        else:
            phi = mpmath.mpf(0)
            step = mpmath.pi / 3
        classes, worst = Counter(), mpmath.mpf(0)
        for i, o in enumerate(level.orbits):
            shift = o.pr1 * o.size * phi if q % 3 == 1 else 0
            r = (level.epsilon(i) - shift) / step
            k = int(mpmath.nint(r))
            worst = max(worst, abs(r - k) * step)
            classes[k % round(float(2 * mpmath.pi / step))] += 1
        if worst > tol:
            raise AssertionError(f"Gauss angle off its class by {float(worst):.3e}")
        return GaussAngleCheck(float(phi), dict(sorted(classes.items())), float(worst))
