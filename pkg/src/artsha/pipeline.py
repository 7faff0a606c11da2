"""End-to-end runs for one ``(q, a)`` and JSON/CSV payload assembly.

Every number in a payload is wrapped with its provenance: ``exact`` values
are decimal strings (integers) or ``num``/``den`` pairs, ``numeric`` values
carry an error bound.  Payloads contain no timestamps or host data, so a
rerun with the same arguments serializes to identical bytes.
"""

import csv
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache

from . import __version__
from .bsd import sha_report, torsion_bound
from .cyclo import DEFAULT_PRECISION
from .equidist import (GapConstants, angle_sample, discrepancy_scale, fit_constant,
                       gauss_angle_structure, min_angle_gap, star_discrepancy, weyl_scale,
                       weyl_sum)
from .family import get_level
from .ffield import FieldParams
from .lfun import (block_polynomials, expected_degree, log_special_value, product_tree,
                   special_value, special_value_angles, verify_functional_equation,
                   verify_riemann_hypothesis, RH_TOLERANCE)
from .oracle import direct_sums_check, identity_suite, point_count_check, squarefree_check

SCHEMA = "artsha/1"
# float64 statistics of angles known to 1e-30
FLOAT_STAT_ERROR = 1e-12
SPECIAL_VALUE_RTOL = 1e-6


class PipelineError(RuntimeError):
    """A verification step failed; ``payload`` describes it."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


def exact(value):
    if isinstance(value, bool):
        return {"value": value, "provenance": "exact"}
    if hasattr(value, "numerator") and getattr(value, "denominator", 1) != 1:
        return {"num": str(value.numerator), "den": str(value.denominator),
                "provenance": "exact"}
    return {"value": str(int(value)), "provenance": "exact"}


def numeric(value, error):
    return {"value": repr(float(value)), "error_bound": repr(float(error)),
            "provenance": "numeric"}


def dumps(payload):
    return json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class RunConfig:
    q: int
    a: int = 1
    precision_bits: int = DEFAULT_PRECISION
    jobs: int = 1
    psi_scale: int = 1
    allow_small_char: bool = False
    oracle_budget: int = None

    @property
    def min_char(self):
        return 5 if self.allow_small_char else 7

    def header(self, command):
        params = FieldParams.from_q(self.q, self.min_char)
        return {"schema": SCHEMA, "version": __version__, "command": command,
                "q": self.q, "a": self.a, "p": params.p, "e": params.e,
                "precision_bits": self.precision_bits,
                "hypothesis": "p>=7" if params.p >= 7 else "out-of-hypothesis"}


def level_for(cfg):
    return get_level(cfg.q, cfg.a, cfg.precision_bits, cfg.psi_scale, cfg.min_char)


@lru_cache(maxsize=8)
def _assembled(q, a, precision_bits, psi_scale, min_char, jobs):
    level = get_level(q, a, precision_bits, psi_scale, min_char)
    blocks = block_polynomials(level, jobs)
    return blocks, product_tree(blocks)


def assembled(cfg):
    """``(block polynomials, L)`` for a config (cached, independent of jobs)."""
    return _assembled(cfg.q, cfg.a, cfg.precision_bits, cfg.psi_scale, cfg.min_char, 1) \
        if cfg.jobs <= 1 else \
        _assembled(cfg.q, cfg.a, cfg.precision_bits, cfg.psi_scale, cfg.min_char, cfg.jobs)


# -- lfun ------------------------------------------------------------------------


def run_lfun(cfg):
    level = level_for(cfg)
    blocks, L = assembled(cfg)
    deg = expected_degree(cfg.q, cfg.a)
    if L.degree != deg or L[0] != 1:
        raise PipelineError("degree or constant term mismatch",
                            {"degree": L.degree, "expected": deg, "constant": str(L[0])})
    w = verify_functional_equation(L, cfg.q, cfg.a)
    rh = verify_riemann_hypothesis(L, cfg.q, RH_TOLERANCE, level=level, factors=blocks)
    sv = special_value(L, cfg.q)
    ang = special_value_angles(cfg.q, cfg.a, level=level)
    log_exact = log_special_value(sv)
    rel = abs(math.expm1(float(ang.log_value - log_exact)))
    if rel > SPECIAL_VALUE_RTOL:
        raise PipelineError("special value routes disagree", {"relative_difference": rel})
    out = cfg.header("lfun")
    out["field"] = level.field.metadata()
    out["l_polynomial"] = L.to_json(q=cfg.q, a=cfg.a, provenance="exact")
    out["blocks"] = [str(b.degree) for b in blocks]
    out["verification"] = {
        "degree": exact(L.degree),
        "expected_degree": exact(deg),
        "constant_term": exact(L[0]),
        "integrality": exact(True),
        "functional_equation_sign": exact(w),
        "riemann_hypothesis": {
            "certified": exact(rh.certified),
            "tolerance": repr(rh.tolerance),
            "factor_deviation": numeric(rh.factor_deviation, 2.0 ** -(cfg.precision_bits - 8)),
            "block_root_deviation": numeric(rh.numeric_deviation, FLOAT_STAT_ERROR),
        },
    }
    out["special_value"] = {
        "exact": exact(sv),
        "log": numeric(log_exact, 2.0 ** -100),
        "angle_route_log": numeric(ang.log_value, ang.log_error),
        "relative_difference": numeric(rel, float(ang.log_error) + 1e-30),
        "analytic_rank": exact(0),
    }
    return out


def lfun_text(payload):
    v = payload["verification"]
    rh = v["riemann_hypothesis"]
    return "\n".join([
        f"L(S_a, T) for q={payload['q']}, a={payload['a']}",
        f"  degree              {v['degree']['value']} (expected {v['expected_degree']['value']})",
        f"  constant term       {v['constant_term']['value']}",
        f"  functional eq. sign {v['functional_equation_sign']['value']}",
        f"  RH certified        {rh['certified']['value']}",
        f"  RH max deviation    {rh['factor_deviation']['value']} (factors), "
        f"{rh['block_root_deviation']['value']} (block roots)",
        f"  log L(1/q)          {payload['special_value']['log']['value']}",
    ]) + "\n"


# -- sha -------------------------------------------------------------------------


def run_sha(cfg):
    level = level_for(cfg)
    _, L = assembled(cfg)
    rep = sha_report(cfg.q, cfg.a, L, level, min_char=cfg.min_char)
    out = cfg.header("sha")
    body = rep.to_json()
    body.pop("q"), body.pop("a")
    out.update(body)
    out["dim_sha"] = exact(rep.dim_sha)
    out["flagged"] = [{"c_inf": c.c_inf, "torsion": str(c.torsion)} for c in rep.flagged]
    return out


def sha_text(payload):
    lines = [f"BSD ledger for q={payload['q']}, a={payload['a']}",
             f"  h = {payload['invariants']['h']}, deg N = "
             f"{payload['invariants']['conductor_degree']}",
             f"  torsion bound {payload['torsion']['bound']} "
             f"(running gcd {', '.join(payload['torsion']['running_gcd'])})",
             f"  dim Sha {payload['dim_sha']['value']}",
             f"  log L*/log H {payload['log_special_over_log_height']['value']}",
             "  c_inf  t     |Sha| candidate (integral?)"]
    for c in payload["candidates"]:
        val = c["num"] if c["den"] == "1" else f"{c['num']}/{c['den']}"
        if len(val) > 40:
            val = val[:18] + "..." + val[-18:]
        lines.append(f"  {c['c_inf']:<6} {c['torsion']:<5} {val} ({'yes' if c['integral'] else 'no'})")
    return "\n".join(lines) + "\n"


# -- angles and discrepancy ----------------------------------------------------------


ANGLE_COLUMNS = ["q", "a", "place", "beta_coords", "size", "theta"]
SUMMARY_COLUMNS = ["q", "a", "places", "star_discrepancy", "bound_scale", "bound_ratio"]
SWEEP_COLUMNS = ["q", "a", "places", "log_special", "log_height", "ratio", "a_times_ratio",
                 "bs_lower", "bs_upper", "star_discrepancy", "discrepancy_ratio"]


def run_angles(cfg):
    level = level_for(cfg)
    sample = angle_sample(cfg.q, cfg.a, level)
    rows = []
    for i in sample.places:
        v = level.places[i]
        kv = level.place_kloosterman_values[i]
        coords = level.field.digits(v.rep).tolist()
        rows.append({"q": cfg.q, "a": cfg.a, "place": i,
                     "beta_coords": " ".join(str(c) for c in coords),
                     "size": v.size, "theta": mp_str(kv.angle)})
    out = cfg.header("angles")
    out["angles"] = [dict(r, theta=numeric_str(r["theta"], level.place_kloosterman_values[r["place"]].angle_err))
                     for r in rows]
    out["count"] = exact(sample.count)
    return out, rows


def mp_str(x, digits=30):
    import mpmath
    return mpmath.nstr(x, digits, strip_zeros=False)


def numeric_str(value, error):
    return {"value": value, "error_bound": repr(float(error)), "provenance": "numeric"}


def discrepancy_row(cfg, level=None):
    level = level or level_for(cfg)
    sample = angle_sample(cfg.q, cfg.a, level)
    d = star_discrepancy(sample.angles)
    scale = discrepancy_scale(cfg.q, cfg.a)
    return {"q": cfg.q, "a": cfg.a, "places": sample.count, "star_discrepancy": d,
            "bound_scale": scale, "bound_ratio": d / scale}, sample


def run_discrepancy(cfg):
    row, sample = discrepancy_row(cfg)
    out = cfg.header("discrepancy")
    out["star_discrepancy"] = numeric(row["star_discrepancy"], FLOAT_STAT_ERROR)
    out["bound_scale"] = repr(row["bound_scale"])
    out["bound_ratio"] = numeric(row["bound_ratio"], FLOAT_STAT_ERROR / row["bound_scale"])
    out["places"] = exact(row["places"])
    out["weyl"] = [{"n": n, "mean": numeric(weyl_sum(sample.angles, n), FLOAT_STAT_ERROR),
                    "scale": repr(weyl_scale(cfg.q, cfg.a, n))} for n in (1, 2, 3, 4)]
    return out, [row]


# -- verify --------------------------------------------------------------------------


def run_verify(cfg):
    """Every oracle and identity check for one level; never raises on a
    failed check, which is reported instead."""
    level = level_for(cfg)
    checks = []

    def record(name, fn):
        try:
            detail = fn()
            checks.append({"check": name, "ok": True, "detail": detail})
        except Exception as exc:  # report, do not abort the remaining checks
            checks.append({"check": name, "ok": False, "detail": f"{type(exc).__name__}: {exc}"})

    sums_budget = cfg.oracle_budget or 10 ** 6
    count_budget = cfg.oracle_budget or 10 ** 7

    def sums():
        r = direct_sums_check(cfg.q, cfg.a, sums_budget, level, cfg.min_char)
        return {"gauss": r.gauss_checked, "kloosterman": r.kloosterman_checked,
                "skipped": r.skipped}

    def counts():
        r = point_count_check(cfg.q, cfg.a, 3, count_budget, level, cfg.min_char)
        return {"rows": [{k: (v if not isinstance(v, float) else repr(v)) for k, v in row.items()}
                         for row in r.rows],
                "skipped": [f"{c}{k}" for c, k in r.skipped]}

    def identities():
        r = identity_suite(cfg.q, cfg.a, level, sums_budget, cfg.min_char)
        return {"checked": r.checked, "prime": list(r.prime) if r.prime else None}

    def squarefree():
        r = squarefree_check(cfg.q, cfg.a)
        if not r.squarefree:
            raise AssertionError("℘² − 4 is not squarefree")
        return {"gcd_degree": r.gcd_degree, "discriminant_samples": r.discriminant_samples}

    def lfun():
        p = run_lfun(cfg)
        return {"degree": p["verification"]["degree"]["value"],
                "w": p["verification"]["functional_equation_sign"]["value"],
                "rh_certified": p["verification"]["riemann_hypothesis"]["certified"]["value"]}

    def gaps():
        rows = min_angle_gap(cfg.q, cfg.a, level)
        bad = [r for r in rows if not r.ok]
        if bad:
            raise AssertionError(f"angle coincidence at sizes {[r.size for r in bad]}")
        return [{"size": r.size, "min_gap": repr(r.min_gap)} for r in rows]

    def gauss_angles():
        g = gauss_angle_structure(cfg.q, cfg.a, level)
        return {"classes": {str(k): v for k, v in g.classes.items()}}

    record("direct_sums", sums)
    record("identities", identities)
    record("point_counts", counts)
    record("squarefree", squarefree)
    record("lfun", lfun)
    record("angle_gaps", gaps)
    record("gauss_angle_classes", gauss_angles)
    out = cfg.header("verify")
    out["checks"] = checks
    out["ok"] = all(c["ok"] for c in checks)
    return out


def verify_text(payload):
    lines = [f"oracles for q={payload['q']}, a={payload['a']}"]
    for c in payload["checks"]:
        lines.append(f"  {'PASS' if c['ok'] else 'FAIL'}  {c['check']}")
    return "\n".join(lines) + "\n"


# -- sweep ---------------------------------------------------------------------------


def sweep_row(cfg):
    level = level_for(cfg)
    _, L = assembled(cfg)
    tors = torsion_bound(cfg.q, cfg.a, min_char=cfg.min_char)
    rep = sha_report(cfg.q, cfg.a, L, level, torsion=tors, min_char=cfg.min_char)
    drow, _ = discrepancy_row(cfg, level)
    log_l = float(log_special_value(rep.special_value))
    log_h = rep.invariants.log_height
    return {"q": cfg.q, "a": cfg.a, "places": drow["places"], "log_special": log_l,
            "log_height": log_h, "ratio": log_l / log_h, "a_times_ratio": cfg.a * log_l / log_h,
            "bs_lower": rep.bs_interval[0], "bs_upper": rep.bs_interval[1],
            "star_discrepancy": drow["star_discrepancy"],
            "discrepancy_ratio": drow["bound_ratio"], "torsion_bound": tors.bound,
            "height": rep.invariants.h}


@dataclass(frozen=True)
class SweepFit:
    c_ratio: float
    c1: float
    c2: float
    c_discrepancy: float
    c_torsion: float


def fit_sweep(rows):
    """Single constants for the whole sweep.

    ``|log L*/log H| ≤ c/a``, ``Bs ∈ [1 − c₁/a, 1 + c₂/a]`` (an integral
    candidate at each end), ``D* ≤ C a^{1/2}/q^{a/4}`` and
    ``|tors|² ≤ C_t h⁴``.
    """
    return SweepFit(
        c_ratio=fit_constant([abs(r["a_times_ratio"]) for r in rows]),
        c1=fit_constant([max(0.0, r["a"] * (1 - r["bs_lower"])) for r in rows]),
        c2=fit_constant([max(0.0, r["a"] * (r["bs_upper"] - 1)) for r in rows]),
        c_discrepancy=fit_constant([r["discrepancy_ratio"] for r in rows]),
        c_torsion=fit_constant([r["torsion_bound"] ** 2 / r["height"] ** 4 for r in rows]))


def run_sweep(cfg, a_max):
    rows = [sweep_row(RunConfig(cfg.q, a, cfg.precision_bits, cfg.jobs, cfg.psi_scale,
                                cfg.allow_small_char, cfg.oracle_budget))
            for a in range(1, a_max + 1)]
    fit = fit_sweep(rows)
    out = cfg.header("sweep")
    out.pop("a")
    out["a_max"] = a_max
    out["rows"] = [{k: (repr(v) if isinstance(v, float) else str(v) if isinstance(v, int) else v)
                    for k, v in r.items()} for r in rows]
    out["fit"] = {k: repr(v) for k, v in fit.__dict__.items()}
    out["provenance"] = "numeric (logs of exact rationals; float64 statistics)"
    out["liouville"] = {"sigma_p": repr(GapConstants(out["p"]).sigma_p),
                        "tau_3": repr(GapConstants(out["p"]).tau(3)),
                        "tau_6": repr(GapConstants(out["p"]).tau(6))}
    return out, rows


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


PLOTTER = '''"""Plot the sweep table written by ``artsha sweep`` (needs matplotlib)."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv}"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
a = [int(r["a"]) for r in rows]
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
axes[0].plot(a, [float(r["ratio"]) for r in rows], "o-")
axes[0].set_title("log L* / log H")
axes[1].plot(a, [float(r["bs_lower"]) for r in rows], "v-", label="lower")
axes[1].plot(a, [float(r["bs_upper"]) for r in rows], "^-", label="upper")
axes[1].axhline(1.0, color="gray", lw=0.5)
axes[1].set_title("Brauer-Siegel candidates")
axes[1].legend()
axes[2].semilogy(a, [float(r["star_discrepancy"]) for r in rows], "o-")
axes[2].set_title("star discrepancy")
for ax in axes:
    ax.set_xlabel("a")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)
'''


def plotter_script(csv_name):
    return PLOTTER.replace("{csv}", csv_name)
