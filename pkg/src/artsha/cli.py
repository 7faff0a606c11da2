"""Command line entry point: ``artsha <command> [options]``.

Exit status is 0 when every verification of the command passes, 2 for bad
arguments and 1 otherwise; failures print a JSON error object on stderr.
"""

import argparse
import json
import os
import sys

from . import pipeline
from .cyclo import DEFAULT_PRECISION
from .pipeline import RunConfig, dumps, rows_to_csv

COMMANDS = ("lfun", "sha", "angles", "discrepancy", "verify", "sweep")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="artsha",
        description="L-functions, BSD data and Kloosterman angle statistics for "
                    "the surfaces S_a over F_q.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--q", type=int, required=True, help="base field size (p ≥ 7)")
    parser.add_argument("--a", type=int, default=1, help="level (default 1)")
    parser.add_argument("--a-max", type=int, default=None, help="largest level for sweep")
    parser.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for blocks")
    parser.add_argument("--oracle-budget", type=int, default=None,
                        help="max field size for brute-force oracles")
    parser.add_argument("--out", default=None, help="directory for JSON/CSV artifacts")
    parser.add_argument("--format", choices=("json", "csv", "text"), default="text")
    parser.add_argument("--allow-small-char", action="store_true",
                        help="permit p = 5 (results tagged out-of-hypothesis)")
    return parser


def _write(out_dir, name, text):
    if out_dir is None:
        return
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _stem(cfg, command, a_max=None):
    if command == "sweep":
        return f"sweep_q{cfg.q}_a1-{a_max}"
    return f"{command}_q{cfg.q}_a{cfg.a}"


def _sweep_text(payload):
    head = f"{'a':>3} {'places':>7} {'logL*/logH':>11} {'a*ratio':>9} {'Bs lo':>7} " \
           f"{'Bs hi':>7} {'D*':>8} {'D*/scale':>9}"
    lines = [f"sweep q={payload['q']}", head]
    for r in payload["rows"]:
        lines.append(f"{r['a']:>3} {r['places']:>7} {float(r['ratio']):>11.5f} "
                     f"{float(r['a_times_ratio']):>9.5f} {float(r['bs_lower']):>7.4f} "
                     f"{float(r['bs_upper']):>7.4f} {float(r['star_discrepancy']):>8.5f} "
                     f"{float(r['discrepancy_ratio']):>9.5f}")
    lines.append("fitted constants: " + ", ".join(f"{k}={float(v):.4f}"
                                                  for k, v in sorted(payload["fit"].items())))
    return "\n".join(lines) + "\n"


def run(args):
    """Execute a parsed command; returns ``(payload, stdout text, exit code)``."""
    cfg = RunConfig(args.q, args.a, args.precision_bits, args.jobs, 1,
                    args.allow_small_char, args.oracle_budget)
    cmd = args.command
    stem = _stem(cfg, cmd, args.a_max)
    rows, columns, text, code = None, None, None, 0
    if cmd == "lfun":
        payload = pipeline.run_lfun(cfg)
        text = pipeline.lfun_text(payload)
    elif cmd == "sha":
        payload = pipeline.run_sha(cfg)
        text = pipeline.sha_text(payload)
    elif cmd == "angles":
        payload, rows = pipeline.run_angles(cfg)
        columns = pipeline.ANGLE_COLUMNS
    elif cmd == "discrepancy":
        payload, rows = pipeline.run_discrepancy(cfg)
        columns = pipeline.SUMMARY_COLUMNS
    elif cmd == "verify":
        payload = pipeline.run_verify(cfg)
        text = pipeline.verify_text(payload)
        code = 0 if payload["ok"] else 1
    else:
        if args.a_max is None:
            raise ValueError("sweep needs --a-max")
        payload, rows = pipeline.run_sweep(cfg, args.a_max)
        columns = pipeline.SWEEP_COLUMNS
        text = _sweep_text(payload)
        _write(args.out, f"plot_{stem}.py", pipeline.plotter_script(f"{stem}.csv"))
    body = dumps(payload)
    _write(args.out, f"{stem}.json", body)
    csv_text = rows_to_csv(rows, columns) if rows is not None else None
    if csv_text is not None:
        _write(args.out, f"{stem}.csv", csv_text)
    if args.format == "json":
        out = body
    elif args.format == "csv":
        if csv_text is None:
            raise ValueError(f"{cmd} has no tabular output; use json or text")
        out = csv_text
    else:
        out = text if text is not None else (csv_text or body)
    return payload, out, code


def _error(kind, exc, payload=None):
    err = {"error": kind, "message": str(exc)}
    if payload:
        err["detail"] = payload
    sys.stderr.write(json.dumps(err, sort_keys=True, default=str) + "\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _, out, code = run(args)
    except ValueError as exc:
        _error("invalid-argument", exc)
        return 2
    except pipeline.PipelineError as exc:
        _error("verification-failed", exc, exc.payload)
        return 1
    except (AssertionError, ArithmeticError) as exc:
        _error("verification-failed", exc)
        return 1
    sys.stdout.write(out)
    if code:
        _error("verification-failed", "one or more checks failed")
    return code
