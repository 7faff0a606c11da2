"""Time the numba and numpy kernel implementations on the same inputs.

    python3 benchmarks/bench_kernels.py [--q 7] [--degree 4] [--repeat 5]

Both flavours are imported from :data:`artsha.kernels.IMPLEMENTATIONS`, so
one process compares them regardless of ``ARTSHA_DISABLE_NUMBA``.  The
first numba call (compilation) is excluded from the timings, and outputs of
the two flavours are checked for equality.
"""

import argparse
import timeit

import numpy as np

from artsha import kernels
from artsha.ffield import FieldParams, field_suite


def cases(q, degree):
    params = FieldParams.from_q(q)
    F = field_suite(params, degree)
    order = F.order
    p = params.p
    nterms = params.e * degree
    tr = kernels.IMPLEMENTATIONS["numpy"]["trace_table"](
        np.ascontiguousarray(F.exp_c0, dtype=np.int64), 1, order, p, nterms, order)
    starts = np.arange(0, min(order, 512), dtype=np.int64)
    els = F.elements().astype(np.int64)
    rev = els[::-1].copy()
    return {
        "trace_table": (np.ascontiguousarray(F.exp_c0, dtype=np.int64), 1, order, p, nterms, order),
        "gauss_counts": (tr, 3, 1, p, 1),
        "kloosterman_counts": (tr, starts, starts, p, 1),
        "field_add": (els, rev, p, F.degree),
        "field_sub": (els, rev, p, F.degree),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=7)
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"field F_{args.q}^{args.degree}; best of {args.repeat}")
    print(f"{'kernel':<20} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, call_args in cases(args.q, args.degree).items():
        np_fn = kernels.IMPLEMENTATIONS["numpy"][name]
        nb_fn = kernels.IMPLEMENTATIONS["numba"][name]
        ref, got = np_fn(*call_args), nb_fn(*call_args)  # warm-up / compile
        if not np.array_equal(ref, got):
            raise SystemExit(f"{name}: numba and numpy outputs differ")
        t_np = min(timeit.repeat(lambda: np_fn(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: nb_fn(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<20} {1e3 * t_np:>10.3f} {1e3 * t_nb:>10.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
