"""Inner loops over finite-field elements.

Everything here works on integer tables: elements of a field are encoded
as integers ``sum(c_i * p**i)`` and nonzero elements are addressed by
their discrete logarithm with respect to a fixed primitive element.  Each
kernel exists in a numba flavour and a numpy flavour with identical
results; :data:`BACKEND` names the one bound at import time.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# Rows per chunk in the vectorized Kloosterman fallback, to cap memory.
_CHUNK_CELLS = 1 << 22


# -- numpy implementations ---------------------------------------------------


def _trace_table_np(exp_c0, m, size, p, nterms, order):
    idx = (np.arange(size, dtype=np.int64) * m) % order
    acc = np.zeros(size, dtype=np.int64)
    for _ in range(nterms):
        acc += exp_c0[idx]
        idx = (idx * p) % order
    return acc % p


def _gauss_counts_np(tr, a0, cj, p, scale):
    size = tr.shape[0]
    k = np.arange(size, dtype=np.int64)
    e = (p * ((cj * k) % 3) + 3 * ((scale * tr[(a0 + k) % size]) % p)) % (3 * p)
    return np.bincount(e, minlength=3 * p).astype(np.int64)


def _kloosterman_counts_np(tr, starts, starts2, p, scale):
    size = tr.shape[0]
    out = np.zeros((starts.shape[0], p), dtype=np.int64)
    k = np.arange(size, dtype=np.int64)
    rows = max(1, _CHUNK_CELLS // max(size, 1))
    for lo in range(0, starts.shape[0], rows):
        b = starts[lo:lo + rows, None]
        b2 = starts2[lo:lo + rows, None]
        s = (tr[(b + k) % size] + tr[(b2 - k) % size]) * scale % p
        offs = np.arange(s.shape[0], dtype=np.int64)[:, None] * p
        flat = np.bincount((s + offs).ravel(), minlength=s.shape[0] * p)
        out[lo:lo + rows] = flat.reshape(s.shape[0], p)
    return out


def _digitwise_np(a, b, p, deg, sign):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    place = 1
    for _ in range(deg):
        da = (a // place) % p
        db = (b // place) % p
        out += ((da + sign * db) % p) * place
        place *= p
    return out


def _field_add_np(a, b, p, deg):
    return _digitwise_np(a, b, p, deg, 1)


def _field_sub_np(a, b, p, deg):
    return _digitwise_np(a, b, p, deg, -1)


# -- numba implementations ---------------------------------------------------


@njit
def _trace_table_nb(exp_c0, m, size, p, nterms, order):
    out = np.empty(size, dtype=np.int64)
    for k in range(size):
        idx = (k * m) % order
        s = 0
        for _ in range(nterms):
            s += exp_c0[idx]
            idx = (idx * p) % order
        out[k] = s % p
    return out


@njit
def _gauss_counts_nb(tr, a0, cj, p, scale):
    size = tr.shape[0]
    out = np.zeros(3 * p, dtype=np.int64)
    for k in range(size):
        e = (p * ((cj * k) % 3) + 3 * ((scale * tr[(a0 + k) % size]) % p)) % (3 * p)
        out[e] += 1
    return out


@njit
def _kloosterman_counts_nb(tr, starts, starts2, p, scale):
    size = tr.shape[0]
    out = np.zeros((starts.shape[0], p), dtype=np.int64)
    for r in range(starts.shape[0]):
        b = starts[r] % size
        b2 = starts2[r] % size
        for k in range(size):
            s = tr[(b + k) % size] + tr[(b2 - k + size) % size]
            out[r, (s * scale) % p] += 1
    return out


@njit
def _digitwise_nb(a, b, p, deg, sign):
    out = np.empty(a.shape[0], dtype=np.int64)
    for i in range(a.shape[0]):
        x = a[i]
        y = b[i]
        r = 0
        place = 1
        for _ in range(deg):
            d = (x % p + sign * (y % p)) % p
            r += d * place
            x //= p
            y //= p
            place *= p
        out[i] = r
    return out


def _field_add_nb(a, b, p, deg):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64),
                               np.asarray(b, dtype=np.int64))
    shape = a.shape
    return _digitwise_nb(a.ravel().copy(), b.ravel().copy(), p, deg, 1).reshape(shape)


def _field_sub_nb(a, b, p, deg):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64),
                               np.asarray(b, dtype=np.int64))
    shape = a.shape
    return _digitwise_nb(a.ravel().copy(), b.ravel().copy(), p, deg, -1).reshape(shape)


IMPLEMENTATIONS = {
    "numpy": {
        "trace_table": _trace_table_np,
        "gauss_counts": _gauss_counts_np,
        "kloosterman_counts": _kloosterman_counts_np,
        "field_add": _field_add_np,
        "field_sub": _field_sub_np,
    },
    "numba": {
        "trace_table": _trace_table_nb,
        "gauss_counts": _gauss_counts_nb,
        "kloosterman_counts": _kloosterman_counts_nb,
        "field_add": _field_add_nb,
        "field_sub": _field_sub_nb,
    },
}

BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = IMPLEMENTATIONS[BACKEND]


def trace_table(exp_c0, m, size, p, nterms, order):
    """Absolute traces of ``g**(m*k)`` for ``k < size``.

    ``exp_c0[i]`` is the constant coordinate of ``g**i``; the trace of an
    element is a prime-field element, so it is determined by constant
    coordinates of its conjugates ``g**(m*k*p**i)``, ``i < nterms``.
    """
    exp_c0 = np.ascontiguousarray(exp_c0, dtype=np.int64)
    return _impl["trace_table"](exp_c0, int(m), int(size), int(p), int(nterms), int(order))


def gauss_counts(tr, a0, cj, p, scale=1):
    """Histogram of exponents of ζ_{3p} in a cubic Gauss sum.

    Term ``k`` of the sum over ``x = g**k`` contributes
    ``ζ_3**(cj*k) * ζ_p**(scale*tr[a0 + k])``, written as ``ζ_{3p}`` to the
    power ``p*(cj*k mod 3) + 3*(scale*tr mod p)`` reduced mod 3p.
    """
    tr = np.ascontiguousarray(tr, dtype=np.int64)
    return _impl["gauss_counts"](tr, int(a0), int(cj) % 3, int(p), int(scale))


def kloosterman_counts(tr, starts, p, scale=1, starts2=None):
    """Histograms over ``Z/p`` of ``tr[b + k] + tr[b2 - k]``, one row per pair.

    With ``b2 = b`` (the default) and ``x = g**k`` this is the distribution
    of ``Tr(β x) + Tr(β / x)`` for ``β = g**b``.
    """
    tr = np.ascontiguousarray(tr, dtype=np.int64)
    starts = np.ascontiguousarray(np.atleast_1d(starts), dtype=np.int64)
    if starts2 is None:
        starts2 = starts
    starts2 = np.ascontiguousarray(np.broadcast_to(starts2, starts.shape), dtype=np.int64)
    return _impl["kloosterman_counts"](tr, starts, starts2, int(p), int(scale))


def field_add(a, b, p, deg):
    return _impl["field_add"](a, b, int(p), int(deg))


def field_sub(a, b, p, deg):
    return _impl["field_sub"](a, b, int(p), int(deg))
