"""Inner loops of the jet arithmetic.

Two interchangeable backends implement the same contract on contiguous
``(n, 10)`` float64 arrays of Taylor coefficients:

* ``numba`` -- explicit loops compiled with ``@njit``;
* ``numpy`` -- table-driven ``einsum`` contractions.

The numba path is used when numba imports cleanly and the environment
variable ``LIGHTLIKE_NO_NUMBA`` is unset (or ``0``).  Both backends are
always importable by name so they can be compared directly.
"""
import os

import numpy as np

NCOEF = 10
MAXDEG = 3

# Monomials u^i v^j ordered by total degree, then by decreasing power of u.
MONOMIALS = [(i, d - i) for d in range(MAXDEG + 1) for i in range(d, -1, -1)]
INDEX = {m: k for k, m in enumerate(MONOMIALS)}
DEGREE = np.array([i + j for i, j in MONOMIALS], dtype=np.int64)


def _product_table():
    left, right, dest = [], [], []
    for a, (ia, ja) in enumerate(MONOMIALS):
        for b, (ib, jb) in enumerate(MONOMIALS):
            key = (ia + ib, ja + jb)
            if key[0] + key[1] <= MAXDEG:
                left.append(a)
                right.append(b)
                dest.append(INDEX[key])
    return (np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
            np.array(dest, dtype=np.int64))


PROD_LEFT, PROD_RIGHT, PROD_DEST = _product_table()

# Dense form of the same table for the numpy backend: T[a, b, k] = 1.
PROD_TENSOR = np.zeros((NCOEF, NCOEF, NCOEF))
PROD_TENSOR[PROD_LEFT, PROD_RIGHT, PROD_DEST] = 1.0


def _derivative_maps():
    src_u, dst_u, fac_u, src_v, dst_v, fac_v = [], [], [], [], [], []
    for k, (i, j) in enumerate(MONOMIALS):
        if i > 0:
            src_u.append(k)
            dst_u.append(INDEX[(i - 1, j)])
            fac_u.append(float(i))
        if j > 0:
            src_v.append(k)
            dst_v.append(INDEX[(i, j - 1)])
            fac_v.append(float(j))
    return tuple(np.array(x) for x in (src_u, dst_u, fac_u, src_v, dst_v, fac_v))


DU_SRC, DU_DST, DU_FAC, DV_SRC, DV_DST, DV_FAC = _derivative_maps()


# ---------------------------------------------------------------- numpy path

def _truncate(out, order):
    if order < MAXDEG:
        out[:, DEGREE > order] = 0.0
    return out


def mul_numpy(a, b, order):
    out = np.einsum("ni,nj,ijk->nk", a, b, PROD_TENSOR, optimize=False)
    return _truncate(out, order)


def horner_numpy(h, fk, order):
    # h has zero constant term; fk holds f(c), f'(c), f''(c)/2, f'''(c)/6
    n = h.shape[0]
    out = np.zeros((n, NCOEF))
    out[:, 0] = fk[:, 3]
    for k in (2, 1, 0):
        out = mul_numpy(out, h, order)
        out[:, 0] += fk[:, k]
    return out


# ---------------------------------------------------------------- numba path

try:
    import numba

    @numba.njit(cache=True)
    def mul_numba(a, b, order):
        n = a.shape[0]
        out = np.zeros((n, NCOEF))
        for r in range(n):
            for t in range(PROD_DEST.shape[0]):
                k = PROD_DEST[t]
                if DEGREE[k] <= order:
                    out[r, k] += a[r, PROD_LEFT[t]] * b[r, PROD_RIGHT[t]]
        return out

    @numba.njit(cache=True)
    def horner_numba(h, fk, order):
        n = h.shape[0]
        out = np.zeros((n, NCOEF))
        tmp = np.zeros(NCOEF)
        for r in range(n):
            acc = np.zeros(NCOEF)
            acc[0] = fk[r, 3]
            for step in range(3):
                c = fk[r, 2 - step]
                tmp[:] = 0.0
                for t in range(PROD_DEST.shape[0]):
                    k = PROD_DEST[t]
                    if DEGREE[k] <= order:
                        tmp[k] += acc[PROD_LEFT[t]] * h[r, PROD_RIGHT[t]]
                acc[:] = tmp
                acc[0] += c
            out[r, :] = acc
        return out

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    mul_numba = horner_numba = None
    HAVE_NUMBA = False


def _env_disables_numba():
    return os.environ.get("LIGHTLIKE_NO_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _env_disables_numba()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    mul = mul_numba
    horner = horner_numba
else:
    mul = mul_numpy
    horner = horner_numpy
