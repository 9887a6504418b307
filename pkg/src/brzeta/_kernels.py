"""Matrix kernels over small finite fields: numba-jitted with a numpy fallback.

All arithmetic is table-driven so prime and prime-power fields share one code
path: each kernel takes dense int64 ``add``/``mul``/``neg``/``inv`` lookup
tables built by :mod:`brzeta.gfq`.  The backend is selected once at import:

* ``BRZETA_BACKEND=numba``  require numba (ImportError if missing)
* ``BRZETA_BACKEND=numpy``  force the pure-numpy implementations
* unset                     numba when importable, else numpy
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("BRZETA_BACKEND", "").strip().lower()
if _REQUESTED not in ("", "numba", "numpy"):
    raise ImportError(f"BRZETA_BACKEND must be 'numba' or 'numpy', got {_REQUESTED!r}")

HAS_NUMBA = False
if _REQUESTED != "numpy":
    try:
        import numba as _nb

        HAS_NUMBA = True
    except ImportError:
        if _REQUESTED == "numba":
            raise
        HAS_NUMBA = False


def _rref_impl(a, add, mul, neg, inv, pivots):
    """Reduce ``a`` to reduced row echelon form in place.

    Returns the rank; ``pivots[:rank]`` receives the pivot columns.
    """
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        p = -1
        for r in range(rank, rows):
            if a[r, c] != 0:
                p = r
                break
        if p < 0:
            continue
        if p != rank:
            for j in range(cols):
                t = a[rank, j]
                a[rank, j] = a[p, j]
                a[p, j] = t
        piv = a[rank, c]
        if piv != 1:
            s = inv[piv]
            for j in range(cols):
                a[rank, j] = mul[s, a[rank, j]]
        for r in range(rows):
            if r != rank and a[r, c] != 0:
                f = neg[a[r, c]]
                for j in range(cols):
                    a[r, j] = add[a[r, j], mul[f, a[rank, j]]]
        pivots[rank] = c
        rank += 1
    return rank


def _matmul_impl(a, b, add, mul):
    """Table-driven matrix product of int64 matrices over the field."""
    n, kk = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for k in range(kk):
            v = a[i, k]
            if v != 0:
                for j in range(m):
                    out[i, j] = add[out[i, j], mul[v, b[k, j]]]
    return out


def numpy_rref(a, add, mul, neg, inv, pivots):
    """Vectorized fallback with the same contract as the jitted kernel."""
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        p = rank + nz[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
        piv = a[rank, c]
        if piv != 1:
            a[rank] = mul[inv[piv], a[rank]]
        col = a[:, c].copy()
        col[rank] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = add[a[hit], mul[neg[col[hit]][:, None], a[rank][None, :]]]
        pivots[rank] = c
        rank += 1
    return rank


def numpy_matmul(a, b, add, mul):
    n = a.shape[0]
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for k in range(a.shape[1]):
        col = a[:, k]
        if np.any(col):
            out = add[out, mul[col[:, None], b[k][None, :]]]
    return out


if HAS_NUMBA:
    numba_rref = _nb.njit(cache=True)(_rref_impl)
    numba_matmul = _nb.njit(cache=True)(_matmul_impl)
    rref_kernel = numba_rref
    matmul_kernel = numba_matmul
    BACKEND = "numba"
else:
    numba_rref = None
    numba_matmul = None
    rref_kernel = numpy_rref
    matmul_kernel = numpy_matmul
    BACKEND = "numpy"
