"""Dense mod-p elimination kernels on int64 arrays.

Two interchangeable backends compute row-reduced echelon forms over
GF(p): a numba-jitted loop kernel and a vectorized pure-numpy fallback.
Selection: environment variable QHW_JIT=0 forces the numpy path;
otherwise numba is used when importable.  Both backends are exercised
by the test suite and by benchmarks/bench_modp.py.

Requires p < 2**31 so that products of reduced entries fit in int64.
"""

from __future__ import annotations

import os

import numpy as np

_P_MAX = 1 << 31


def _check(a, p):
    if not (2 <= p < _P_MAX):
        raise ValueError(f"modulus {p} out of supported range")
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return np.mod(a, p)


def _rref_modp_numpy(a, p):
    """Vectorized RREF over GF(p).  Returns (rref, pivot column array)."""
    a = a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        rows = np.nonzero(a[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def _rref_modp_loops(a, p):
    # Plain-loop version of the same algorithm; this is what numba compiles.
    a = a.copy()
    nrows, ncols = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        # inverse by Fermat: x^(p-2) mod p
        inv = np.int64(1)
        base = a[r, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(c, ncols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(c, ncols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return a, pivots[:r].copy()


_use_numba = os.environ.get("QHW_JIT", "1") != "0"
if _use_numba:
    try:
        from numba import njit

        _rref_modp_numba = njit(cache=True)(_rref_modp_loops)
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _use_numba = False


def backend_name() -> str:
    return "numba" if _use_numba else "numpy"


def rref_modp(a, p, backend=None):
    """RREF of an integer matrix over GF(p).

    Returns (rref array, pivot column array).  `backend` may force
    "numba" or "numpy"; by default the module-level selection applies.
    """
    a = _check(a, p)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a, np.empty(0, dtype=np.int64)
    if backend is None:
        backend = backend_name()
    if backend == "numba":
        if not _use_numba:
            raise RuntimeError("numba backend unavailable (QHW_JIT=0 or import failed)")
        return _rref_modp_numba(a, np.int64(p))
    if backend == "numpy":
        return _rref_modp_numpy(a, p)
    raise ValueError(f"unknown backend {backend!r}")


def rank_modp(a, p, backend=None) -> int:
    _, pivots = rref_modp(a, p, backend=backend)
    return int(pivots.size)


def nullspace_modp(a, p, backend=None):
    """Basis of the right null space over GF(p), as columns of an array."""
    a = _check(a, p)
    ncols = a.shape[1]
    r, pivots = rref_modp(a, p, backend=backend)
    piv = set(int(c) for c in pivots)
    free = [c for c in range(ncols) if c not in piv]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[int(pc), k] = (-int(r[i, fc])) % p
    return basis
