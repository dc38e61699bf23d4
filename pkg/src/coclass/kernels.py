"""Hot linear-algebra kernels over small prime fields.

The inner loops that dominate every resolution computation (row reduction
and matrix products mod p, plus bit-packed GF(2) variants) exist twice:
as numba-jitted loops and as vectorized pure-numpy code.  The jitted path
is the default; setting COCLASS_NO_NUMBA=1 in the environment (or numba
being unimportable) selects the numpy path.  Both paths compute reduced
row echelon forms, which are unique, so results are identical either way.

Conventions shared by all kernels:
  * odd-p matrices are C-contiguous uint8 arrays of residues in [0, p);
  * GF(2) matrices are uint64 word arrays, column j living in bit j % 64
    of word j // 64, with unused tail bits always zero;
  * rref_* operate in place and return the pivot column indices;
  * pivot choice is the first nonzero entry scanning down, a pure
    function of the matrix contents (no threading, no randomness).
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("COCLASS_NO_NUMBA", "").strip().lower()
USE_NUMBA = _flag not in ("1", "true", "yes", "on")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


# ---------------------------------------------------------------------------
# pure-numpy implementations (always available)

def _inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    return inv


def rref_u8_numpy(a, p):
    """In-place RREF of a uint8 matrix mod p; returns pivot columns.

    Reduction is delayed: only the pivot row and pivot column are brought
    into [0, p) per step, so each entry grows by at most (p-1)^2 per
    pivot — bounded by pivots * p^2 < 2^63 for any matrix this package
    can reach — and the full matrix is reduced once at the end.
    """
    rows, cols = a.shape
    inv = _inverse_table(p)
    work = a.astype(np.int64)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        work[:, c] %= p
        nz = np.flatnonzero(work[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        work[r] %= p
        f = int(inv[work[r, c]])
        if f != 1:
            work[r] *= f
            work[r] %= p
        col = work[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size > rows // 2:
            work -= col[:, None] * work[r]
        elif hit.size:
            work[hit] -= col[hit, None] * work[r]
        pivots.append(c)
        r += 1
    work %= p
    a[:] = work.astype(np.uint8)
    return np.asarray(pivots, dtype=np.int64)


def matmul_u8_numpy(a, b, p):
    """(a @ b) mod p for uint8 operands.

    Goes through float64 matmul (BLAS) — exact as long as inner products
    stay under 2^53, i.e. for inner dimensions up to ~1.4e11 at p <= 251.
    """
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(prod, p).astype(np.uint8)


def rref_b2_numpy(w, ncols):
    """In-place RREF of a bit-packed GF(2) matrix; returns pivot columns."""
    rows = w.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        wi, bi = divmod(c, 64)
        bit = np.uint64(1) << np.uint64(bi)
        nz = np.flatnonzero((w[r:, wi] & bit) != 0)
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            w[[r, pr]] = w[[pr, r]]
        mask = (w[:, wi] & bit) != 0
        mask[r] = False
        if mask.any():
            w[mask] ^= w[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def matmul_b2_numpy(aw, bw, a_cols):
    """GF(2) product of packed matrices: row i of result is the XOR of the
    rows of ``bw`` selected by the set bits of row i of ``aw``."""
    out = np.zeros((aw.shape[0], bw.shape[1]), dtype=np.uint64)
    for j in range(a_cols):
        wi, bi = divmod(j, 64)
        bit = np.uint64(1) << np.uint64(bi)
        mask = (aw[:, wi] & bit) != 0
        if mask.any():
            out[mask] ^= bw[j]
    return out


# ---------------------------------------------------------------------------
# numba implementations (same pivot rule, loop form)

if USE_NUMBA:

    @njit(cache=True)
    def _rref_u8_jit(a, p):
        rows, cols = a.shape
        inv = np.zeros(p, dtype=np.int64)
        for x in range(1, p):
            y = 1
            for _ in range(p - 2):
                y = (y * x) % p
            inv[x] = y
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(cols):
                    t = a[r, k]
                    a[r, k] = a[piv, k]
                    a[piv, k] = t
            f = inv[a[r, c]]
            if f != 1:
                for k in range(c, cols):
                    a[r, k] = (np.int64(a[r, k]) * f) % p
            for i in range(rows):
                if i == r:
                    continue
                g = np.int64(a[i, c])
                if g != 0:
                    gg = p - g
                    for k in range(c, cols):
                        a[i, k] = (np.int64(a[i, k]) + gg * np.int64(a[r, k])) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    @njit(cache=True)
    def _matmul_u8_jit(a, b, p):
        n, k = a.shape
        m = b.shape[1]
        out = np.empty((n, m), dtype=np.uint8)
        acc = np.empty(m, dtype=np.int64)
        for i in range(n):
            for j in range(m):
                acc[j] = 0
            for t in range(k):
                v = np.int64(a[i, t])
                if v != 0:
                    for j in range(m):
                        acc[j] += v * np.int64(b[t, j])
            for j in range(m):
                out[i, j] = acc[j] % p
        return out

    @njit(cache=True)
    def _rref_b2_jit(w, ncols):
        rows, nwords = w.shape
        pivots = np.empty(min(rows, ncols), dtype=np.int64)
        r = 0
        for c in range(ncols):
            if r == rows:
                break
            wi = c >> 6
            bit = np.uint64(1) << np.uint64(c & 63)
            piv = -1
            for i in range(r, rows):
                if w[i, wi] & bit:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(nwords):
                    t = w[r, k]
                    w[r, k] = w[piv, k]
                    w[piv, k] = t
            for i in range(rows):
                if i != r and (w[i, wi] & bit):
                    for k in range(wi, nwords):
                        w[i, k] ^= w[r, k]
            pivots[r] = c
            r += 1
        return pivots[:r]

    @njit(cache=True)
    def _matmul_b2_jit(aw, bw, a_cols):
        rows = aw.shape[0]
        owords = bw.shape[1]
        out = np.zeros((rows, owords), dtype=np.uint64)
        for i in range(rows):
            for j in range(a_cols):
                wi = j >> 6
                bit = np.uint64(1) << np.uint64(j & 63)
                if aw[i, wi] & bit:
                    for k in range(owords):
                        out[i, k] ^= bw[j, k]
        return out

    rref_u8 = _rref_u8_jit
    matmul_u8 = _matmul_u8_jit
    rref_b2 = _rref_b2_jit
    matmul_b2 = _matmul_b2_jit
else:
    rref_u8 = rref_u8_numpy
    matmul_u8 = matmul_u8_numpy
    rref_b2 = rref_b2_numpy
    matmul_b2 = matmul_b2_numpy
