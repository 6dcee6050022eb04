"""Rank, RREF, kernels and splittings over GF(p) and over the rationals.

GF(p) strategy: matrices live in float arrays as exact small integers.  A
compiled (or numpy) kernel eliminates one packed panel at a time; the trailing
block is updated with BLAS gemm calls.  Reduction mod p is delayed: the driver
tracks a worst-case magnitude bound and only normalizes when the next panel
could leave the exactly-representable range.  float32 carries p <= 256
(products < 2^16, so dozens of panels fit under the 2^24 budget and gemm runs
at full single-precision speed); float64 carries larger p under 2^53.  With
the bound enforced, float arithmetic is exact integer arithmetic, so results
do not depend on BLAS internals or threading.

Rational strategy: fraction-free Bareiss forward elimination on cleared
integer rows, then back-substitution into Fractions.

Pivoting is first-nonzero in row-major order everywhere, which makes rref,
kernel bases and right inverses deterministic.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ..errors import MatrixError
from ._backend import get_kernel
from .fields import FieldSpec
from .sparse import SparseMatrix

# sgemm on this class of hardware wants the contraction dimension >= ~96;
# the growth budget then forces a reduction pass every handful of panels
_PANEL = 192
_SUB = 32
_STRIPE = 4096
# below this many cells the structural prepass is not worth the bookkeeping
_PREPASS_CELLS = 200_000


def reduce_mod_inplace(W, p):
    """Exact mod-p of an integer-valued float array, in place.

    Much faster than np.remainder on floats: roundtrip through the matching
    integer dtype, chunked so temporaries stay small.
    """
    itype = np.int32 if W.dtype == np.float32 else np.int64
    if W.ndim == 1:
        t = W.astype(itype)
        t %= p
        W[:] = t
        return W
    step = max(1, (1 << 22) // max(1, W.shape[1]))
    for r0 in range(0, W.shape[0], step):
        blk = W[r0 : r0 + step]
        t = blk.astype(itype)
        t %= p
        blk[:] = t
    return W


class RrefResult(NamedTuple):
    rank: int
    pivot_columns: tuple
    reduced: SparseMatrix


def _dtype_budget(p):
    # budget = largest magnitude at which float arithmetic is still exact;
    # callers compare mag + next-panel slack against it
    if p <= 256:
        return np.float32, float(1 << 24)
    if p >= 1 << 23:
        raise MatrixError(f"modulus {p} too large for exact float64 carriers")
    return np.float64, float(1 << 53)


# ---------------------------------------------------------------------------
# GF(p) dense drivers


def _replay_swaps(T, swaps, base):
    for a, b in swaps:
        ra, rb = base + a, base + b
        T[[ra, rb], :] = T[[rb, ra], :]


def _striped_gemm_sub(T, L, U):
    # T -= L @ U without materializing a full-size temporary
    n = T.shape[1]
    for s0 in range(0, n, _STRIPE):
        s1 = min(s0 + _STRIPE, n)
        T[:, s0:s1] -= L @ U[:, s0:s1]


def gf_rank_array(W, p):
    """Rank of W (2-d float array of integers in [0, p)), destructive."""
    m, n = W.shape
    if m == 0 or n == 0:
        return 0
    kern = get_kernel()
    pp = float(p) * float(p)
    _, dmax = _dtype_budget(p)
    mag = float(p)
    k = 0
    c0 = 0
    while c0 < n and k < m:
        c1 = min(c0 + _PANEL, n)
        if mag + _PANEL * pp > dmax:
            reduce_mod_inplace(W[k:, c0:], p)
            mag = float(p)
        P = np.ascontiguousarray(W[k:, c0:c1])
        pivcols, swaps = kern.lu_panel(P, p)
        s = len(pivcols)
        if s and c1 < n:
            T = W[:, c1:]
            _replay_swaps(T, swaps, k)
            piv = np.asarray(pivcols, dtype=np.intp)
            # forward substitution through the pivot block, sub-blocked so
            # most of the work runs as gemm instead of rank-1 updates
            for j0 in range(0, s, _SUB):
                j1 = min(j0 + _SUB, s)
                for j in range(j0, j1):
                    r = k + j
                    reduce_mod_inplace(T[r], p)
                    if j + 1 < j1:
                        lcol = P[j + 1 : j1, pivcols[j]]
                        T[k + j + 1 : k + j1] -= np.outer(lcol, T[r])
                if j1 < s:
                    Lb = P[j1:s, piv[j0:j1]]
                    _striped_gemm_sub(T[k + j1 : k + s], Lb, T[k + j0 : k + j1])
            if k + s < m:
                L1 = P[s:, piv]
                _striped_gemm_sub(T[k + s :], L1, T[k : k + s])
            mag += s * pp
        k += s
        c0 = c1
    return k


def _structural_prepass(mat):
    """Peel singleton rows/columns off a sparse matrix before densifying.

    A row (column) with a single entry can be pivoted with no fill: the Schur
    complement is the matrix with that row and column deleted.  Cascades.
    Returns (rank_found, alive_rows, alive_cols).
    """
    rows_adj = [set() for _ in range(mat.rows)]
    cols_adj = [set() for _ in range(mat.cols)]
    for r, c, _ in mat.entries:
        rows_adj[r].add(c)
        cols_adj[c].add(r)
    queue = deque()
    for r in range(mat.rows):
        if len(rows_adj[r]) == 1:
            queue.append((0, r))
    for c in range(mat.cols):
        if len(cols_adj[c]) == 1:
            queue.append((1, c))
    alive_r = [True] * mat.rows
    alive_c = [True] * mat.cols
    rank = 0
    while queue:
        side, idx = queue.popleft()
        if side == 0:
            if not alive_r[idx] or len(rows_adj[idx]) != 1:
                continue
            r, c = idx, next(iter(rows_adj[idx]))
        else:
            if not alive_c[idx] or len(cols_adj[idx]) != 1:
                continue
            r, c = next(iter(cols_adj[idx])), idx
        rank += 1
        alive_r[r] = False
        alive_c[c] = False
        for c2 in rows_adj[r]:
            if c2 != c:
                cols_adj[c2].discard(r)
                if len(cols_adj[c2]) == 1 and alive_c[c2]:
                    queue.append((1, c2))
        for r2 in cols_adj[c]:
            if r2 != r:
                rows_adj[r2].discard(c)
                if len(rows_adj[r2]) == 1 and alive_r[r2]:
                    queue.append((0, r2))
        rows_adj[r] = set()
        cols_adj[c] = set()
    return rank, alive_r, alive_c


def _gf_dense(mat, dtype):
    return mat.to_float_array(dtype=dtype)


def gf_rref_array(W, p):
    """Full no-swap Gauss-Jordan of W in place.

    Returns (pivot_rows, pivot_columns), both in pivot order (columns
    ascending).  On return W is reduced mod p; pivot rows hold the RREF rows,
    every other row is zero.
    """
    m, n = W.shape
    if m == 0 or n == 0:
        return [], []
    kern = get_kernel()
    pp = float(p) * float(p)
    _, dmax = _dtype_budget(p)
    mag = float(p)
    eligible = np.ones(m, dtype=np.uint8)
    all_pr = []
    all_pc = []
    c0 = 0
    while c0 < n and len(all_pr) < m:
        c1 = min(c0 + _PANEL, n)
        if mag + _PANEL * pp > dmax:
            reduce_mod_inplace(W[:, c0:], p)
            mag = float(p)
        P = np.ascontiguousarray(W[:, c0:c1])
        C = np.zeros((m, min(_PANEL, c1 - c0, m)), dtype=W.dtype)
        # jordan growth also rides on the incoming magnitude, hence the check
        pivrows, pivcols = kern.jordan_panel(P, C, p, eligible)
        W[:, c0:c1] = P
        s = len(pivrows)
        if s:
            if c1 < n:
                T = W[:, c1:]
                U = T[pivrows]
                reduce_mod_inplace(U, p)
                Cs = C[:, :s]
                nt = T.shape[1]
                for s0 in range(0, nt, _STRIPE):
                    s1 = min(s0 + _STRIPE, nt)
                    T[:, s0:s1] += Cs @ U[:, s0:s1]
                mag += s * pp
            for r in pivrows:
                eligible[r] = 0
            all_pr.extend(pivrows)
            all_pc.extend(c + c0 for c in pivcols)
        c0 = c1
    reduce_mod_inplace(W, p)
    return all_pr, all_pc


def mod_matmul(A, B, p):
    """Exact (A @ B) mod p for integer-valued arrays, via chunked float gemm."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[1] != B.shape[0]:
        raise MatrixError(f"shape mismatch {A.shape} @ {B.shape}")
    dtype, dmax = _dtype_budget(p)
    pp = float(p) * float(p)
    chunk = max(1, int(dmax / pp) - 1)
    itype = np.int32 if dtype == np.float32 else np.int64
    Af = np.remainder(A, p).astype(dtype)
    Bf = np.remainder(B, p).astype(dtype)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k0 in range(0, A.shape[1], chunk):
        k1 = min(k0 + chunk, A.shape[1])
        part = (Af[:, k0:k1] @ Bf[k0:k1, :]).astype(itype)
        part %= p
        out += part
    out %= p
    return out


# ---------------------------------------------------------------------------
# rational drivers (fraction-free forward + back-substitution)


def _qq_rows(mat):
    dense = [[Fraction(0)] * mat.cols for _ in range(mat.rows)]
    for r, c, v in mat.entries:
        dense[r][c] = v
    return dense


def _clear_denominators(row):
    lcm = 1
    for x in row:
        if x:
            d = x.denominator
            lcm = lcm * d // math.gcd(lcm, d)
    return [int(x * lcm) for x in row]


def qq_forward(rows):
    """Bareiss fraction-free echelon on Fraction rows.

    Returns (rank, pivot_columns, integer echelon rows).  Division-exact at
    every step, so entries stay single minors rather than exploding.
    """
    M = [_clear_denominators(r) for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    k = 0
    denom = 1
    pivcols = []
    for c in range(n):
        if k >= m:
            break
        pr = -1
        for i in range(k, m):
            if M[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != k:
            M[k], M[pr] = M[pr], M[k]
        pv = M[k][c]
        for i in range(k + 1, m):
            f = M[i][c]
            row_i = M[i]
            row_k = M[k]
            for j in range(c + 1, n):
                row_i[j] = (pv * row_i[j] - f * row_k[j]) // denom
            row_i[c] = 0
        denom = pv
        pivcols.append(c)
        k += 1
    return k, pivcols, M


def qq_rref_rows(rows):
    """(rank, pivot_columns, RREF rows as Fractions). Input rows of Fractions."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank, pivcols, M = qq_forward(rows)
    R = []
    for i in range(rank):
        pv = Fraction(M[i][pivcols[i]])
        R.append([Fraction(x) / pv for x in M[i]])
    for i in range(rank - 1, -1, -1):
        pc = pivcols[i]
        for i2 in range(i):
            f = R[i2][pc]
            if f:
                R[i2] = [a - f * b for a, b in zip(R[i2], R[i])]
    R.extend([Fraction(0)] * n for _ in range(m - rank))
    return rank, pivcols, R


# ---------------------------------------------------------------------------
# public operations on SparseMatrix


def _sparse_from_int_array(field, A):
    rr, cc = np.nonzero(A)
    vals = A[rr, cc]
    entries = tuple(
        (int(r), int(c), int(v))
        for r, c, v in zip(rr.tolist(), cc.tolist(), vals.tolist())
    )
    return SparseMatrix(field=field, rows=A.shape[0], cols=A.shape[1], entries=entries)


def _sparse_from_fraction_rows(field, rows, nrows, ncols):
    entries = []
    for r in range(len(rows)):
        for c, v in enumerate(rows[r]):
            if v:
                entries.append((r, c, v))
    return SparseMatrix(field=field, rows=nrows, cols=ncols, entries=tuple(entries))


def rank(m: SparseMatrix) -> int:
    if m.field.is_modular:
        p = m.field.p
        if m.rows * m.cols >= _PREPASS_CELLS:
            pre, alive_r, alive_c = _structural_prepass(m)
            rmap = {}
            for r, a in enumerate(alive_r):
                if a:
                    rmap[r] = len(rmap)
            cmap = {}
            for c, a in enumerate(alive_c):
                if a:
                    cmap[c] = len(cmap)
            dtype, _ = _dtype_budget(p)
            W = np.zeros((len(rmap), len(cmap)), dtype=dtype)
            for r, c, v in m.entries:
                if alive_r[r] and alive_c[c]:
                    W[rmap[r], cmap[c]] = v
            return pre + gf_rank_array(W, p)
        dtype, _ = _dtype_budget(p)
        return gf_rank_array(m.to_float_array(dtype=dtype), p)
    r, _, _ = qq_forward(_qq_rows(m))
    return r


def rref(m: SparseMatrix) -> RrefResult:
    if m.field.is_modular:
        p = m.field.p
        dtype, _ = _dtype_budget(p)
        W = m.to_float_array(dtype=dtype)
        pivrows, pivcols = gf_rref_array(W, p)
        R = np.zeros((m.rows, m.cols), dtype=np.int64)
        if pivrows:
            R[: len(pivrows)] = W[pivrows].astype(np.int64)
        reduced = _sparse_from_int_array(m.field, R)
        return RrefResult(len(pivcols), tuple(pivcols), reduced)
    rk, pivcols, R = qq_rref_rows(_qq_rows(m))
    reduced = _sparse_from_fraction_rows(m.field, R, m.rows, m.cols)
    return RrefResult(rk, tuple(pivcols), reduced)


def kernel_basis(m: SparseMatrix) -> list:
    """Deterministic basis of the null space, one vector per free column."""
    if m.field.is_modular:
        p = m.field.p
        dtype, _ = _dtype_budget(p)
        W = m.to_float_array(dtype=dtype)
        pivrows, pivcols = gf_rref_array(W, p)
        pivset = set(pivcols)
        basis = []
        for f in range(m.cols):
            if f in pivset:
                continue
            v = [0] * m.cols
            v[f] = 1
            for i, pc in enumerate(pivcols):
                x = int(W[pivrows[i], f])
                if x:
                    v[pc] = p - x
            basis.append(tuple(v))
        return basis
    rk, pivcols, R = qq_rref_rows(_qq_rows(m))
    pivset = set(pivcols)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivcols):
            if R[i][f]:
                v[pc] = -R[i][f]
        basis.append(tuple(v))
    return basis


def right_inverse_on_image(m: SparseMatrix) -> SparseMatrix:
    """The pivot-column right inverse theta with m @ theta @ m == m.

    Rows of theta are nonzero only at pivot columns of m; on the image of m
    it inverts m, which is exactly what splitting a surjection onto its image
    requires.
    """
    if m.field.is_modular:
        p = m.field.p
        dtype, _ = _dtype_budget(p)
        W = np.zeros((m.rows, m.cols + m.rows), dtype=dtype)
        W[:, : m.cols] = m.to_float_array(dtype=dtype)
        W[:, m.cols :] = np.eye(m.rows, dtype=dtype)
        pivrows, pivcols = gf_rref_array(W, p)
        theta = np.zeros((m.cols, m.rows), dtype=np.int64)
        for i, pc in enumerate(pivcols):
            if pc < m.cols:
                theta[pc, :] = W[pivrows[i], m.cols :].astype(np.int64)
        return _sparse_from_int_array(m.field, theta)
    rows = _qq_rows(m)
    aug = [row + [Fraction(int(i == j)) for j in range(m.rows)]
           for i, row in enumerate(rows)]
    if not aug:
        aug = []
    rk, pivcols, R = qq_rref_rows(aug) if aug else (0, [], [])
    theta_rows = [[Fraction(0)] * m.rows for _ in range(m.cols)]
    for i, pc in enumerate(pivcols):
        if pc < m.cols:
            theta_rows[pc] = R[i][m.cols :]
    return _sparse_from_fraction_rows(m.field, theta_rows, m.cols, m.rows)


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Exact product of two matrices over the same field."""
    if a.field != b.field:
        raise MatrixError("field mismatch in matmul")
    if a.cols != b.rows:
        raise MatrixError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    if a.field.is_modular:
        A = np.zeros((a.rows, a.cols), dtype=np.int64)
        for r, c, v in a.entries:
            A[r, c] = v
        B = np.zeros((b.rows, b.cols), dtype=np.int64)
        for r, c, v in b.entries:
            B[r, c] = v
        return _sparse_from_int_array(a.field, mod_matmul(A, B, a.field.p))
    rows_b = _qq_rows(b)
    out = [[Fraction(0)] * b.cols for _ in range(a.rows)]
    for r, c, v in a.entries:
        row_b = rows_b[c]
        out_r = out[r]
        for j in range(b.cols):
            if row_b[j]:
                out_r[j] += v * row_b[j]
    return _sparse_from_fraction_rows(a.field, out, a.rows, b.cols)
