"""Dense exact arrays over a FieldSpec, bridging to the elimination drivers.

GF(p) data rides in int64 arrays with entries in [0, p); rational data in
object arrays of Fractions.  Everything here is desk-scale glue: the heavy
lifting stays inside exact_linalg.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exact_linalg.elimination import (
    _dtype_budget,
    gf_rref_array,
    mod_matmul,
    qq_rref_rows,
)


def zeros(field, shape):
    if field.is_modular:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out[...] = Fraction(0)
    return out


def eye(field, n):
    out = zeros(field, (n, n))
    one = 1 if field.is_modular else Fraction(1)
    for i in range(n):
        out[i, i] = one
    return out


def asarray(field, rows):
    """Normalize a nested list into the field's dense carrier."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    out = zeros(field, (nr, nc))
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = field.normalize(x)
    return out


def matmul(field, A, B):
    if field.is_modular:
        return mod_matmul(A, B, field.p)
    return np.dot(A, B)


def rref(field, A):
    """(rank, pivot_columns, reduced) with reduced the same dense shape."""
    m, n = A.shape
    if field.is_modular:
        p = field.p
        dtype, _ = _dtype_budget(p)
        W = np.remainder(A, p).astype(dtype)
        pivrows, pivcols = gf_rref_array(W, p)
        R = np.zeros((m, n), dtype=np.int64)
        if pivrows:
            R[: len(pivrows)] = W[pivrows].astype(np.int64)
        return len(pivcols), list(pivcols), R
    rows = [[Fraction(A[i, j]) for j in range(n)] for i in range(m)]
    rk, pivcols, RR = qq_rref_rows(rows)
    R = zeros(field, (m, n))
    for i in range(m):
        for j in range(n):
            R[i, j] = RR[i][j]
    return rk, list(pivcols), R


def rank(field, A):
    return rref(field, A)[0]


def kernel(field, A):
    """Columns form the deterministic kernel basis (one per free column)."""
    m, n = A.shape
    rk, pivcols, R = rref(field, A)
    free = [c for c in range(n) if c not in set(pivcols)]
    K = zeros(field, (n, len(free)))
    one = 1 if field.is_modular else Fraction(1)
    for idx, f in enumerate(free):
        K[f, idx] = one
        for i, pc in enumerate(pivcols):
            v = R[i, f]
            if v:
                K[pc, idx] = (field.p - v) if field.is_modular else -v
    return K


def right_inverse(field, A):
    """theta with A @ theta @ A == A (pivot-column splitting)."""
    m, n = A.shape
    aug = zeros(field, (m, n + m))
    aug[:, :n] = A
    aug[:, n:] = eye(field, m)
    rk, pivcols, R = rref(field, aug)
    theta = zeros(field, (n, m))
    for i, pc in enumerate(pivcols):
        if pc < n:
            theta[pc, :] = R[i, n:]
    return theta


def equal(A, B):
    return A.shape == B.shape and bool(np.all(A == B))
