# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled elimination kernel: exact mod-p panel elimination in float arrays.

Same contract as `_gfcore_py` (see its docstring).  The drivers keep every
intermediate inside the exactly-representable integer range of the dtype, so
plain float arithmetic here is exact.
"""

import numpy as np

BACKEND_NAME = "compiled"

ctypedef fused floating_t:
    float
    double


cdef inline long _modinv(long a, long p) noexcept:
    # extended euclid; a in (0, p), p prime
    cdef long t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef inline void _reduce_seg(floating_t[:, ::1] W, Py_ssize_t r,
                             Py_ssize_t c0, Py_ssize_t c1, long p) noexcept:
    cdef Py_ssize_t j
    cdef long v
    for j in range(c0, c1):
        v = <long> W[r, j] % p
        if v < 0:
            v += p
        W[r, j] = <floating_t> v


def lu_panel(floating_t[:, ::1] P, long p):
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t b = P.shape[1]
    cdef Py_ssize_t k = 0, c, i, j, r
    cdef long v, f, inv
    cdef floating_t tmp, fv
    pivcols = []
    swaps = []
    for c in range(b):
        if k >= m:
            break
        r = -1
        for i in range(k, m):
            v = <long> P[i, c] % p
            if v < 0:
                v += p
            P[i, c] = <floating_t> v
            if v != 0 and r < 0:
                r = i
        if r < 0:
            continue
        if r != k:
            for j in range(b):
                tmp = P[k, j]
                P[k, j] = P[r, j]
                P[r, j] = tmp
            swaps.append((k, r))
        _reduce_seg(P, k, c, b, p)
        inv = _modinv(<long> P[k, c], p)
        for i in range(k + 1, m):
            f = (<long> P[i, c]) * inv % p
            P[i, c] = <floating_t> f
            if f != 0:
                fv = <floating_t> f
                for j in range(c + 1, b):
                    P[i, j] = P[i, j] - fv * P[k, j]
        pivcols.append(c)
        k += 1
    return pivcols, swaps


def jordan_panel(floating_t[:, ::1] P, floating_t[:, ::1] C, long p,
                 unsigned char[::1] eligible):
    cdef Py_ssize_t m = P.shape[0]
    cdef Py_ssize_t b = P.shape[1]
    cdef Py_ssize_t i, j, c, r, kloc, npiv
    cdef long v, f, inv
    cdef floating_t fv
    pivrows = []
    pivcols = []
    taken = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] tk = taken
    for c in range(b):
        r = -1
        for i in range(m):
            v = <long> P[i, c] % p
            if v < 0:
                v += p
            P[i, c] = <floating_t> v
            if v != 0 and r < 0 and eligible[i] and not tk[i]:
                r = i
        if r < 0:
            continue
        kloc = len(pivrows)
        C[r, kloc] = 1
        _reduce_seg(P, r, c, b, p)
        _reduce_seg(C, r, 0, kloc + 1, p)
        inv = _modinv(<long> P[r, c], p)
        for j in range(c, b):
            P[r, j] = <floating_t> ((<long> P[r, j]) * inv % p)
        for j in range(kloc + 1):
            C[r, j] = <floating_t> ((<long> C[r, j]) * inv % p)
        for i in range(m):
            if i == r:
                continue
            f = <long> P[i, c]
            if f == 0:
                continue
            fv = <floating_t> f
            for j in range(c, b):
                P[i, j] = P[i, j] - fv * P[r, j]
            for j in range(kloc + 1):
                C[i, j] = C[i, j] - fv * C[r, j]
        tk[r] = 1
        pivrows.append(r)
        pivcols.append(c)
    npiv = len(pivrows)
    if npiv > 0:
        for i in range(m):
            _reduce_seg(P, i, 0, b, p)
            _reduce_seg(C, i, 0, npiv, p)
        # replay expects the transform minus the pivot-row selector
        for j in range(npiv):
            r = pivrows[j]
            v = (<long> C[r, j] - 1) % p
            if v < 0:
                v += p
            C[r, j] = <floating_t> v
    return pivrows, pivcols
