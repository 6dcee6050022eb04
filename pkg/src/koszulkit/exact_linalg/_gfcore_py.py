"""Pure-numpy twin of the compiled elimination kernel.

Both backends implement the same two panel primitives with identical
semantics; the drivers in `elimination.py` are backend-agnostic.  All values
are small exact integers stored in float arrays, reduced mod p often enough
that no intermediate ever leaves the exactly-representable range (the drivers
enforce the growth budget).

Kernels receive the panel as a packed contiguous array: column scans on the
full matrix would stride by the row length, which is what kills single-core
throughput on wide slices.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def lu_panel(P, p):
    """Forward elimination with row swaps on a packed panel P (m x b).

    Pivot rows end up contiguous at the top, reduced mod p; multipliers
    (reduced) are stored below each pivot.  Returns (pivot_columns, swaps)
    where swaps is the ordered list of row transpositions performed; the
    caller replays them on the trailing columns it kept outside the panel.
    """
    m, b = P.shape
    k = 0
    pivcols = []
    swaps = []
    for c in range(b):
        if k >= m:
            break
        col = P[k:, c]
        np.remainder(col, p, out=col)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        r = k + int(nz[0])
        if r != k:
            P[[k, r], :] = P[[r, k], :]
            swaps.append((k, r))
        row = P[k, c:]
        np.remainder(row, p, out=row)
        inv = pow(int(P[k, c]), -1, p)
        if k + 1 < m:
            mult = P[k + 1 :, c]
            mult *= inv
            np.remainder(mult, p, out=mult)
            if c + 1 < b:
                P[k + 1 :, c + 1 :] -= np.outer(mult, P[k, c + 1 :])
        pivcols.append(c)
        k += 1
    return pivcols, swaps


def jordan_panel(P, C, p, eligible):
    """Gauss-Jordan without row swaps on a packed panel P (m x b).

    `eligible[r]` marks rows allowed to become pivots (the driver disables
    rows pivoted in earlier panels).  Every other row, eligible or not, gets
    its pivot-column entry cleared.  C (zeroed by the caller, one column per
    pivot) accumulates replay coefficients: for any trailing block T,
    T += C[:, :npiv] @ T[pivot_rows] reproduces the elimination mod p.  On
    return the panel and the used columns of C are reduced mod p.
    Returns (pivot_rows, pivot_columns).
    """
    m, b = P.shape
    pivrows = []
    pivcols = []
    taken = np.zeros(m, dtype=bool)
    for c in range(b):
        col = P[:, c]
        np.remainder(col, p, out=col)
        cand = np.nonzero((col != 0) & (eligible != 0) & ~taken)[0]
        if cand.size == 0:
            continue
        r = int(cand[0])
        kloc = len(pivrows)
        C[r, kloc] = 1
        prow = P[r, c:]
        np.remainder(prow, p, out=prow)
        crow = C[r, : kloc + 1]
        np.remainder(crow, p, out=crow)
        inv = pow(int(P[r, c]), -1, p)
        prow *= inv
        np.remainder(prow, p, out=prow)
        crow *= inv
        np.remainder(crow, p, out=crow)
        f = col.copy()
        f[r] = 0
        nz = np.nonzero(f)[0]
        if nz.size:
            P[nz, c:] -= np.outer(f[nz], prow)
            C[nz, : kloc + 1] -= np.outer(f[nz], crow)
        taken[r] = True
        pivrows.append(r)
        pivcols.append(c)
    if pivrows:
        np.remainder(P, p, out=P)
        np.remainder(C[:, : len(pivrows)], p, out=C[:, : len(pivrows)])
        # replay expects the transform minus the pivot-row selector
        for k, r in enumerate(pivrows):
            C[r, k] = (int(C[r, k]) - 1) % p
    return pivrows, pivcols
