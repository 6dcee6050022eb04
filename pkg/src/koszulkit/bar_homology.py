"""Bidegree slices of the normalized bar complex and the Tor-based checkers.

The chain space in homological degree i is S tensor (R+)^i; its internal
degree j part splits over compositions (c0; c1..ci) with c0 >= 0 and interior
parts >= 1 summing to j.  The differential is the alternating sum of adjacent
multiplications, the t = 0 term pushing the first tensor factor into S
through the structure map.  Homology dimensions come from two ranks per
slice, so the whole Tor table is a family of independent exact rank jobs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _dense
from .errors import KoszulkitError, MapError, MatrixError, TruncationError
from .exact_linalg import SparseMatrix
from .exact_linalg import rank as sparse_rank
from .graded_algebra import augmentation_map
from .pool import pmap
from .verdict import Verdict


def _interior_compositions(total, parts):
    # compositions of `total` into `parts` entries all >= 1, lex order
    if parts == 0:
        return [()] if total == 0 else []
    if total < parts:
        return []
    out = []
    for cuts in combinations(range(1, total), parts - 1):
        prev = 0
        comp = []
        for c in cuts + (total,):
            comp.append(c - prev)
            prev = c
        out.append(tuple(comp))
    return out


def slice_compositions(i, j):
    """All (c0; c1..ci) with c0 >= 0, interior parts >= 1, sum j."""
    if i == 0:
        return [(j,)] if j >= 0 else []
    out = []
    for c0 in range(j - i + 1):
        for interior in _interior_compositions(j - c0, i):
            out.append((c0,) + interior)
    return out


def _layout(map_, i, j):
    """(compositions, block dims, offsets, total dim) of slice (i, j)."""
    sdims = map_.target.piece_dims
    rdims = map_.source.piece_dims
    comps = slice_compositions(i, j)
    dims = []
    for comp in comps:
        d = sdims[comp[0]]
        for c in comp[1:]:
            d *= rdims[c]
        dims.append(d)
    offsets = []
    total = 0
    for d in dims:
        offsets.append(total)
        total += d
    return comps, dims, offsets, total


@dataclass(frozen=True, eq=False)
class BarSlice:
    i: int
    j: int
    compositions: tuple
    block_dims: tuple
    offsets: tuple
    dim: int
    d_out: SparseMatrix  # matrix of d_i into slice (i-1, j)


def _check_window(map_, j):
    if j > map_.j_max:
        raise TruncationError(
            f"internal degree {j} beyond truncation {map_.j_max}"
        )


def _partial_matrix(map_, comp, t):
    """Dense matrix of the adjacent multiplication at slot t of `comp`."""
    r = map_.source
    s = map_.target
    field = r.field
    if t == 0:
        c0, c1 = comp[0], comp[1]
        phi = map_.degree(c1)
        s0 = s.piece_dims[c0]
        if s0 == 0 or s.piece_dims[c0 + c1] == 0:
            return None
        return _dense.matmul(
            field, s.mult(c0, c1), np.kron(_dense.eye(field, s0), phi)
        )
    ct, cn = comp[t], comp[t + 1]
    if r.piece_dims[ct + cn] == 0:
        return None
    return r.mult(ct, cn)


def contract(weights, t):
    """Merge adjacent entries t, t+1 of a weight/composition tuple."""
    return weights[:t] + (weights[t] + weights[t + 1],) + weights[t + 2 :]


def _block_triples(field, fdims, t, M, src_off, tgt_off, negate):
    """Triple chunks of (+/-)(I tensor M tensor I) applied at slot pair (t, t+1).

    Row-major tensor indexing: source index (a, u, v, b) with a over the
    factors before t and b after t+1; M carries (u, v) -> w.  Returns a list
    of (target index array, source index array, value) chunks.
    """
    pre = 1
    for d in fdims[:t]:
        pre *= d
    post = 1
    for d in fdims[t + 2 :]:
        post *= d
    du, dv = fdims[t], fdims[t + 1]
    dw = M.shape[0]
    nzw, nzuv = np.nonzero(M)
    if len(nzw) == 0:
        return []
    a = np.arange(pre, dtype=np.int64)[:, None]
    b = np.arange(post, dtype=np.int64)[None, :]
    src_pre = src_off + a * (du * dv * post) + b
    tgt_pre = tgt_off + a * (dw * post) + b
    chunks = []
    for w, uv in zip(nzw.tolist(), nzuv.tolist()):
        v = M[w, uv]
        val = field.neg(v) if negate else v
        chunks.append(
            ((tgt_pre + w * post).ravel(), (src_pre + uv * post).ravel(), val)
        )
    return chunks


def _chunk_triples(chunks):
    for tgt, src, val in chunks:
        for rr, cc in zip(tgt.tolist(), src.tolist()):
            yield rr, cc, val


def bar_slice(r, map_, i, j):
    """Slice (i, j) of S tensor (R+)^i with its outgoing differential."""
    if map_.source is not r:
        raise MapError("map does not start at the given algebra")
    _check_window(map_, j)
    field = r.field
    comps, dims, offsets, total = _layout(map_, i, j)
    if i == 0 or total == 0:
        d = SparseMatrix(field, 0 if i == 0 else _layout(map_, i - 1, j)[3], total)
        return BarSlice(i, j, tuple(comps), tuple(dims), tuple(offsets), total, d)

    tcomps, tdims, toffsets, ttotal = _layout(map_, i - 1, j)
    tindex = {comp: b for b, comp in enumerate(tcomps)}
    sdims = map_.target.piece_dims
    rdims = r.piece_dims

    chunks = []
    for b, comp in enumerate(comps):
        if dims[b] == 0:
            continue
        fdims = [sdims[comp[0]]] + [rdims[c] for c in comp[1:]]
        for t in range(i):
            tb = tindex[contract(comp, t)]
            if tdims[tb] == 0:
                continue
            M = _partial_matrix(map_, comp, t)
            if M is None:
                continue
            chunks.extend(
                _block_triples(
                    field, fdims, t, M, offsets[b], toffsets[tb], t % 2 == 1
                )
            )

    d = SparseMatrix.from_entries(field, ttotal, total, _chunk_triples(chunks))
    return BarSlice(i, j, tuple(comps), tuple(dims), tuple(offsets), total, d)


def compose_is_zero(a: SparseMatrix, b: SparseMatrix) -> bool:
    """Exact sparse check that a @ b = 0 (column-by-column accumulation)."""
    if a.cols != b.rows:
        raise MatrixError(f"composition shape mismatch {a.cols} vs {b.rows}")
    field = a.field
    cols_of_a = {}
    for r, c, v in a.entries:
        cols_of_a.setdefault(c, []).append((r, v))
    by_col = {}
    for r, c, v in b.entries:
        by_col.setdefault(c, []).append((r, v))
    for items in by_col.values():
        acc = {}
        for k, v in items:
            for r, w in cols_of_a.get(k, ()):
                x = field.add(acc.get(r, field.zero()), field.mul(w, v))
                if x == 0:
                    acc.pop(r, None)
                else:
                    acc[r] = x
        if acc:
            return False
    return True


@dataclass(frozen=True, eq=False)
class BettiTable:
    window: tuple  # (i_max, j_max)
    field: object  # FieldSpec
    entries: dict  # (i, j) -> dim Tor_{ij}, zeros omitted

    def entry(self, i, j):
        return self.entries.get((i, j), 0)

    def is_diagonal(self):
        """(True, None) or (False, first off-diagonal bidegree in lex order)."""
        i_max, j_max = self.window
        for i in range(i_max + 1):
            for j in range(j_max + 1):
                if i != j and self.entry(i, j) != 0:
                    return False, (i, j)
        return True, None

    def to_tsv(self) -> str:
        i_max, j_max = self.window
        lines = []
        for i in range(i_max + 1):
            lines.append(
                "\t".join(str(self.entry(i, j)) for j in range(j_max + 1))
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        import json

        i_max, j_max = self.window
        cells = [
            {"i": i, "j": j, "dim": self.entries[(i, j)]}
            for (i, j) in sorted(self.entries)
            if self.entries[(i, j)] != 0
        ]
        payload = {
            "window": {"i_max": i_max, "j_max": j_max},
            "field": self.field.describe(),
            "entries": cells,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def betti_table(r, map_, i_max, j_max) -> BettiTable:
    """dim Tor_{ij}(S, k) for 0 <= i <= i_max, 0 <= j <= j_max.

    entry(i, j) = dim ker d_{i,j} - rank d_{i+1,j}; the two ranks per column j
    are shared between adjacent entries, and each d o d = 0 is verified
    sparsely on the way.
    """
    if i_max < 0 or j_max < 0:
        raise TruncationError("window must be nonnegative")
    _check_window(map_, j_max)

    # slices with i <= j only; everything else is empty by the degree bound
    keys = []
    for j in range(j_max + 1):
        for i in range(1, min(i_max + 1, j) + 1):
            keys.append((i, j))
    slices = {key: bar_slice(r, map_, key[0], key[1]) for key in keys}

    for (i, j), sl in slices.items():
        nxt = slices.get((i + 1, j))
        if nxt is not None and not compose_is_zero(sl.d_out, nxt.d_out):
            raise KoszulkitError(f"differential composition nonzero at {(i, j)}")

    live = [key for key in keys if slices[key].dim > 0]
    ranks = dict(zip(live, pmap(lambda key: sparse_rank(slices[key].d_out), live)))

    entries = {}
    sdims = map_.target.piece_dims
    for j in range(j_max + 1):
        for i in range(min(i_max, j) + 1):
            dim_ij = slices[(i, j)].dim if i >= 1 else sdims[j]
            val = (
                dim_ij
                - ranks.get((i, j), 0)
                - ranks.get((i + 1, j), 0)
            )
            if val:
                entries[(i, j)] = val
    return BettiTable(window=(i_max, j_max), field=r.field, entries=entries)


def is_koszul_window(r, i_max, j_max) -> Verdict:
    """Diagonal-on-window test for Tor(k, k); never a global claim."""
    _, aug = augmentation_map(r)
    table = betti_table(r, aug, i_max, j_max)
    ok, witness = table.is_diagonal()
    return Verdict(
        kind="koszul-window",
        passed=ok,
        window=(i_max, j_max),
        field=r.field.describe(),
        witness=witness,
    )


def is_one_linear_window(map_, i_max, j_max) -> Verdict:
    """Tor(S, k) diagonal-on-window for a flagged surjection R -> S."""
    if not map_.surjective:
        raise MapError("1-linearity is defined for flagged surjections only")
    table = betti_table(map_.source, map_, i_max, j_max)
    ok, witness = table.is_diagonal()
    return Verdict(
        kind="one-linear-window",
        passed=ok,
        window=(i_max, j_max),
        field=map_.source.field.describe(),
        witness=witness,
    )


def _stacked_rank_condition(field, a_slice, bs_rank, k_slice, k_next, bk_rank, pi_pairs):
    """rank [[d_S, 0], [pi, -d_k]] compared against the injectivity target.

    The induced map on homology at this bidegree is injective iff
    rank Phi = dim(S-slice) + rank d_k(i+1) - rank d_S(i+1).
    """
    rows_a = a_slice.d_out.rows
    trips = list(a_slice.d_out.entries)
    for off_s, off_k, width in pi_pairs:
        for x in range(width):
            trips.append((rows_a + off_k + x, off_s + x, 1))
    col_off = a_slice.dim
    for r, c, v in k_next.d_out.entries:
        trips.append((rows_a + r, col_off + c, field.neg(v)))
    phi = SparseMatrix.from_entries(
        field,
        rows_a + k_slice.dim,
        a_slice.dim + k_next.dim,
        trips,
    )
    return sparse_rank(phi) == a_slice.dim + bk_rank - bs_rank


def is_large_window(map_, i_max, j_max) -> Verdict:
    """Injectivity of Tor(S,k) -> Tor(k,k) on every bidegree in the window.

    The comparison map is the coordinate projection onto the c0 = 0 blocks
    (the degreewise projection S -> k tensored into the first factor), so the
    whole check reduces to one stacked rank per bidegree.
    """
    if not map_.surjective:
        raise MapError("largeness is defined for flagged surjections only")
    r = map_.source
    _check_window(map_, j_max)
    field = r.field
    _, aug = augmentation_map(r)

    s_sl = {}
    k_sl = {}

    def sslice(i, j):
        if (i, j) not in s_sl:
            s_sl[(i, j)] = bar_slice(r, map_, i, j)
        return s_sl[(i, j)]

    def kslice(i, j):
        if (i, j) not in k_sl:
            k_sl[(i, j)] = bar_slice(r, aug, i, j)
        return k_sl[(i, j)]

    s_rank = {}
    k_rank = {}

    def srank(i, j):
        if (i, j) not in s_rank:
            s_rank[(i, j)] = sparse_rank(sslice(i, j).d_out)
        return s_rank[(i, j)]

    def krank(i, j):
        if (i, j) not in k_rank:
            k_rank[(i, j)] = sparse_rank(kslice(i, j).d_out)
        return k_rank[(i, j)]

    for i in range(i_max + 1):
        for j in range(j_max + 1):
            if j < i:
                continue
            a = sslice(i, j)
            if a.dim == 0:
                continue
            ks = kslice(i, j)
            kn = kslice(i + 1, j)
            # pi is the identity on blocks whose composition has c0 = 0
            k_off = {comp: off for comp, off in zip(ks.compositions, ks.offsets)}
            pi_pairs = []
            for comp, off, width in zip(a.compositions, a.offsets, a.block_dims):
                if comp[0] == 0 and width:
                    pi_pairs.append((off, k_off[comp], width))
            ok = _stacked_rank_condition(
                field, a, srank(i + 1, j), ks, kn, krank(i + 1, j), pi_pairs
            )
            if not ok:
                return Verdict(
                    kind="large-window",
                    passed=False,
                    window=(i_max, j_max),
                    field=field.describe(),
                    witness=(i, j),
                )
    return Verdict(
        kind="large-window",
        passed=True,
        window=(i_max, j_max),
        field=field.describe(),
    )
