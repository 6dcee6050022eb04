"""The sigma function on weight sequences and the explicit contracting
homotopy that exhibits a diagonal Tor table on a window.

The off-diagonal part V of the bar complex is spanned by summands M(i, alpha)
whose composition alpha has a nonzero leading entry or an interior entry
above 1.  sigma lengthens such an alpha by one while preserving total weight;
the homotopy s sends M(i, alpha) into M(i+1, sigma(alpha)) and satisfies
v = dsv + sdv exactly on every off-diagonal basis vector.  Each step lifts
the cycle m - s d m through the bar differential restricted to the
M(i+1, sigma(alpha)) column block; acyclicity of the model complex
K(i, sigma(alpha)) is what makes the lift exist, and both the model check
and the lift itself are verified during construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bar_homology import bar_slice, contract
from .errors import (
    KoszulkitError,
    MapError,
    NonAcyclicModel,
    TruncationError,
    WeightSequenceError,
)
from .exact_linalg import SparseMatrix, matmul, right_inverse_on_image
from .model_complex import build_model, check_weights, middle_homology
from .pool import pmap


def in_sigma_domain(alpha) -> bool:
    """True iff M(len(alpha)-1, alpha) lies in the off-diagonal part."""
    alpha = check_weights(alpha)
    return alpha[0] != 0 or any(a != 1 for a in alpha[1:])


def sigma(alpha):
    """Prepend 0, or split the first interior entry above 1 as (1, a-1)."""
    alpha = check_weights(alpha)
    if alpha[0] != 0:
        return (0,) + alpha
    for i in range(1, len(alpha)):
        if alpha[i] != 1:
            return alpha[:i] + (1, alpha[i] - 1) + alpha[i + 1 :]
    raise WeightSequenceError(f"{alpha} is diagonal, sigma is undefined")


def partial_differentials(alpha):
    """All single adjacent contractions, in position order."""
    alpha = check_weights(alpha)
    return [contract(alpha, t) for t in range(len(alpha) - 1)]


def lemma41_check(alpha) -> bool:
    """sigma of a partial differential is a partial differential of sigma,
    and alpha itself is one."""
    alpha = check_weights(alpha)
    targets = partial_differentials(sigma(alpha))
    if alpha not in targets:
        return False
    for beta in partial_differentials(alpha):
        if in_sigma_domain(beta) and sigma(beta) not in targets:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Homotopy:
    """Per-summand maps s: M(i, alpha) -> M(i+1, sigma(alpha)), keyed by
    the composition alpha (which fixes i = len - 1 and j = sum)."""

    window: tuple
    maps: dict


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    witness: tuple = None  # (alpha, basis column) of the first failure

    def __bool__(self):
        return self.ok


def _is_diagonal(comp):
    return comp[0] == 0 and all(c == 1 for c in comp[1:])


def _column_block(m, lo, hi):
    trips = [(r, c - lo, v) for r, c, v in m.entries if lo <= c < hi]
    return SparseMatrix.from_entries(m.field, m.rows, hi - lo, trips)


def _inclusion(field, total, offset, width):
    trips = [(offset + t, t, 1) for t in range(width)]
    return SparseMatrix.from_entries(field, total, width, trips)


def _subtract(a, b):
    trips = list(a.entries) + [(r, c, a.field.neg(v)) for r, c, v in b.entries]
    return SparseMatrix.from_entries(a.field, a.rows, a.cols, trips)


def _add(a, b):
    trips = list(a.entries) + list(b.entries)
    return SparseMatrix.from_entries(a.field, a.rows, a.cols, trips)


def _level_map(h_maps, src_slice, tgt_slice, field):
    """Assemble the stored per-summand maps into one slice-level matrix."""
    tgt_off = {comp: tgt_slice.offsets[b] for b, comp in enumerate(tgt_slice.compositions)}
    trips = []
    for b, beta in enumerate(src_slice.compositions):
        blk = h_maps.get(beta)
        if blk is None:
            continue
        ro = tgt_off[sigma(beta)]
        co = src_slice.offsets[b]
        for r, c, v in blk.entries:
            trips.append((ro + r, co + c, v))
    return SparseMatrix.from_entries(field, tgt_slice.dim, src_slice.dim, trips)


def _window_guard(r, map_, i_max, j_max):
    if map_.source is not r:
        raise MapError("map does not start at the given algebra")
    if i_max < 0 or j_max < 0:
        raise KoszulkitError("window bounds must be nonnegative")
    if j_max > map_.j_max:
        raise TruncationError(f"window degree {j_max} beyond truncation {map_.j_max}")


def build_homotopy(r, map_, i_max, j_max) -> Homotopy:
    """Construct s degree by degree: s m = theta(m - s d m).

    theta is the deterministic pivot-column right inverse of the bar
    differential restricted to the M(i+1, sigma(alpha)) column block.  Raises
    NonAcyclicModel(sigma(alpha)) when the required model K(i, sigma(alpha))
    has nonzero middle homology, or when the cycle fails to lift through the
    restricted differential (the block-collapsed acyclicity the lift really
    consumes).
    """
    _window_guard(r, map_, i_max, j_max)
    field = r.field

    slices = {}

    def sl(i, j):
        if (i, j) not in slices:
            slices[(i, j)] = bar_slice(r, map_, i, j)
        return slices[(i, j)]

    maps = {}
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            cur = sl(i, j)
            work = [
                (b, alpha)
                for b, alpha in enumerate(cur.compositions)
                if cur.block_dims[b] > 0 and not _is_diagonal(alpha)
            ]
            if not work:
                continue
            nxt = sl(i + 1, j)
            nxt_info = {
                comp: (nxt.offsets[b], nxt.block_dims[b])
                for b, comp in enumerate(nxt.compositions)
            }
            prev = _level_map(maps, sl(i - 1, j), cur, field) if i > 0 else None

            def job(item):
                b, alpha = item
                sa = sigma(alpha)
                if middle_homology(build_model(r, map_, sa)) != 0:
                    return alpha, sa, None
                z = _inclusion(field, cur.dim, cur.offsets[b], cur.block_dims[b])
                if prev is not None:
                    d_blk = _column_block(
                        cur.d_out, cur.offsets[b], cur.offsets[b] + cur.block_dims[b]
                    )
                    z = _subtract(z, matmul(prev, d_blk))
                lo, width = nxt_info[sa]
                big_d = _column_block(nxt.d_out, lo, lo + width)
                s_blk = matmul(right_inverse_on_image(big_d), z)
                if matmul(big_d, s_blk) != z:
                    return alpha, sa, None  # cycle failed to lift
                return alpha, sa, s_blk

            for alpha, sa, s_blk in pmap(job, work):
                if s_blk is None:
                    raise NonAcyclicModel(sa)
                maps[alpha] = s_blk
    return Homotopy(window=(i_max, j_max), maps=maps)


def verify_homotopy(h: Homotopy, r, map_) -> VerifyResult:
    """Recheck v = dsv + sdv on every off-diagonal basis vector.

    Independent of the construction: only the stored blocks are used, and
    the identity is tested as an exact matrix equation per summand.  The
    result is truthy on success; on failure it carries the first failing
    (alpha, basis column) in deterministic order.
    """
    i_max, j_max = h.window
    _window_guard(r, map_, i_max, j_max)
    field = r.field

    slices = {}

    def sl(i, j):
        if (i, j) not in slices:
            slices[(i, j)] = bar_slice(r, map_, i, j)
        return slices[(i, j)]

    for i in range(i_max + 1):
        for j in range(j_max + 1):
            cur = sl(i, j)
            work = [
                (b, alpha)
                for b, alpha in enumerate(cur.compositions)
                if cur.block_dims[b] > 0 and not _is_diagonal(alpha)
            ]
            if not work:
                continue
            nxt = sl(i + 1, j)
            nxt_info = {
                comp: (nxt.offsets[b], nxt.block_dims[b])
                for b, comp in enumerate(nxt.compositions)
            }
            prev = _level_map(h.maps, sl(i - 1, j), cur, field) if i > 0 else None

            def job(item):
                b, alpha = item
                s_blk = h.maps.get(alpha)
                if s_blk is None:
                    return alpha, 0
                incl = _inclusion(field, cur.dim, cur.offsets[b], cur.block_dims[b])
                lo, width = nxt_info[sigma(alpha)]
                big_d = _column_block(nxt.d_out, lo, lo + width)
                lhs = matmul(big_d, s_blk)
                if prev is not None:
                    d_blk = _column_block(
                        cur.d_out, cur.offsets[b], cur.offsets[b] + cur.block_dims[b]
                    )
                    lhs = _add(lhs, matmul(prev, d_blk))
                if lhs != incl:
                    return alpha, _first_bad_column(lhs, incl)
                return alpha, None

            for alpha, bad in pmap(job, work):
                if bad is not None:
                    return VerifyResult(False, (alpha, bad))
    return VerifyResult(True, None)


def _first_bad_column(a, b):
    cells = {}
    for r, c, v in a.entries:
        cells[(r, c)] = v
    for r, c, v in b.entries:
        if cells.get((r, c)) == v:
            cells.pop((r, c))
        else:
            cells[(r, c)] = v
    return min(c for _, c in cells)
