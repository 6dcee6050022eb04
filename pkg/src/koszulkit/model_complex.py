"""Three-term model complexes attached to weight sequences.

For a weight sequence alpha = (a0, a1, ..., a_{n+1}) the complex K(n, alpha)
is concentrated in homological degrees n-1, n, n+1.  The top space is the
full tensor product S_{a0} (x) R_{a1} (x) ... (x) R_{a_{n+1}}; the middle
space is the sum of all single adjacent contractions; the bottom space is
the sum of all double contractions, where an overlapping pair merges three
consecutive factors.  Both differentials are alternating sums of adjacent
multiplications written in the local coordinates of each summand, the slot-0
term pushing the first factor into S through the structure map.  d o d = 0
is machine checked on every build.

Everything here is a finite rank computation; middle homology zero for all
sequences in a window is the acyclicity hypothesis that makes the homotopy
construction (and hence 1-linearity of the map) go through.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bar_homology import (
    _block_triples,
    _chunk_triples,
    _partial_matrix,
    compose_is_zero,
    contract,
)
from .errors import KoszulkitError, MapError, TruncationError, WeightSequenceError
from .exact_linalg import SparseMatrix, kernel_basis, matmul
from .exact_linalg import rank as sparse_rank
from .pool import pmap
from .verdict import Verdict


def check_weights(alpha):
    """Validate a weight sequence: a0 >= 0, interior entries >= 1."""
    entries = tuple(alpha)
    if not entries:
        raise WeightSequenceError("weight sequence is empty")
    for a in entries:
        if not isinstance(a, int) or isinstance(a, bool):
            raise WeightSequenceError(f"weight {a!r} is not an integer")
    if entries[0] < 0:
        raise WeightSequenceError(f"leading weight {entries[0]} is negative")
    for a in entries[1:]:
        if a < 1:
            raise WeightSequenceError(f"interior weight {a} is below 1")
    return entries


def _guard(r, map_, alpha, min_len):
    alpha = check_weights(alpha)
    if map_.source is not r:
        raise MapError("map does not start at the given algebra")
    if len(alpha) < min_len:
        raise WeightSequenceError(
            f"need at least {min_len} weights, got {len(alpha)}"
        )
    if sum(alpha) > map_.j_max:
        raise TruncationError(
            f"total weight {sum(alpha)} beyond truncation {map_.j_max}"
        )
    return alpha


def _factor_dims(map_, weights):
    sdims = map_.target.piece_dims
    rdims = map_.source.piece_dims
    return [sdims[weights[0]]] + [rdims[c] for c in weights[1:]]


def _space_dim(map_, weights):
    d = 1
    for f in _factor_dims(map_, weights):
        d *= f
    return d


def _double_contract(alpha, k, l):
    # l == k + 1 is the overlapping case: three consecutive factors merge
    if l == k + 1:
        return alpha[:k] + (alpha[k] + alpha[k + 1] + alpha[k + 2],) + alpha[k + 3 :]
    return contract(contract(alpha, l), k)


@dataclass(frozen=True, eq=False)
class ModelComplex:
    """K(n, alpha) with summand layouts and its two differentials."""

    n: int
    alpha: tuple
    top_dim: int
    middle: tuple  # (position i, weights, dim, offset) per single contraction
    bottom: tuple  # (pair (k, l), weights, dim, offset) per double contraction
    middle_dim: int
    bottom_dim: int
    d_top: SparseMatrix  # K_{n+1} -> K_n
    d_middle: SparseMatrix  # K_n -> K_{n-1}


def build_model(r, map_, alpha) -> ModelComplex:
    """Assemble K(n, alpha) for alpha of length n + 2."""
    alpha = _guard(r, map_, alpha, 2)
    field = r.field
    n = len(alpha) - 2

    top_dims = _factor_dims(map_, alpha)
    top_dim = 1
    for f in top_dims:
        top_dim *= f

    middle = []
    off = 0
    for i in range(n + 1):
        w = contract(alpha, i)
        d = _space_dim(map_, w)
        middle.append((i, w, d, off))
        off += d
    middle_dim = off

    bottom = []
    off = 0
    for k in range(n + 1):
        for l in range(k + 1, n + 1):
            w = _double_contract(alpha, k, l)
            d = _space_dim(map_, w)
            bottom.append(((k, l), w, d, off))
            off += d
    bottom_dim = off
    bindex = {lab: (d, o) for lab, _, d, o in bottom}

    chunks = []
    if top_dim:
        for i, _, d, o in middle:
            if d == 0:
                continue
            M = _partial_matrix(map_, alpha, i)
            if M is None:
                continue
            chunks.extend(
                _block_triples(field, top_dims, i, M, 0, o, i % 2 == 1)
            )
    d_top = SparseMatrix.from_entries(field, middle_dim, top_dim, _chunk_triples(chunks))

    chunks = []
    for i, w, d, o in middle:
        if d == 0:
            continue
        fdims = _factor_dims(map_, w)
        for j in range(n):
            if j <= i - 2:
                lab = (j, i)
            elif j == i - 1:
                lab = (i - 1, i)  # overlapping: triple merge at i-1, i, i+1
            elif j == i:
                lab = (i, i + 1)  # overlapping: triple merge at i, i+1, i+2
            else:
                lab = (i, j + 1)
            td, to = bindex[lab]
            assert _double_contract(alpha, *lab) == contract(w, j)
            if td == 0:
                continue
            M = _partial_matrix(map_, w, j)
            if M is None:
                continue
            chunks.extend(
                _block_triples(field, fdims, j, M, o, to, j % 2 == 1)
            )
    d_middle = SparseMatrix.from_entries(
        field, bottom_dim, middle_dim, _chunk_triples(chunks)
    )

    if not compose_is_zero(d_middle, d_top):
        raise KoszulkitError(f"model differential composition nonzero for {alpha}")
    return ModelComplex(
        n=n,
        alpha=alpha,
        top_dim=top_dim,
        middle=tuple(middle),
        bottom=tuple(bottom),
        middle_dim=middle_dim,
        bottom_dim=bottom_dim,
        d_top=d_top,
        d_middle=d_middle,
    )


def middle_homology(kc: ModelComplex) -> int:
    """dim H_n(K(n, alpha)) = dim ker d_n - rank d_{n+1}."""
    return kc.middle_dim - sparse_rank(kc.d_middle) - sparse_rank(kc.d_top)


def _partial_sparse(map_, weights, t):
    """Full matrix of the adjacent multiplication at slot t as a SparseMatrix."""
    field = map_.source.field
    fdims = _factor_dims(map_, weights)
    src = 1
    for f in fdims:
        src *= f
    tgt = _space_dim(map_, contract(weights, t))
    chunks = []
    if src and tgt:
        M = _partial_matrix(map_, weights, t)
        if M is not None:
            chunks = _block_triples(field, fdims, t, M, 0, 0, False)
    return SparseMatrix.from_entries(field, tgt, src, _chunk_triples(chunks))


def _stack_rows(field, mats, cols):
    trips = []
    off = 0
    for m in mats:
        for rr, cc, vv in m.entries:
            trips.append((off + rr, cc, vv))
        off += m.rows
    return SparseMatrix.from_entries(field, off, cols, trips)


def _columns(field, vectors, dim):
    trips = []
    for c, v in enumerate(vectors):
        for rr, x in enumerate(v):
            if x:
                trips.append((rr, c, x))
    return SparseMatrix.from_entries(field, dim, len(vectors), trips)


def delta_cokernel(r, map_, alpha) -> int:
    """Cokernel dimension of the last partial differential between the
    intersections of the kernels of all earlier ones.

    The domain is cap ker of slots 0..n-1 inside the top space, the target
    the matching intersection inside the last single contraction; the last
    adjacent multiplication restricts between them because it commutes with
    the slots it does not touch.
    """
    alpha = _guard(r, map_, alpha, 3)
    field = r.field
    n = len(alpha) - 2

    dim_a = _space_dim(map_, alpha)
    dom = kernel_basis(
        _stack_rows(field, [_partial_sparse(map_, alpha, i) for i in range(n)], dim_a)
    )

    beta = contract(alpha, n)
    dim_b = _space_dim(map_, beta)
    tgt = kernel_basis(
        _stack_rows(field, [_partial_sparse(map_, beta, i) for i in range(n)], dim_b)
    )

    image = matmul(_partial_sparse(map_, alpha, n), _columns(field, dom, dim_a))
    return len(tgt) - sparse_rank(image)


def lemma31_bounds_check(r, map_, alpha) -> bool:
    """Sandwich cok delta <= H_n <= cok delta + H_{n-1} * dim R_{a_last},
    with equality of the outer terms at n = 0."""
    alpha = _guard(r, map_, alpha, 2)
    n = len(alpha) - 2
    h_n = middle_homology(build_model(r, map_, alpha))
    if n == 0:
        # base case: both sides are the cokernel of one multiplication map
        cok = map_.target.piece_dims[sum(alpha)] - sparse_rank(
            _partial_sparse(map_, alpha, 0)
        )
        return h_n == cok
    cok = delta_cokernel(r, map_, alpha)
    h_prev = middle_homology(build_model(r, map_, alpha[:-1]))
    gamma = r.piece_dims[alpha[-1]]
    return cok <= h_n <= cok + h_prev * gamma


def _weight_sequences(length, total_max):
    """All weight sequences of the given length with total weight <= total_max,
    in lexicographic order."""
    out = []

    def rec(prefix, budget):
        pos = len(prefix)
        if pos == length:
            out.append(tuple(prefix))
            return
        lo = 0 if pos == 0 else 1
        reserve = length - pos - 1  # later slots need >= 1 each
        for v in range(lo, budget - reserve + 1):
            rec(prefix + [v], budget - v)

    rec([], total_max)
    return out


def model_window_check(r, map_, i_max, j_max) -> Verdict:
    """Middle homology vanishing for every weight sequence in the window.

    Sequences run over lengths m + 2 <= i_max + 2 with total weight <= j_max;
    the witness is the first failure in length-then-lex order.
    """
    if map_.source is not r:
        raise MapError("map does not start at the given algebra")
    if i_max < 0 or j_max < 0:
        raise KoszulkitError("window bounds must be nonnegative")
    if j_max > map_.j_max:
        raise TruncationError(f"window degree {j_max} beyond truncation {map_.j_max}")

    seqs = []
    for m in range(i_max + 1):
        seqs.extend(_weight_sequences(m + 2, j_max))

    def job(alpha):
        return middle_homology(build_model(r, map_, alpha))

    witness = None
    for alpha, h in zip(seqs, pmap(job, seqs)):
        if h != 0:
            witness = alpha
            break
    return Verdict(
        kind="model-window",
        passed=witness is None,
        window=(i_max, j_max),
        field=r.field.describe(),
        witness=witness,
    )
