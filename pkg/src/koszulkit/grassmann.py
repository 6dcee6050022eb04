"""Pluecker coordinate rings of Gr(2, n) and their Schubert quotients.

Generators are indexed by 2-subsets {i < j} of {1..n}; each 4-subset
{i < j < k < l} contributes the three-term quadric

    p_ij p_kl - p_ik p_jl + p_il p_jk.

Schubert conditions are single sorted pairs w, with I admissible iff
I <= w componentwise; the quotient kills the inadmissible generators.
General Gr(k, n) straightening is deliberately out of scope.
"""

from itertools import combinations

from .errors import InputError, PresentationError
from .graded_algebra import Presentation, from_presentation, quotient_by_degree_one


def pluecker_pairs(n):
    return list(combinations(range(1, n + 1), 2))


def _gen_name(i, j):
    return f"p{i}{j}" if j <= 9 else f"p{i}_{j}"


def pluecker_ring(n, field, j_max):
    """Truncated Gr(2, n) coordinate ring with its presentation.

    For n < 4 there are no 4-subsets and the result is a free polynomial
    ring on the C(n, 2) coordinates.
    """
    if n < 2:
        raise InputError(f"Gr(2, {n}) has no Pluecker coordinates")
    pairs = pluecker_pairs(n)
    idx = {p: i for i, p in enumerate(pairs)}
    m = len(pairs)

    def mono(a, b, c, d):
        v = [0] * m
        v[idx[(a, b)]] += 1
        v[idx[(c, d)]] += 1
        return tuple(v)

    rels = tuple(
        ((1, mono(i, j, k, l)), (-1, mono(i, k, j, l)), (1, mono(i, l, j, k)))
        for i, j, k, l in combinations(range(1, n + 1), 4)
    )
    pres = Presentation(
        gens=tuple(_gen_name(i, j) for i, j in pairs), relations=rels
    )
    return from_presentation(pres, field, j_max), pres


def bruhat_leq(i, j) -> bool:
    """Componentwise comparison of sorted index pairs."""
    a, b = tuple(sorted(i)), tuple(sorted(j))
    if len(a) != 2 or len(b) != 2:
        raise InputError("Schubert indices are 2-element subsets")
    return a[0] <= b[0] and a[1] <= b[1]


def schubert_map(r, w):
    """Quotient of a Pluecker ring by the coordinates not below w."""
    m = r.piece_dims[1]
    n = next((k for k in range(2, 2 * m + 3) if k * (k - 1) // 2 == m), None)
    if n is None:
        raise PresentationError(
            f"{m} generators is not C(n, 2) for any n; not a Pluecker ring"
        )
    w = tuple(sorted(w))
    if len(w) != 2 or not 1 <= w[0] < w[1] <= n:
        raise InputError(f"Schubert index {w} is not a 2-subset of 1..{n}")
    kill = [
        [1 if t == s else 0 for t in range(m)]
        for s, p in enumerate(pluecker_pairs(n))
        if not bruhat_leq(p, w)
    ]
    return quotient_by_degree_one(r, kill)
