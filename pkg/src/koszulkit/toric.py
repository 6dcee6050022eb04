"""Lattice polytopes as a combinatorial source of graded semigroup rings.

A polytope P in Z^d stands for a polarized toric pair; graded piece n of its
coordinate ring is the lattice-point set of the dilation nP, and degreewise
multiplication is addition of lattice points.  Facet inequalities come from
an exact d-subset scan over the vertices, so every membership test is
integer arithmetic; adequate for the ambient dimensions (<= 4) this backend
is meant for.

The idp check is the combinatorial shadow of the section-surjectivity
hypotheses: (aP cap Z) + (bP cap Z) = (a+b)P cap Z.  First cohomology
vanishing has no combinatorial counterpart here and stays an assumption,
recorded on verdicts as H1_ASSUMPTION.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from .errors import PolytopeError
from .graded_algebra import from_multiplication_data
from .pool import pmap

H1_ASSUMPTION = "toric-h1-vanishing-assumed"


def _det(m):
    k = len(m)
    if k == 0:
        return 1
    if k == 1:
        return m[0][0]
    tot = 0
    for c in range(k):
        if m[0][c]:
            minor = [row[:c] + row[c + 1 :] for row in m[1:]]
            tot += (-1) ** c * m[0][c] * _det(minor)
    return tot


def _rank(rows):
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = rows[i][c] / rows[rk][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def _dot(a, x):
    return sum(p * q for p, q in zip(a, x))


def _hyperplane_normal(diffs, d):
    # generalized cross product: nullspace vector of a (d-1) x d matrix
    out = []
    for i in range(d):
        minor = [row[:i] + row[i + 1 :] for row in diffs]
        out.append((-1) ** i * _det(minor))
    return None if all(x == 0 for x in out) else tuple(out)


def _facet_list(verts, d):
    seen = {}
    for sub in combinations(verts, d):
        diffs = [[q[t] - sub[0][t] for t in range(d)] for q in sub[1:]]
        normal = _hyperplane_normal(diffs, d)
        if normal is None:
            continue
        rhs = _dot(normal, sub[0])
        vals = [_dot(normal, v) for v in verts]
        if all(x <= rhs for x in vals):
            a, b = normal, rhs
        elif all(x >= rhs for x in vals):
            a, b = tuple(-x for x in normal), -rhs
        else:
            continue
        g = 0
        for x in a:
            g = gcd(g, abs(x))
        seen[(tuple(x // g for x in a), b // g)] = None
    return tuple(seen)


@dataclass(frozen=True, eq=False)
class LatticePolytope:
    dimension: int
    vertices: tuple
    facets: tuple  # (normal, rhs) pairs with normal . x <= rhs over P


def lattice_polytope(vertices) -> LatticePolytope:
    """Validated constructor: integer vertices, full-dimensional, and every
    listed point an extreme point of the hull."""
    verts = []
    for v in vertices:
        vt = tuple(v)
        if not vt or any(not isinstance(c, int) or isinstance(c, bool) for c in vt):
            raise PolytopeError(f"vertex {v!r} is not a nonempty integer point")
        verts.append(vt)
    if not verts:
        raise PolytopeError("no vertices")
    d = len(verts[0])
    if any(len(v) != d for v in verts):
        raise PolytopeError("vertices of mixed dimension")
    if len(set(verts)) != len(verts):
        raise PolytopeError("duplicate vertex")
    verts = tuple(sorted(verts))
    if _rank([[q - p for q, p in zip(v, verts[0])] for v in verts[1:]]) != d:
        raise PolytopeError(f"polytope is not full-dimensional in Z^{d}")
    facets = _facet_list(verts, d)
    for v in verts:
        tight = [a for a, b in facets if _dot(a, v) == b]
        if _rank(tight) != d:
            raise PolytopeError(f"{v} is not an extreme point of the hull")
    return LatticePolytope(dimension=d, vertices=verts, facets=facets)


def lattice_points(p: LatticePolytope, n: int) -> list:
    """All integer points of the dilation nP, lexicographically sorted."""
    if n < 0:
        raise PolytopeError("negative dilation")
    d = p.dimension
    if n == 0:
        return [(0,) * d]
    lo = [n * min(v[i] for v in p.vertices) for i in range(d)]
    hi = [n * max(v[i] for v in p.vertices) for i in range(d)]
    out = []
    for x in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(_dot(normal, x) <= n * rhs for normal, rhs in p.facets):
            out.append(x)
    return out


def is_smooth(p: LatticePolytope) -> bool:
    """Unimodular primitive edge directions at every vertex."""
    d = p.dimension
    for v in p.vertices:
        dirs = []
        for w in p.vertices:
            if w == v:
                continue
            both = [a for a, b in p.facets if _dot(a, v) == b and _dot(a, w) == b]
            if _rank(both) != d - 1:
                continue  # the segment (v, w) is not an edge
            u = tuple(wc - vc for wc, vc in zip(w, v))
            g = 0
            for c in u:
                g = gcd(g, abs(c))
            dirs.append(tuple(c // g for c in u))
        if len(dirs) != d or abs(_det([list(u) for u in dirs])) != 1:
            return False
    return True


def _idp_witness(p, a, b):
    pa = lattice_points(p, a)
    pb = set(lattice_points(p, b))
    for t in lattice_points(p, a + b):
        if not any(tuple(tc - uc for tc, uc in zip(t, u)) in pb for u in pa):
            return t
    return None


def idp_check(p: LatticePolytope, a: int, b: int) -> bool:
    """(aP cap Z) + (bP cap Z) covers (a+b)P cap Z."""
    if a < 1 or b < 1:
        raise PolytopeError("dilations must be >= 1")
    return _idp_witness(p, a, b) is None


def coordinate_ring(p: LatticePolytope, field, j_max: int):
    """Semigroup ring of P truncated at j_max, multiplication by addition."""
    if j_max < 1:
        raise PolytopeError("truncation must be >= 1")
    pts = dict(
        zip(range(j_max + 1), pmap(lambda n: lattice_points(p, n), range(j_max + 1)))
    )
    index = {n: {pt: i for i, pt in enumerate(ps)} for n, ps in pts.items()}
    dims = [len(pts[n]) for n in range(j_max + 1)]
    mult = {}
    for a in range(j_max + 1):
        for b in range(j_max + 1 - a):
            db = dims[b]
            rows = [[0] * (dims[a] * db) for _ in range(dims[a + b])]
            tgt = index[a + b]
            for u, pu in enumerate(pts[a]):
                for v, pv in enumerate(pts[b]):
                    w = tuple(x + y for x, y in zip(pu, pv))
                    rows[tgt[w]][u * db + v] = 1
            mult[(a, b)] = rows
    gens = tuple("t" + "".join(f"_{c}" for c in pt) for pt in pts[1])
    return from_multiplication_data(dims, mult, field, j_max, gens=gens)
