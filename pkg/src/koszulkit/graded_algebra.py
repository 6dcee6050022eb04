"""Degreewise truncated graded algebras and the surjections between them.

An algebra is carried entirely by its multiplication tables on a window of
degrees: piece d gets a basis, and mult(a, b) is the matrix of
R_a (x) R_b -> R_{a+b} with tensor index (u, v) -> u * dim_b + v.  No Groebner
machinery: every construction is a truncated linear-algebra computation,
which is exact and adequate because all corpus algebras are generated in
degree 1.

Bases are always echelon complements of a relation span under the graded-lex
monomial order (or the construction's native order), so tables are
deterministic and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import _dense
from .errors import (
    MapError,
    MultiplicationError,
    PresentationError,
    TruncationError,
)
from .exact_linalg import FieldSpec


def monomials(num_gens, degree):
    """Degree-d monomials as ascending index tuples, graded-lex order."""
    return list(combinations_with_replacement(range(num_gens), degree))


@dataclass(eq=False)
class GradedAlgebra:
    field: FieldSpec
    j_max: int
    piece_dims: tuple
    mult_tables: dict  # (a, b) -> dense matrix, a + b <= j_max
    gens: tuple  # labels for the R_1 basis

    def dim(self, d):
        if d < 0:
            return 0
        if d > self.j_max:
            raise TruncationError(f"degree {d} beyond truncation {self.j_max}")
        return self.piece_dims[d]

    def mult(self, a, b):
        if a + b > self.j_max:
            raise TruncationError(
                f"product degree {a + b} beyond truncation {self.j_max}"
            )
        return self.mult_tables[(a, b)]

    def hilbert_function(self):
        return list(self.piece_dims)


@dataclass(eq=False)
class AlgebraMap:
    source: GradedAlgebra
    target: GradedAlgebra
    maps: tuple  # per-degree matrices S_d x R_d, degrees 0..j_max
    surjective: bool = False

    @property
    def j_max(self):
        return min(self.source.j_max, self.target.j_max)

    def degree(self, d):
        if d > self.j_max:
            raise TruncationError(f"degree {d} beyond truncation {self.j_max}")
        return self.maps[d]


@dataclass(frozen=True)
class Presentation:
    gens: tuple
    # each relation is a tuple of (coeff, exponent-tuple) terms
    relations: tuple = ()

    def __post_init__(self):
        if not all(isinstance(g, str) and g for g in self.gens):
            raise PresentationError("generator names must be nonempty strings")
        if len(set(self.gens)) != len(self.gens):
            raise PresentationError("duplicate generator names")
        for rel in self.relations:
            if not rel:
                raise PresentationError("empty relation")
            degs = set()
            for coeff, expo in rel:
                if len(expo) != len(self.gens):
                    raise PresentationError(
                        f"exponent vector {expo} does not match generator count"
                    )
                if any(e < 0 for e in expo):
                    raise PresentationError(f"negative exponent in {expo}")
                degs.add(sum(expo))
            if len(degs) != 1:
                raise PresentationError(f"inhomogeneous relation: degrees {sorted(degs)}")
            if degs.pop() < 2:
                raise PresentationError("relations must have degree >= 2")

    def relation_degrees(self):
        return [sum(rel[0][1]) for rel in self.relations]


def _expo_to_tuple(expo):
    # exponent vector -> ascending generator-index tuple
    out = []
    for i, e in enumerate(expo):
        out.extend([i] * e)
    return tuple(out)


def from_presentation(pres, field, j_max):
    """Quotient of the polynomial algebra on pres.gens, truncated at j_max.

    Degree d of the ideal is spanned by monomial multiples of the relations;
    R_d is the echelon complement.  Needs no term order argument beyond the
    fixed graded-lex convention because everything stays degree by degree.
    """
    g = len(pres.gens)
    if g == 0 and pres.relations:
        raise PresentationError("no generators but nonempty relations")
    rel_degs = pres.relation_degrees()
    if rel_degs and j_max < max(rel_degs):
        raise TruncationError(
            f"truncation {j_max} below relation degree {max(rel_degs)}"
        )

    mons = [monomials(g, d) for d in range(j_max + 1)]
    index = [{m: i for i, m in enumerate(mons[d])} for d in range(j_max + 1)]

    # relation vectors over the monomial basis, one per relation per degree
    rel_vecs = {d: [] for d in range(j_max + 1)}
    for rel in pres.relations:
        d = sum(rel[0][1])
        vec = _dense.zeros(field, (len(mons[d]),))
        for coeff, expo in rel:
            vec[index[d][_expo_to_tuple(expo)]] += field.normalize(coeff)
        if field.is_modular:
            vec %= field.p
        rel_vecs[d].append(vec)

    # ideal span per degree: monomial multiples of lower-degree relation rows
    free_cols = []  # per degree: surviving monomial indices
    proj = []  # per degree: Sym_d -> R_d in the complement basis
    dims = []
    for d in range(j_max + 1):
        nmon = len(mons[d])
        span_rows = []
        for e in range(2, d + 1):
            for vec in rel_vecs[e]:
                nz = [i for i in range(len(vec)) if vec[i]]
                for mu in mons[d - e]:
                    row = _dense.zeros(field, (nmon,))
                    for i in nz:
                        target = tuple(sorted(mu + mons[e][i]))
                        row[index[d][target]] += vec[i]
                    if field.is_modular:
                        row %= field.p
                    span_rows.append(row)
        if span_rows:
            A = np.stack(span_rows)
            rk, pivcols, R = _dense.rref(field, A)
        else:
            rk, pivcols, R = 0, [], None
        pivset = set(pivcols)
        free = [c for c in range(nmon) if c not in pivset]
        free_cols.append(free)
        dims.append(len(free))
        proj.append(_complement_projection(field, nmon, free, pivcols, R))

    mult = {}
    for a in range(j_max + 1):
        for b in range(j_max + 1 - a):
            da, db, dab = dims[a], dims[b], dims[a + b]
            M = _dense.zeros(field, (dab, da * db))
            for u, cu in enumerate(free_cols[a]):
                mu = mons[a][cu]
                for v, cv in enumerate(free_cols[b]):
                    target = tuple(sorted(mu + mons[b][cv]))
                    M[:, u * db + v] = proj[a + b][:, index[a + b][target]]
            mult[(a, b)] = M

    return GradedAlgebra(
        field=field,
        j_max=j_max,
        piece_dims=tuple(dims),
        mult_tables=mult,
        gens=tuple(pres.gens),  # degree-1 piece is untouched: relations start at 2
    )


def _complement_projection(field, n, free, pivcols, R):
    """Matrix of the quotient map k^n -> complement of the pivot span.

    Rows of R are assumed reduced; pivot coordinate pc maps to
    -sum_c R[i, c] e_c over the free coordinates c, free coordinates map to
    themselves.
    """
    P = _dense.zeros(field, (len(free), n))
    for fi, c in enumerate(free):
        P[fi, c] = field.one()
    for i, pc in enumerate(pivcols):
        for fi, c in enumerate(free):
            v = R[i, c]
            if v:
                P[fi, pc] = field.neg(v)
    return P


def validate_algebra(r):
    """Exact unit/commutativity/associativity checks on all in-window triples."""
    if r.piece_dims[0] != 1:
        raise MultiplicationError("R_0 must be one-dimensional")
    for b in range(r.j_max + 1):
        db = r.piece_dims[b]
        ident = _dense.eye(r.field, db)
        if not _dense.equal(r.mult(0, b), ident):
            raise MultiplicationError("unit does not act as identity", witness=(0, b))
        if not _dense.equal(r.mult(b, 0), ident):
            raise MultiplicationError("unit does not act as identity", witness=(b, 0))
    for a in range(1, r.j_max):
        for b in range(1, r.j_max + 1 - a):
            da, db = r.piece_dims[a], r.piece_dims[b]
            Mab = r.mult(a, b)
            Mba = r.mult(b, a)
            swapped = np.empty_like(Mab)
            for u in range(da):
                for v in range(db):
                    swapped[:, u * db + v] = Mba[:, v * da + u]
            if not _dense.equal(Mab, swapped):
                raise MultiplicationError(
                    "multiplication not commutative", witness=(a, b)
                )
    for a in range(1, r.j_max - 1):
        for b in range(1, r.j_max - a):
            for c in range(1, r.j_max + 1 - a - b):
                da, db, dc = r.piece_dims[a], r.piece_dims[b], r.piece_dims[c]
                left = _dense.matmul(
                    r.field,
                    r.mult(a + b, c),
                    np.kron(r.mult(a, b), _dense.eye(r.field, dc)),
                )
                right = _dense.matmul(
                    r.field,
                    r.mult(a, b + c),
                    np.kron(_dense.eye(r.field, da), r.mult(b, c)),
                )
                if not _dense.equal(left, right):
                    raise MultiplicationError(
                        "multiplication not associative", witness=(a, b, c)
                    )
    return True


def from_multiplication_data(dims, mult, field, j_max, gens=None):
    """Wrap raw multiplication tables after validating the algebra axioms."""
    dims = tuple(int(x) for x in dims)
    if len(dims) != j_max + 1:
        raise MultiplicationError(
            f"need {j_max + 1} piece dimensions, got {len(dims)}"
        )
    tables = {}
    for a in range(j_max + 1):
        for b in range(j_max + 1 - a):
            expected = (dims[a + b], dims[a] * dims[b])
            if 0 in expected:
                tables[(a, b)] = _dense.zeros(field, expected)
                continue
            try:
                M = mult[(a, b)]
            except KeyError:
                raise MultiplicationError(f"missing table for degrees ({a},{b})")
            W = _dense.asarray(field, M)
            if W.shape != expected:
                raise MultiplicationError(
                    f"table ({a},{b}) has shape {W.shape}, expected {expected}"
                )
            tables[(a, b)] = W
    if gens is None:
        gens = tuple(f"g{i}" for i in range(dims[1]))
    r = GradedAlgebra(
        field=field,
        j_max=j_max,
        piece_dims=dims,
        mult_tables=tables,
        gens=tuple(gens),
    )
    validate_algebra(r)
    return r


def hilbert_function(r):
    return r.hilbert_function()


def quotient_by_degree_one(r, linear_forms):
    """S = R/(linear forms) computed degreewise, with the surjection R -> S.

    The ideal's degree-d piece is R_{d-1} * span(forms) since everything is
    generated in degree 1; S_d is the echelon complement, its basis a subset
    of R_d coordinates, so sections are coordinate inclusions.
    """
    field = r.field
    d1 = r.piece_dims[1] if r.j_max >= 1 else 0
    forms = _dense.zeros(field, (d1, len(linear_forms)))
    for j, f in enumerate(linear_forms):
        if len(f) != d1:
            raise PresentationError(f"linear form {f} does not lie in degree one")
        for i, x in enumerate(f):
            forms[i, j] = field.normalize(x)

    free_cols = [[0]]  # S_0 = k
    projs = [_dense.eye(field, 1)]
    dims = [1]
    for d in range(1, r.j_max + 1):
        dd = r.piece_dims[d]
        if len(linear_forms) == 0:
            free_cols.append(list(range(dd)))
            projs.append(_dense.eye(field, dd))
            dims.append(dd)
            continue
        # J_d columns: mult(d-1, 1) applied to (basis of R_{d-1}) x forms
        M = r.mult(d - 1, 1)
        dprev = r.piece_dims[d - 1]
        cols = _dense.zeros(field, (dd, dprev * forms.shape[1]))
        for w in range(dprev):
            block = _dense.matmul(field, M[:, w * d1 : (w + 1) * d1], forms)
            cols[:, w * forms.shape[1] : (w + 1) * forms.shape[1]] = block
        rk, pivcols, R = _dense.rref(field, cols.T.copy())
        pivset = set(pivcols)
        free = [c for c in range(dd) if c not in pivset]
        free_cols.append(free)
        dims.append(len(free))
        projs.append(_complement_projection(field, dd, free, pivcols, R))

    mult = {}
    for a in range(r.j_max + 1):
        for b in range(r.j_max + 1 - a):
            Mr = r.mult(a, b)
            dbr = r.piece_dims[b]
            # section of the surjection is coordinate inclusion, so the S table
            # is proj composed with the R table restricted to surviving pairs
            col_idx = [
                cu * dbr + cv for cu in free_cols[a] for cv in free_cols[b]
            ]
            if col_idx and dims[a + b]:
                M = _dense.matmul(field, projs[a + b], Mr[:, col_idx])
            else:
                M = _dense.zeros(field, (dims[a + b], dims[a] * dims[b]))
            mult[(a, b)] = M

    s = GradedAlgebra(
        field=field,
        j_max=r.j_max,
        piece_dims=tuple(dims),
        mult_tables=mult,
        gens=tuple(r.gens[c] for c in free_cols[1]) if r.j_max >= 1 else (),
    )
    phi = AlgebraMap(source=r, target=s, maps=tuple(projs), surjective=True)
    return s, phi


def identity_map(r):
    s, phi = quotient_by_degree_one(r, [])
    return phi


def augmentation_map(r):
    """The quotient by all of R_1; for degree-1-generated algebras, R -> k."""
    basis = [
        [1 if i == j else 0 for i in range(r.piece_dims[1])]
        for j in range(r.piece_dims[1])
    ]
    s, phi = quotient_by_degree_one(r, basis)
    return s, phi


def validate_map(phi):
    """Exact multiplicativity (and surjectivity, if flagged) of an AlgebraMap."""
    r, s = phi.source, phi.target
    field = r.field
    if not _dense.equal(phi.degree(0), _dense.eye(field, 1)):
        raise MapError("map is not the identity on degree zero")
    jm = phi.j_max
    for a in range(1, jm):
        for b in range(1, jm + 1 - a):
            if a + b > jm:
                continue
            left = _dense.matmul(field, phi.degree(a + b), r.mult(a, b))
            right = _dense.matmul(
                field, s.mult(a, b), np.kron(phi.degree(a), phi.degree(b))
            )
            if not _dense.equal(left, right):
                raise MapError(f"map not multiplicative at degrees ({a},{b})")
    if phi.surjective:
        for d in range(jm + 1):
            if _dense.rank(field, phi.degree(d)) != s.piece_dims[d]:
                raise MapError(f"map flagged surjective but degree {d} is not")
    return True


def veronese(r, d, j_max):
    """Subalgebra on every d-th piece, truncated at j_max."""
    if d < 1:
        raise TruncationError("veronese step must be >= 1")
    if d * j_max > r.j_max:
        raise TruncationError(
            f"source truncation {r.j_max} too small for step {d} window {j_max}"
        )
    dims = tuple(r.piece_dims[d * m] for m in range(j_max + 1))
    mult = {}
    for a in range(j_max + 1):
        for b in range(j_max + 1 - a):
            mult[(a, b)] = r.mult(d * a, d * b)
    if d == 1:
        gens = r.gens
    else:
        gens = tuple(f"v{i}" for i in range(dims[1] if j_max >= 1 else 0))
    return GradedAlgebra(
        field=r.field,
        j_max=j_max,
        piece_dims=dims,
        mult_tables=mult,
        gens=gens,
    )
