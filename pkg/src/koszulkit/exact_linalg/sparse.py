"""Sparse matrices in coordinate form with strictly increasing (row, col)
entry order.  Scalars are canonical for the ambient field: ints in [0, p) for
GF(p), Fractions for the rationals.  Zero entries are never stored."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import MatrixError
from .fields import FieldSpec


@dataclass(frozen=True)
class SparseMatrix:
    field: FieldSpec
    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixError("negative dimensions")
        prev = (-1, -1)
        for r, c, v in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise MatrixError(f"entry ({r},{c}) out of bounds")
            if (r, c) <= prev:
                raise MatrixError("entries not strictly (row, col) sorted")
            prev = (r, c)
            if self.field.is_modular:
                if not isinstance(v, int) or not 0 < v < self.field.p:
                    raise MatrixError(f"non-canonical GF({self.field.p}) value {v!r}")
            else:
                if not isinstance(v, Fraction) or v == 0:
                    raise MatrixError(f"non-canonical rational value {v!r}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_entries(cls, field: FieldSpec, rows: int, cols: int, triples) -> "SparseMatrix":
        """Build from unordered (row, col, value) triples; duplicates add."""
        acc: dict = {}
        for r, c, v in triples:
            v = field.normalize(v)
            key = (int(r), int(c))
            w = field.add(acc.get(key, field.zero()), v)
            if w == 0:
                acc.pop(key, None)
            else:
                acc[key] = w
        ents = tuple((r, c, acc[(r, c)]) for r, c in sorted(acc))
        return cls(field, rows, cols, ents)

    @classmethod
    def from_dense(cls, field: FieldSpec, rows2d) -> "SparseMatrix":
        data = [list(row) for row in rows2d]
        m = len(data)
        n = len(data[0]) if m else 0
        trips = []
        for i, row in enumerate(data):
            if len(row) != n:
                raise MatrixError("ragged dense input")
            for j, v in enumerate(row):
                v = field.normalize(v)
                if v != 0:
                    trips.append((i, j, v))
        return cls(field, m, n, tuple(trips))

    # -- conversion ---------------------------------------------------------

    def to_dense(self):
        """Python list-of-lists with canonical scalars."""
        zero = self.field.zero()
        out = [[zero] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r][c] = v
        return out

    def to_float_array(self, dtype=np.float64) -> np.ndarray:
        """Dense float array; only valid for GF(p) (entries are small ints)."""
        if not self.field.is_modular:
            raise MatrixError("float densification is for prime fields only")
        a = np.zeros((self.rows, self.cols), dtype=dtype)
        if self.entries:
            rr = np.fromiter((e[0] for e in self.entries), dtype=np.int64, count=len(self.entries))
            cc = np.fromiter((e[1] for e in self.entries), dtype=np.int64, count=len(self.entries))
            vv = np.fromiter((e[2] for e in self.entries), dtype=np.int64, count=len(self.entries))
            a[rr, cc] = vv.astype(dtype)
        return a

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMatrix":
        trips = sorted((c, r, v) for r, c, v in self.entries)
        return SparseMatrix(self.field, self.cols, self.rows, tuple(trips))
