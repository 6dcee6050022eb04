"""Exact linear algebra over GF(p) and the rationals.

Everything homological in this package bottoms out in `rank`, `rref`,
`kernel_basis` and `right_inverse_on_image`; they are deterministic pure
functions, so results are reproducible across runs and parallel schedules.
"""

from ._backend import BACKEND
from .elimination import (
    RrefResult,
    kernel_basis,
    matmul,
    mod_matmul,
    rank,
    rref,
    right_inverse_on_image,
)
from .fields import FieldSpec
from .sparse import SparseMatrix

__all__ = [
    "BACKEND",
    "FieldSpec",
    "SparseMatrix",
    "RrefResult",
    "rank",
    "rref",
    "kernel_basis",
    "right_inverse_on_image",
    "matmul",
    "mod_matmul",
]
