"""koszulkit: exact computational tests for Koszulness of graded algebras.

Degreewise truncated graded algebras, their bar-complex Betti tables, the
small model complexes that certify 1-linearity degree by degree, explicit
contracting homotopies, and the toric / Grassmannian constructions the test
corpus is built from.  All arithmetic is exact (GF(p) or Q).
"""

__version__ = "0.1.0"

from .bar_homology import (
    BettiTable,
    betti_table,
    is_koszul_window,
    is_large_window,
    is_one_linear_window,
)
from .exact_linalg import FieldSpec, SparseMatrix
from .graded_algebra import (
    GradedAlgebra,
    Presentation,
    augmentation_map,
    from_presentation,
    quotient_by_degree_one,
)
from .grassmann import pluecker_ring, schubert_map
from .homotopy import build_homotopy, verify_homotopy
from .model_complex import model_window_check
from .toric import coordinate_ring, lattice_polytope
from .verdict import Verdict

__all__ = [
    "BettiTable",
    "FieldSpec",
    "GradedAlgebra",
    "Presentation",
    "SparseMatrix",
    "Verdict",
    "__version__",
    "augmentation_map",
    "betti_table",
    "build_homotopy",
    "coordinate_ring",
    "from_presentation",
    "is_koszul_window",
    "is_large_window",
    "is_one_linear_window",
    "lattice_polytope",
    "model_window_check",
    "pluecker_ring",
    "quotient_by_degree_one",
    "schubert_map",
    "verify_homotopy",
]
