"""Exception types shared across the package."""


class KoszulkitError(Exception):
    """Base class for all package-specific errors."""


class FieldError(KoszulkitError):
    """Bad field description (non-prime modulus, unsupported size)."""


class MatrixError(KoszulkitError):
    """Malformed sparse matrix data."""


class PresentationError(KoszulkitError):
    """Inhomogeneous or otherwise invalid presentation input."""


class MultiplicationError(KoszulkitError):
    """Degreewise multiplication data violates unit, commutativity or
    associativity; carries the witnessing degrees/indices."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TruncationError(KoszulkitError):
    """An operation asked for graded data beyond the stored truncation."""


class MapError(KoszulkitError):
    """An algebra map does not satisfy a required property (e.g. it is not a
    flagged surjection where one is needed)."""


class WeightSequenceError(KoszulkitError):
    """Invalid weight sequence, or a sequence outside the sigma domain."""


class NonAcyclicModel(KoszulkitError):
    """A model complex required by the homotopy construction has nonzero
    middle homology.  `alpha` is the weight sequence of the offending model."""

    def __init__(self, alpha):
        super().__init__(f"model complex for weights {tuple(alpha)} is not acyclic")
        self.alpha = tuple(alpha)


class PolytopeError(KoszulkitError):
    """Degenerate or malformed lattice polytope input."""


class InputError(KoszulkitError):
    """Malformed job input (CLI/JSON layer)."""
