"""Exception types shared across the solver modules."""


class RankfillError(Exception):
    """Base class for all rankfill errors."""


class ParameterDomainError(RankfillError):
    """A solver parameter violates its admissible range."""


class NonConvexSubproblemError(ParameterDomainError):
    """beta1 <= a: the gradient-field subproblem loses strong convexity."""


class ClusterDomainError(ParameterDomainError):
    """Requested more clusters than distinct values."""


class DivergenceError(RankfillError):
    """Non-finite values appeared during iteration."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")


class ShapeMismatchError(RankfillError):
    """Operands have incompatible shapes."""


class ImageFormatError(RankfillError):
    """Unreadable or unsupported image file."""


class UnsupportedDepthError(ImageFormatError):
    """Image sample depth other than 8-bit."""


class InternalConsistencyError(RankfillError):
    """A numerical sanity check failed (e.g. large imaginary residue)."""
