"""Exception types shared across the package."""


class BeamBoundsError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedProfileError(BeamBoundsError):
    """A stiffness profile cannot provide what was asked of it,
    e.g. a certified per-element infimum or a closed-form eigenvalue."""


class MisalignedMeshError(BeamBoundsError):
    """A mesh does not align with the breakpoints of a piecewise-constant
    stiffness profile."""


class SingularSystemError(BeamBoundsError):
    """Assembly produced a matrix whose factorization failed."""


class FactorizationFailureError(BeamBoundsError):
    """The eigensolver could not factorize a system matrix; the pencil is
    not numerically symmetric positive definite."""


class NoConvergenceError(BeamBoundsError):
    """The iterative eigensolver did not reach its residual target.

    The ``best_residual`` attribute records the smallest residual achieved.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class StaleResultError(BeamBoundsError):
    """An eigenresult was checked against a system it does not belong to."""
