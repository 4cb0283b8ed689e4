"""Exception hierarchy shared by all modules."""


class CommonEigError(Exception):
    """Base class for every error raised by this package."""


class InputError(CommonEigError, ValueError):
    """Malformed or invalid input (bad shape, wrong domain, negative entry)."""


class DimensionError(InputError):
    pass


class DomainError(InputError):
    pass


class UnsupportedDomainError(DomainError):
    pass


class UndefinedResidualError(InputError):
    """Residuation against the zero vector."""


class NotInvariantError(CommonEigError):
    """A cone or subspace is not invariant under the operator."""


class InvariantViolationError(CommonEigError):
    """An internal result failed its own verification; indicates a defect."""


class IterationError(CommonEigError):
    """An iterative method did not converge; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DivergenceError(CommonEigError):
    """Kleene star requested for a matrix with cycle mean above one."""


class ZeroEigenvalueError(CommonEigError):
    """The principal eigenvalue is zero; the zero-eigenvalue path applies."""


class ZeroImageError(CommonEigError):
    """The operator annihilates a point where a nonzero image was required."""


class PreconditionError(CommonEigError):
    pass


class ClassificationError(CommonEigError):
    """The semigroup could not be classified within the configured caps."""
