"""Exception types shared across the package."""


class MatrixDirichletError(Exception):
    """Base class for all package errors."""


class SpectralGapError(MatrixDirichletError):
    """Adjacent eigenvalues closer than the requested gap tolerance."""


class NotPsdError(MatrixDirichletError):
    """Matrix expected to be positive semi-definite is not."""


class SingularError(MatrixDirichletError):
    """Matrix expected to be invertible is (numerically) singular."""


class DomainError(MatrixDirichletError):
    """Point lies outside the domain of the model or density."""


class DerivativeError(MatrixDirichletError):
    """Finite-difference stencil could not be evaluated."""


class OffSphereError(MatrixDirichletError):
    """Point is not on the unit sphere within tolerance."""


class OffGroupError(MatrixDirichletError):
    """Matrix is not in the unitary group within tolerance."""


class StepRejectedError(MatrixDirichletError):
    """SDE step left the domain and all retries failed."""

    def __init__(self, message, position=None, proposal=None):
        super().__init__(message)
        self.position = position
        self.proposal = proposal


class RankDeficientFit(MatrixDirichletError):
    """Not enough samples for a well-posed least-squares fit."""


class VariableMismatch(MatrixDirichletError):
    """Polynomials defined over inconsistent variable sets."""
