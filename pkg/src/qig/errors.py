"""Exception hierarchy shared by all qig modules."""


class QigError(Exception):
    """Base class for all qig errors."""


class ValidationError(QigError):
    """Malformed or inconsistent input data."""


class NonHermitianInput(ValidationError):
    """Matrix violates Hermitian symmetry beyond tolerance."""


class DimensionMismatch(ValidationError):
    """Operands live on Hilbert spaces of different dimension."""


class LengthMismatch(ValidationError):
    """Probability vectors (or map shapes) of incompatible length."""


class DimensionCap(ValidationError):
    """Requested tensor power exceeds the configured dimension cap."""


class GeneratorNotNormalised(ValidationError):
    """Divergence generator f does not satisfy f(1) = 0."""


class AlphaOutOfRange(ValidationError):
    """Order parameter outside the admissible range of the divergence family."""


class DomainError(QigError):
    """Scalar function undefined at an eigenvalue of its matrix argument."""


class SupportViolation(QigError):
    """Derivative (or second state) leaves the support; the quantity diverges."""


class NonSmoothDivergence(QigError):
    """Divergence lacks the second-order smoothness needed for a metric."""


class NonMonotoneResult(QigError):
    """Candidate kernel function falls outside the standard monotone class."""


class RegularisationFailure(QigError):
    """Full-rank regularisation did not converge to a stable value."""
