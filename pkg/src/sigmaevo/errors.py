"""Exception hierarchy shared across the library."""


class SigmaEvoError(Exception):
    """Base class for all library errors."""


class DomainError(SigmaEvoError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(SigmaEvoError, ArithmeticError):
    """The requested value lies outside the range the algorithm supports."""


class UnsupportedCaseError(SigmaEvoError, ValueError):
    """No implemented case/branch covers the given parameters."""


class PreconditionError(SigmaEvoError, ValueError):
    """A documented precondition is violated."""


class LengthError(SigmaEvoError, ValueError):
    """Too few samples for the requested discrete operator."""


class GridError(SigmaEvoError, ValueError):
    """A time or space grid does not have the required structure."""


class ConfigurationError(SigmaEvoError, ValueError):
    """Model parameters violate the constraints of the selected problem."""


class InversionError(SigmaEvoError, ArithmeticError):
    """Numerical Laplace inversion produced non-finite values."""


class DivergentIntegralError(SigmaEvoError, ValueError):
    """An improper integral does not converge for the given exponents."""


class RegimeError(SigmaEvoError, ValueError):
    """Kernel parameters fall outside every integrability regime."""
