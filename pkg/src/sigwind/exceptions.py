"""Exception hierarchy shared by all sigwind modules."""


class SigwindError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(SigwindError, ValueError):
    """Operands disagree in dimension or truncation level."""


class DomainError(SigwindError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(SigwindError, IndexError):
    """A requested degree exceeds the truncation level."""


class NotLieError(DomainError):
    """A tensor could not be expanded in the Lyndon basis within tolerance."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class PointOnCurveError(DomainError):
    """The winding number is undefined because the point touches the curve."""


class NumericalInstabilityError(SigwindError, ArithmeticError):
    """A Loewner slit-map composition left the upper half-plane."""


class ConvergenceError(SigwindError, RuntimeError):
    """An iterative scheme exhausted its budget; ``best`` holds the last estimate."""

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class CSVParseError(SigwindError, ValueError):
    """A polyline CSV file could not be parsed."""
