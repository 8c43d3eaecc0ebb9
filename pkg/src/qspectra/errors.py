"""Exception types shared across the package."""


class QSpectraError(Exception):
    """Base class for all errors raised by qspectra."""


class BadParameter(QSpectraError, ValueError):
    """A scalar parameter is outside its admissible range."""


class QRelationViolated(QSpectraError):
    """The pair does not satisfy TS = q^-1 ST within tolerance."""

    def __init__(self, residual, tol):
        super().__init__(f"q-commutation residual {residual:.3e} exceeds tolerance {tol:.3e}")
        self.residual = residual
        self.tol = tol


class DimensionMismatch(QSpectraError, ValueError):
    pass


class NumericalBreakdown(QSpectraError, ArithmeticError):
    """An SVD failed to converge."""


class CapExceeded(QSpectraError):
    """An exact computation was requested above the configured size cap."""


class OutOfAnnulus(BadParameter):
    pass


class Inconclusive(QSpectraError):
    """Cohomology defects oscillate across the truncation schedule.

    The partially computed classification is attached as ``classification``
    so callers can keep the point with its flags.
    """

    def __init__(self, message, classification=None):
        super().__init__(message)
        self.classification = classification
