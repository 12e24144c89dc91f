"""Exception types raised across the package."""


class QMixParError(Exception):
    """Base class for all package errors."""


class DimensionError(QMixParError, ValueError):
    """Matrix or vector shape does not fit the operation."""


class NotHermitianError(QMixParError, ValueError):
    pass


class CoordinateError(QMixParError, ValueError):
    """A coordinate or mixing weight is outside its admissible range."""


class InvariantViolation(QMixParError, RuntimeError):
    """An internal consistency check failed (signals a bug, not bad input)."""


class ConvergenceError(InvariantViolation):
    pass
