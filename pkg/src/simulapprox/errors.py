"""Exception hierarchy shared by all modules."""


class ApproxError(Exception):
    """Base class for every error raised by simulapprox."""


class InputError(ApproxError, ValueError):
    """An argument is malformed: wrong dimension, non-finite sample, unknown name."""


class DimensionMismatch(InputError):
    pass


class ConfigurationError(ApproxError, ValueError):
    """A configuration exceeds a cap or violates a structural invariant."""


class PreconditionError(InputError):
    """A trace/vanishing precondition failed on the grid.

    ``detail`` carries the offending node, link or face so callers can report it.
    """

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail


class NumericalFailure(ApproxError, ArithmeticError):
    """A floating-point computation missed its residual tolerance."""

    def __init__(self, message, residual=None, sigma=None):
        super().__init__(message)
        self.residual = residual
        self.sigma = sigma
