"""Exception hierarchy shared by all modules."""


class RobustContamError(Exception):
    """Base class for errors raised by this package."""


class DomainError(RobustContamError, ValueError):
    """An argument lies outside the domain of the operation."""


class BracketError(RobustContamError, ValueError):
    """The supplied interval does not bracket a sign change."""


class NumericalError(RobustContamError, ArithmeticError):
    """A numerical routine failed to reach its tolerance.

    Attributes
    ----------
    best_estimate : float or None
        The best value available when the routine gave up.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class UnsupportedOperation(RobustContamError, TypeError):
    """The operation is not defined for the given rho family."""


class DegenerateScaleError(RobustContamError, ValueError):
    """A scale estimate is zero, e.g. for a sample of identical values."""


class RegimeError(RobustContamError, ValueError):
    """A theoretical quantity was requested outside its validity regime."""
