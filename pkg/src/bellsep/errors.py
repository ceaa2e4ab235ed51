"""Exception hierarchy shared by all bellsep modules."""


class BellsepError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(BellsepError, ValueError):
    """An argument is malformed, out of range, or has the wrong dimension."""


class NumericFailureError(BellsepError, ArithmeticError):
    """An iterative numeric routine failed to converge."""


class UnsupportedDimensionError(BellsepError, ValueError):
    """The operation is only defined for a different qubit count per party."""


class NotAStateError(InvalidArgumentError):
    """The coefficients do not describe a positive semidefinite density matrix."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class CriterionViolatedError(BellsepError, ValueError):
    """A separable decomposition was requested for a state violating the criterion."""


class InternalConsistencyError(BellsepError, RuntimeError):
    """A runtime self-check failed; indicates a bug rather than bad input."""
