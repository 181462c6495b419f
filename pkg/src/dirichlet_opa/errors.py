"""Exception types raised by the library."""


class SingularSystemError(ValueError):
    """The Gram system cannot be formed (e.g. the source series is zero)."""


class ConditioningError(ArithmeticError):
    """The Gram matrix is numerically singular.

    The estimated 2-norm condition number is kept on ``cond``.
    """

    def __init__(self, message, cond):
        super().__init__(message)
        self.cond = cond


class TruncationError(ArithmeticError):
    """A truncated series could not be certified to the requested tolerance."""
