"""Exception types raised by the numerical layers."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RegimeError(ValueError):
    """An expansion was asked for outside the window where it is valid."""


class AccuracyError(ArithmeticError):
    """No available method could certify the requested accuracy.

    The best-effort result is kept on ``best`` so callers that only need
    an absolute error bound (zero finders, scans) can still use it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BracketError(RuntimeError):
    """A root bracket did not show a sign change."""


class QuadratureError(ArithmeticError):
    """An adaptive quadrature failed to converge."""
