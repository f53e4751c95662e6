"""Exception types shared by every module."""


class FracHeatError(Exception):
    """Base class for all library errors."""


class DomainError(FracHeatError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigurationError(FracHeatError, ValueError):
    """A grid/shape/run configuration is inconsistent."""


class NumericalError(FracHeatError, ArithmeticError):
    """A quadrature, fit or evolution did not reach its tolerance.

    ``residual`` carries the achieved error estimate when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
