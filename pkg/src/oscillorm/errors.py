"""Exception hierarchy shared by all modules."""


class OscillormError(Exception):
    """Base class for every error raised by the package."""


class DomainError(OscillormError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NumericalError(OscillormError, ArithmeticError):
    """A numerical evaluation produced a non-finite value.

    ``node`` carries the offending abscissa when it is known.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ResolutionError(OscillormError, ValueError):
    """The requested discretization cannot resolve the oscillation."""


class ConvergenceError(OscillormError, RuntimeError):
    """An iteration hit its cap before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateError(OscillormError, ValueError):
    """A construction collapsed (zero support, vanishing second derivative...)."""


class EstimationError(OscillormError, RuntimeError):
    """Every restart of a norm estimate degenerated."""


class ConfigError(OscillormError, ValueError):
    """A sweep or counterexample configuration is inconsistent."""
