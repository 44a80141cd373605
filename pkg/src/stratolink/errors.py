"""Exception hierarchy shared by all stratolink modules."""


class StratolinkError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StratolinkError, ValueError):
    """An argument lies outside the mathematical or physical domain."""


class UnsupportedRangeError(DomainError):
    """Input is valid in principle but outside the range a model is calibrated for."""


class ConvergenceError(StratolinkError, ArithmeticError):
    """A numerical procedure failed to reach its requested accuracy."""


class SeriesConvergenceError(ConvergenceError):
    """Series truncation did not meet its tolerance within the term budget."""

    def __init__(self, message, terms_used=None, last_term=None):
        super().__init__(message)
        self.terms_used = terms_used
        self.last_term = last_term


class QuadratureError(ConvergenceError):
    """Adaptive quadrature stopped before reaching its tolerance."""

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ScenarioParseError(StratolinkError):
    """A scenario document is malformed or misses a required field."""
