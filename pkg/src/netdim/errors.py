"""Exception types shared across the package."""


class NetdimError(Exception):
    """Base class for all package-specific errors."""


class DomainError(NetdimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRangeError(DomainError):
    """A parameter is valid in principle but outside the supported range."""


class NoClosedFormError(NetdimError, ValueError):
    """A closed-form evaluation was requested where none applies."""


class QuadratureError(NetdimError, ArithmeticError):
    """Adaptive integration failed to reach the requested tolerance."""
