"""Exception hierarchy shared across the package.

Every error raised on a documented failure path derives from PxpError and
carries the process exit code the command-line driver should use.  Library
callers can catch the base class; the CLI maps exit_code straight through.
"""

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_CAPACITY = 4


class PxpError(Exception):
    """Base class for all package errors."""

    exit_code = EXIT_VALIDATION


class ValidationError(PxpError, ValueError):
    """Malformed input: bad argument combination, unparsable value."""

    exit_code = EXIT_VALIDATION


class RangeError(ValidationError):
    """A numeric parameter lies outside its documented range."""


class ShapeError(ValidationError):
    """An array argument has the wrong shape or length."""


class UnsupportedConfigurationError(ValidationError):
    """A parameter combination that is well-formed but not defined,
    e.g. a staggered product state on an odd number of sites."""


class DomainError(ValidationError):
    """An input violates a mathematical precondition, e.g. a matrix
    passed as a density operator that is not positive semi-definite."""


class NumericalError(PxpError, ArithmeticError):
    """A computation failed to meet its accuracy contract: convergence
    failure, norm drift, or disagreement between redundant routes."""

    exit_code = EXIT_NUMERICAL


class SelectionError(PxpError):
    """A selection procedure could not satisfy its request, e.g. fewer
    separable scar candidates than the count asked for."""

    exit_code = EXIT_NUMERICAL


class CapacityError(PxpError):
    """The request is valid but exceeds what this build will attempt,
    e.g. dense diagonalization above the dense-size limit."""

    exit_code = EXIT_CAPACITY
