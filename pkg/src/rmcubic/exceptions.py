"""
Exception hierarchy for the rmcubic library.

This module defines all custom exceptions used throughout the library,
providing a clear hierarchy for error handling.
"""


class RmCubicError(Exception):
    """
    Base exception for all library errors.

    All custom exceptions in this library inherit from this base class,
    allowing callers to catch every library-specific error with a single
    exception handler if desired.
    """

    pass


class ConfigurationError(RmCubicError):
    """
    Raised when configuration is invalid.

    This exception is raised when run settings, environment variables or
    command-line flags contain invalid values.

    Examples:
        - Invalid enum values
        - q that is not a prime power
        - Non-positive thread counts or budgets
    """

    pass


class BudgetExceededError(RmCubicError):
    """
    Raised when an exhaustive enumeration would exceed the codeword budget.

    The check happens before any table is built, so an oversized request
    fails fast instead of exhausting memory.
    """

    pass


class FieldError(RmCubicError):
    """
    Raised for invalid finite-field construction or mixed-field arithmetic.

    Examples:
        - Non-prime characteristic
        - Field order above the supported bound
        - Operands that belong to different fields
    """

    pass


class FieldZeroDivisionError(FieldError, ZeroDivisionError):
    """Raised on division by, or inversion of, the zero element."""

    pass


class InvalidArgumentError(RmCubicError, ValueError):
    """
    Raised when a number-theoretic or combinatorial argument is out of range.

    Examples:
        - Kronecker symbol with n < 1
        - tau(n) with n above the requested bound
        - Dual coefficient requested outside the supported weights
    """

    pass


class InvalidDiscriminantError(InvalidArgumentError):
    """Raised when a discriminant is non-negative or not 0, 1 mod 4."""

    pass


class OutOfScopeError(RmCubicError):
    """
    Raised when a closed form is requested outside its hypotheses.

    The message carries a short machine-readable reason tag (for example
    ``char3-out-of-scope``) in the ``reason`` attribute so verification
    suites can turn it into a skipped check.
    """

    def __init__(self, message: str, reason: str = "out-of-scope") -> None:
        super().__init__(message)
        self.reason = reason


class EnumeratorError(RmCubicError):
    """Base class for inconsistent weight-enumerator data."""

    pass


class NonIntegralCoefficientError(EnumeratorError):
    """
    Raised when an assembled count fails to be an integer.

    Rational class masses always clear their denominators in a correct
    assembly, so this signals a class-number or transcription bug.
    """

    pass


class NegativeCoefficientError(EnumeratorError):
    """Raised when a transformed enumerator has a negative coefficient."""

    pass


class ClassificationError(RmCubicError):
    """
    Raised when a cubic does not fit the singular/smooth taxonomy.

    This signals a bug in the classifier or an unexpected characteristic
    artefact, never a user error.
    """

    pass


class NotSmoothError(ClassificationError):
    """Raised when an operation requiring a smooth cubic gets a singular one."""

    pass


class ReducibleCubicError(ClassificationError):
    """Raised when an operation requiring an absolutely irreducible cubic gets a reducible one."""

    pass


class SerializationError(RmCubicError):
    """
    Raised when report serialization fails.

    This exception is raised when a ReportConverter is unable to render a
    payload to the target format (JSON or CSV).
    """

    pass
