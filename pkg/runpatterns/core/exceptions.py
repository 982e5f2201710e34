"""Custom exception classes.

Every exception carries the process exit code the cli reports for it.
"""
from typing import Any, Dict


class BaseAppException(Exception):
    """Base exception for application errors."""

    def __init__(self, message: str, exit_code: int = 1, details: Dict[str, Any] | None = None):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(BaseAppException):
    """Invalid pattern spec, malformed input or invalid flags."""

    def __init__(self, message: str = "Validation error", details: Dict[str, Any] | None = None):
        super().__init__(message, exit_code=2, details=details)


class BudgetExceededError(ValidationError):
    """Requested size is beyond an enumeration budget."""

    def __init__(
        self, message: str = "Enumeration budget exceeded", details: Dict[str, Any] | None = None
    ):
        super().__init__(message, details=details)


class PreconditionError(BaseAppException):
    """A backend rejected its inputs."""

    def __init__(self, message: str = "Precondition failed", details: Dict[str, Any] | None = None):
        super().__init__(message, exit_code=3, details=details)


class SolveCoefficientError(PreconditionError):
    """The isolated coefficient of a moment equation vanished."""

    def __init__(
        self, message: str = "Solve coefficient vanished", details: Dict[str, Any] | None = None
    ):
        super().__init__(message, details=details)


class InvariantViolationError(BaseAppException):
    """A numerical invariant failed."""

    def __init__(self, message: str = "Invariant violated", details: Dict[str, Any] | None = None):
        super().__init__(message, exit_code=1, details=details)


class CheckFailedError(BaseAppException):
    """Cross-check tolerance violation."""

    def __init__(self, message: str = "Cross-check failed", details: Dict[str, Any] | None = None):
        super().__init__(message, exit_code=1, details=details)
