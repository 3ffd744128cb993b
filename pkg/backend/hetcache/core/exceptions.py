"""
hetcache - Exceptions

Application exception hierarchy. Every error raised on purpose by the library
derives from ``AppException`` and carries a process exit code, so the command
line entry point maps failures onto exit statuses in one place.
"""
import logging
import sys
from typing import Any, Dict, List, Optional, TextIO

import orjson


logger = logging.getLogger(__name__)


class AppException(Exception):
    """Base class for library errors with a detail message and context."""

    exit_code: int = 1

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "detail": self.detail,
            "context": {k: str(v) if not isinstance(v, (int, float, list)) else v
                        for k, v in self.context.items()},
        }


class ConfigurationError(AppException):
    """System configuration or scenario file violates its invariants."""

    exit_code = 2

    def __init__(self, detail: str, violations: Optional[List[str]] = None, **context: Any):
        super().__init__(detail, violations=list(violations or []), **context)
        self.violations: List[str] = list(violations or [])


class DomainError(AppException, ValueError):
    """Argument outside the domain of an operation."""

    exit_code = 2


class CombinatoricsRangeError(AppException, OverflowError):
    """Generalised binomial coefficient does not fit in a double."""

    exit_code = 2


class EnumerationCapExceeded(AppException):
    """Requested enumeration is larger than the configured cap."""

    exit_code = 2

    def __init__(self, detail: str, cardinality: int, cap: int):
        super().__init__(detail, cardinality=cardinality, cap=cap)
        self.cardinality = cardinality
        self.cap = cap


class PlacementMismatchError(AppException):
    """Placement and demand (or split parameters) do not belong together."""


class DecodeError(AppException):
    """A user could not reconstruct its requested file."""

    def __init__(self, detail: str, user: int, subfile: str):
        super().__init__(detail, user=user, subfile=subfile)
        self.user = user
        self.subfile = subfile


class VerificationFailure(AppException):
    """A verification suite failed."""


class OutputError(AppException):
    """A report could not be written."""

    exit_code = 3


def handle_app_exception(exc: AppException, stream: Optional[TextIO] = None) -> int:
    """
    Report an application exception on stderr and return its exit code.

    Args:
        exc: The exception raised by a command
        stream: Destination for the JSON error record (defaults to stderr)

    Returns:
        Process exit code for the exception class
    """
    stream = stream or sys.stderr
    logger.debug(f"{type(exc).__name__}: {exc.detail}")
    stream.write(orjson.dumps(exc.to_dict(), option=orjson.OPT_INDENT_2).decode() + "\n")
    return exc.exit_code
