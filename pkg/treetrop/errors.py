from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .models import Violation


class TreeTropError(Exception):
    """Base class for every error raised by treetrop."""


class InputError(TreeTropError, ValueError):
    """Malformed input or a violated precondition."""


class ParseError(InputError):
    def __init__(self, message: str, *, line: int, column: int, source: Optional[str] = None) -> None:
        location = f"{source}:" if source else ""
        super().__init__(f"{location}{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


class ConditionViolation(TreeTropError, ValueError):
    """A mathematical condition failed where the caller required it to hold."""

    def __init__(self, message: str, violation: "Violation") -> None:
        super().__init__(f"{message}: {violation.describe()}")
        self.violation = violation


class GenericityExhausted(TreeTropError, RuntimeError):
    """Every coefficient draw hit a vanishing leading coefficient."""

    def __init__(self, message: str, *, attempts: int) -> None:
        super().__init__(message)
        self.attempts = attempts
