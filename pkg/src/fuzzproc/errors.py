"""Exception types shared across the package."""

from __future__ import annotations


class FuzzProcError(Exception):
    """Base class for every error raised by this package."""


class UnknownLabel(FuzzProcError):
    """A label was used that is not part of the universe."""


class DuplicateLabel(FuzzProcError):
    """The same label appeared twice where labels must be distinct."""


class GradeOutOfRange(FuzzProcError):
    """A membership grade fell outside [0, 1]."""


class BlockingViolation(FuzzProcError):
    """A blocking execution (both grades zero) where none is allowed."""


class UniverseMismatch(FuzzProcError):
    """Two processes over different universes were combined or compared."""


class BudgetExceeded(FuzzProcError):
    """An exhaustive check would exceed the configured work budget."""


class ScriptError(FuzzProcError):
    """Base for script-level errors; carries a 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message)
        self.line = line
        self.column = column


class ParseError(ScriptError):
    def __init__(
        self,
        message: str,
        line: int,
        column: int,
        token: str | None = None,
        expected: frozenset[str] = frozenset(),
    ):
        super().__init__(message, line, column)
        self.token = token
        self.expected = frozenset(expected)


class UnknownIdentifier(ScriptError):
    """An expression referred to a name that was never defined."""


class DuplicateDefinition(ScriptError):
    """A name (or the universe) was defined more than once."""


class MissingUniverse(ScriptError):
    """A script did not start with a universe declaration."""
