"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AtmoQKDError(Exception):
    """Base class for all package errors."""


class DomainError(AtmoQKDError, ValueError):
    """An argument lies outside the domain of a function."""


class ContractError(AtmoQKDError, ValueError):
    """Inputs are individually valid but mutually inconsistent (e.g. grid mismatch)."""


class ValidationError(AtmoQKDError, ValueError):
    """A constructed object violates one of its invariants."""


class ParseError(AtmoQKDError, ValueError):
    """Malformed input text.

    ``line`` is the 1-based line number in the source, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(ParseError):
    """A fixed-width record has the wrong length."""

    def __init__(self, message: str, length: int, line: int | None = None):
        self.length = length
        super().__init__(message, line)


class FieldError(ParseError):
    """A fixed-width field could not be decoded.

    ``columns`` is the 1-based inclusive column span of the field.
    """

    def __init__(self, message: str, columns: tuple[int, int], line: int | None = None):
        self.columns = columns
        super().__init__(message, line)
