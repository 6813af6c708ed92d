"""Exceptions raised by supertropical."""
from __future__ import annotations

import typing as t


class SupertropicalError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SupertropicalError, ValueError):
    """The request is mathematically undefined (e.g. inverting zero)."""


class ParseError(SupertropicalError, ValueError):
    """Malformed input text.

    ``position`` is the 0-based offset of the offending character, or None
    when the underlying parser does not report one.
    """

    def __init__(self, reason: str, text: str, position: int | None = None) -> None:
        self.reason = reason
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{reason}{where} in {text!r}")


class ArityError(SupertropicalError, ValueError):
    """A point does not have one coordinate per polynomial variable."""


class TableError(SupertropicalError, ValueError):
    """A finite operation table is structurally invalid."""


class SizeBoundError(SupertropicalError):
    """A configured size bound would be exceeded; nothing was truncated."""


class PreconditionError(SupertropicalError):
    """An operation was called on data violating its precondition."""


class Cancelled(SupertropicalError):
    """A long-running enumeration observed a cancellation request."""


class Refutation(SupertropicalError):
    """A proved statement failed on a concrete instance.

    This always indicates a defect in the arithmetic, never bad input.
    """

    def __init__(self, message: str, record: t.Mapping[str, t.Any] | None = None) -> None:
        self.record = dict(record or {})
        super().__init__(message)
