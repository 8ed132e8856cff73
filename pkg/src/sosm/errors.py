"""Exception types shared across the package."""

from __future__ import annotations


class SosmError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(SosmError):
    """A model file could not be read.

    Carries the 1-based line number when the failing line is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class AnalysisError(SosmError):
    """An analysis was asked something it cannot answer (bad query or input)."""
