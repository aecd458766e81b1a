"""Exception hierarchy shared across the package.

``DataError`` covers malformed or contradictory input data (CLI exit
code 2); ``StorageError`` covers I/O failures (exit code 3).  Usage
errors are handled by the CLI layer itself (exit code 1).
"""

from __future__ import annotations

__all__ = [
    "CompatKGError",
    "DataError",
    "StorageError",
    "DictionaryError",
    "GraphFormatError",
    "UnrecognizedQueryError",
]


class CompatKGError(Exception):
    """Base class for errors raised by this package."""


class DataError(CompatKGError):
    """Input data is malformed, inconsistent, or unusable."""


class StorageError(CompatKGError):
    """A file could not be read or written."""


class DictionaryError(DataError):
    """The component dictionary file is invalid."""


class GraphFormatError(DataError):
    """A graph file is truncated, corrupt, or has an unknown format version."""


class UnrecognizedQueryError(DataError):
    """A search query mentions no known component."""

    def __init__(self, text: str, known_components: list[str]):
        self.text = text
        self.known_components = known_components
        listing = ", ".join(known_components)
        super().__init__(
            f"no known component recognized in {text!r}; known components: {listing}"
        )
