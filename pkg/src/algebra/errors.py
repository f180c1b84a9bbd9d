"""Errors raised while checking or transforming expression trees."""

from __future__ import annotations

from enum import Enum

from src.relation.errors import DfqError

Path = tuple  # child indices from the root


class SchemaErrorKind(Enum):
    UNKNOWN_ATTRIBUTE = "UnknownAttribute"
    DUPLICATE_ATTRIBUTE = "DuplicateAttribute"
    SCHEMA_MISMATCH = "SchemaMismatch"
    TYPE_MISMATCH = "TypeMismatch"


class SchemaError(DfqError):
    """An ill-formed tree, located at exactly one node."""

    def __init__(self, kind: SchemaErrorKind, location: Path, message: str) -> None:
        self.kind = kind
        self.location = tuple(location)
        self.message = message
        super().__init__(str(self))

    def __str__(self) -> str:
        return f"{self.kind.value} at {format_path(self.location)}: {self.message}"


class ExpansionError(DfqError):
    """A node cannot be expanded the way the caller asked."""


def format_path(path: Path) -> str:
    """Display form of a node path: ``/`` for the root, ``/0/1`` below it."""
    return "/" + "/".join(str(i) for i in path)
