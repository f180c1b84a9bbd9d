"""Exception hierarchy shared by every dfq package."""

from __future__ import annotations


class DfqError(Exception):
    """Base class for all errors raised by dfq."""


class SchemaMismatchError(DfqError):
    """A tuple does not conform to the schema it is inserted into."""


class ValueTypeError(DfqError):
    """Two values of different domains were compared."""

    def __init__(self, left: object, right: object) -> None:
        self.left = left
        self.right = right
        super().__init__(
            f"cannot compare {type(left).__name__} value {left!r} "
            f"with {type(right).__name__} value {right!r}"
        )


class MissingRelationError(DfqError):
    """A base relation name does not resolve in the catalog."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"relation '{name}' is not in the catalog")


class MissingStatsError(DfqError):
    """The catalog lacks a statistic needed for cost estimation."""

    def __init__(self, relation: str, statistic: str) -> None:
        self.relation = relation
        self.statistic = statistic
        super().__init__(f"relation '{relation}' has no statistic '{statistic}'")


class MissingDeclarationError(DfqError):
    """A relation lacks a declaration (case or time attribute) an operation needs."""


class AbsentTimestampError(DfqError):
    """An event without a time value reached a directly-follows computation."""

    def __init__(self, attribute: str) -> None:
        self.attribute = attribute
        super().__init__(f"time attribute '{attribute}' has an absent value")


class CatalogLoadError(DfqError):
    """A CSV file or catalog sidecar could not be read."""


class CostParamsError(DfqError):
    """Cost parameters lie outside their valid ranges."""
