"""Attributes and schemas."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from src.relation.errors import SchemaMismatchError
from src.relation.values import Domain

DOWN = "d"
UP = "u"
RESERVED_PREFIXES = (f"{DOWN}.", f"{UP}.")


def prefix_name(prefix: str, name: str) -> str:
    return f"{prefix}.{name}"


def strip_prefix(prefix: str, name: str) -> str | None:
    """Name without ``prefix.``, or None when it does not carry the prefix."""
    head = f"{prefix}."
    return name[len(head):] if name.startswith(head) else None


@dataclass(frozen=True)
class Attribute:
    """A named attribute with its domain."""

    name: str
    domain: Domain

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "domain": self.domain.value}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Attribute:
        return cls(name=data["name"], domain=Domain(data.get("domain", "text")))


@dataclass(frozen=True, eq=False)
class Schema:
    """An ordered list of uniquely named attributes.

    Order is kept for display only: two schemas are equal when they hold the
    same set of (name, domain) pairs.
    """

    attributes: tuple[Attribute, ...]
    _positions: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        attributes = tuple(self.attributes)
        object.__setattr__(self, "attributes", attributes)
        positions: dict[str, int] = {}
        for i, attribute in enumerate(attributes):
            if not attribute.name:
                raise SchemaMismatchError("attribute names must be non-empty")
            if attribute.name in positions:
                raise SchemaMismatchError(f"duplicate attribute name '{attribute.name}'")
            positions[attribute.name] = i
        object.__setattr__(self, "_positions", positions)

    @classmethod
    def of(cls, *pairs: tuple[str, Domain]) -> Schema:
        """Build a schema from (name, domain) pairs."""
        return cls(tuple(Attribute(name, domain) for name, domain in pairs))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def __len__(self) -> int:
        return len(self.attributes)

    def __iter__(self) -> Iterator[Attribute]:
        return iter(self.attributes)

    def __contains__(self, name: object) -> bool:
        return name in self._positions

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schema):
            return NotImplemented
        return frozenset(self.attributes) == frozenset(other.attributes)

    def __hash__(self) -> int:
        return hash(frozenset(self.attributes))

    def index_of(self, name: str) -> int:
        """Position of an attribute.

        Raises:
            KeyError: If the schema has no attribute with this name.
        """
        return self._positions[name]

    def domain_of(self, name: str) -> Domain:
        return self.attributes[self._positions[name]].domain

    def prefixed(self, prefix: str) -> Schema:
        return Schema(tuple(Attribute(prefix_name(prefix, a.name), a.domain) for a in self))

    def project(self, names: Iterable[str]) -> Schema:
        return Schema(tuple(self.attributes[self._positions[n]] for n in names))

    def rename(self, old: str, new: str) -> Schema:
        return Schema(
            tuple(Attribute(new, a.domain) if a.name == old else a for a in self.attributes)
        )

    def concat(self, other: Schema) -> Schema:
        return Schema(self.attributes + other.attributes)

    def to_dict(self) -> list[dict[str, Any]]:
        return [a.to_dict() for a in self.attributes]

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a.name}: {a.domain.value}" for a in self) + "}"
