"""Set-semantics relations and their core operations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

from src.relation.errors import SchemaMismatchError
from src.relation.schema import Schema
from src.relation.values import ABSENT, Value, domain_of

Row = tuple  # positional values in schema order


def _row_for(schema: Schema, values: Mapping[str, Value]) -> Row:
    """Convert a name→value mapping to a positional row, checking conformance."""
    missing = [n for n in schema.names if n not in values]
    extra = [n for n in values if n not in schema]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {', '.join(missing)}")
        if extra:
            parts.append(f"unexpected {', '.join(extra)}")
        raise SchemaMismatchError(f"tuple does not match schema {schema}: {'; '.join(parts)}")
    row = []
    for attribute in schema:
        value = values[attribute.name]
        if value is not ABSENT:
            try:
                domain = domain_of(value)
            except TypeError as e:
                raise SchemaMismatchError(str(e)) from e
            if domain is not attribute.domain:
                raise SchemaMismatchError(
                    f"attribute '{attribute.name}' expects {attribute.domain.value}, "
                    f"got {value!r}"
                )
        row.append(value)
    return tuple(row)


@dataclass(frozen=True, eq=False)
class Relation:
    """A schema plus a set of tuples.

    Tuples are stored positionally, in the order of ``schema.attributes``.
    Relations are immutable; every operation returns a new relation.
    """

    schema: Schema
    rows: frozenset

    @classmethod
    def of(cls, schema: Schema, tuples: Iterable[Mapping[str, Value]] = ()) -> Relation:
        """Build a relation from name→value mappings, validating each one."""
        return cls(schema, frozenset(_row_for(schema, t) for t in tuples))

    @classmethod
    def from_rows(cls, schema: Schema, rows: Iterable[Row]) -> Relation:
        """Build a relation from positional rows (trusted, not validated)."""
        return cls(schema, frozenset(rows))

    @classmethod
    def empty(cls, schema: Schema) -> Relation:
        return cls(schema, frozenset())

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[dict[str, Value]]:
        return self.tuples()

    def tuples(self) -> Iterator[dict[str, Value]]:
        names = self.schema.names
        for row in self.rows:
            yield dict(zip(names, row))

    def column(self, name: str) -> list[Value]:
        i = self.schema.index_of(name)
        return [row[i] for row in self.rows]

    def aligned_rows(self, schema: Schema) -> frozenset:
        """Rows reordered to follow ``schema``'s attribute order.

        Raises:
            SchemaMismatchError: If the schemas are not equal as sets.
        """
        if schema != self.schema:
            raise SchemaMismatchError(f"schema {self.schema} differs from {schema}")
        if schema.names == self.schema.names:
            return self.rows
        order = [self.schema.index_of(n) for n in schema.names]
        return frozenset(tuple(row[i] for i in order) for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"schema": self.schema.to_dict(), "size": len(self.rows)}


def insert_tuple(relation: Relation, values: Mapping[str, Value]) -> Relation:
    """Return a relation that also contains ``values``; a duplicate insert is a no-op.

    Raises:
        SchemaMismatchError: If the tuple has wrong or missing attributes.
    """
    row = _row_for(relation.schema, values)
    if row in relation.rows:
        return relation
    return Relation(relation.schema, relation.rows | {row})


def relation_equal(a: Relation, b: Relation) -> bool:
    """True iff the schemas are equal as sets and the tuple sets are equal."""
    if a.schema != b.schema:
        return False
    return a.rows == b.aligned_rows(a.schema)
