"""Catalog data structures: relations plus their semantic metadata."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any

from src.algebra.conditions import Condition, render_condition
from src.algebra.expr import AlgebraExpr
from src.dsl.parser import parse, parse_condition
from src.dsl.render import render
from src.relation.errors import MissingRelationError
from src.relation.relation import Relation
from src.relation.schema import Schema
from src.relation.values import Domain


class AttrClass(Enum):
    """How an attribute behaves across the events of one case."""

    CASE = "case"  # constant within a case once it has a value
    EVENT = "event"  # a value on at most one event per case
    OTHER = "other"


@dataclass(frozen=True)
class TotalityFact:
    """Declaration that ``join(condition, left, right)`` keeps every tuple of ``left``.

    All three parts are stored as canonical query text so that facts compare
    by structure rather than spelling.
    """

    left: str
    right: str
    condition: str

    @classmethod
    def of(cls, left: AlgebraExpr, right: AlgebraExpr, condition: Condition) -> TotalityFact:
        return cls(render(left), render(right), render_condition(condition))

    @classmethod
    def parse(cls, left: str, right: str, condition: str) -> TotalityFact:
        """Build a fact from user-written text, normalizing each part."""
        return cls.of(parse(left), parse(right), parse_condition(condition))

    def to_dict(self) -> dict[str, str]:
        return {"left": self.left, "right": self.right, "condition": self.condition}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TotalityFact:
        return cls.parse(data["left"], data["right"], data["condition"])

    def __str__(self) -> str:
        return f"join({self.condition}, {self.left}, {self.right}) keeps every tuple of {self.left}"


@dataclass
class RelationStats:
    """Statistics of one relation.

    ``n`` is the tuple count and ``v`` the number of distinct case values
    (None when no case attribute is declared). ``distinct`` holds per-attribute
    distinct counts and ``selectivity`` maps canonical condition text to the
    fraction of tuples satisfying it.
    """

    n: int = 0
    v: int | None = None
    distinct: dict[str, int] = field(default_factory=dict)
    selectivity: dict[str, Fraction] = field(default_factory=dict)
    duplicates_dropped: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "v": self.v,
            "distinct": dict(self.distinct),
            "selectivity": {k: str(q) for k, q in self.selectivity.items()},
            "duplicates_dropped": self.duplicates_dropped,
        }


@dataclass
class RelationMeta:
    """Semantic facts about one relation."""

    attr_classes: dict[str, AttrClass] = field(default_factory=dict)
    case_attr: str | None = None
    time_attr: str | None = None
    stats: RelationStats | None = None
    totality_facts: set[TotalityFact] = field(default_factory=set)
    indexes: set[str] = field(default_factory=set)
    types: dict[str, Domain] = field(default_factory=dict)

    def class_of(self, attr: str) -> AttrClass:
        return self.attr_classes.get(attr, AttrClass.OTHER)

    def to_dict(self) -> dict[str, Any]:
        return {
            "case_attr": self.case_attr,
            "time_attr": self.time_attr,
            "classes": {a: c.value for a, c in sorted(self.attr_classes.items())},
            "types": {a: d.value for a, d in sorted(self.types.items())},
            "indexes": sorted(self.indexes),
            "totality": [f.to_dict() for f in sorted(self.totality_facts, key=str)],
            "stats": self.stats.to_dict() if self.stats else None,
        }


@dataclass(frozen=True)
class Catalog:
    """Named relations plus per-relation metadata."""

    relations: dict[str, Relation] = field(default_factory=dict)
    meta: dict[str, RelationMeta] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = set(self.meta) - set(self.relations)
        if unknown:
            raise ValueError(f"metadata for unknown relation(s): {', '.join(sorted(unknown))}")

    def relation(self, name: str) -> Relation:
        """Relation by name.

        Raises:
            MissingRelationError: If the catalog has no such relation.
        """
        try:
            return self.relations[name]
        except KeyError:
            raise MissingRelationError(name) from None

    def schema_of(self, name: str) -> Schema:
        return self.relation(name).schema

    def meta_for(self, name: str) -> RelationMeta:
        self.relation(name)
        return self.meta.get(name) or RelationMeta()

    def with_relation(
        self, name: str, relation: Relation, meta: RelationMeta | None = None
    ) -> Catalog:
        relations = {**self.relations, name: relation}
        metas = dict(self.meta)
        if meta is not None:
            metas[name] = meta
        else:
            metas.pop(name, None)
        return replace(self, relations=relations, meta=metas)

    def has_totality(self, left: AlgebraExpr, right: AlgebraExpr, cond: Condition) -> bool:
        """True if some relation declares that the join keeps every tuple of ``left``."""
        wanted = TotalityFact.of(left, right, cond)
        return any(wanted in m.totality_facts for m in self.meta.values())

    def selectivity(self, cond: Condition, relations: set[str]) -> Fraction | None:
        """Recorded selectivity of ``cond`` on any of the named relations."""
        key = render_condition(cond)
        for name in sorted(relations):
            meta = self.meta.get(name)
            if meta and meta.stats and key in meta.stats.selectivity:
                return meta.stats.selectivity[key]
        return None
