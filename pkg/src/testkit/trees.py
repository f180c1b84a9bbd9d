"""Random well-formed expression trees and conditions."""

from __future__ import annotations

import random
from decimal import Decimal
from typing import Mapping, Sequence

from src.algebra.conditions import And, Attr, Comparison, Condition, Const, Not, Or
from src.algebra.expr import (
    AlgebraExpr,
    BaseRel,
    DirectlyFollows,
    Intersect,
    Join,
    Minus,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
    Union,
)
from src.relation.schema import DOWN, UP, Schema
from src.relation.values import Domain, Theta, Timestamp, Value

CONSTANTS: dict[Domain, tuple[Value, ...]] = {
    Domain.INTEGER: (0, 1, 2, 3, -1),
    Domain.DECIMAL: (Decimal("0.5"), Decimal("2.25")),
    Domain.TIMESTAMP: (Timestamp(0), Timestamp(8 * 3_600_000), Timestamp(1_600_000_000_123)),
    Domain.TEXT: ("x", "y", "it's"),
}

DF_ATTRIBUTES = (("case", "time"),)


def random_comparison(
    rng: random.Random, schema: Schema, names: Sequence[str] | None = None
) -> Comparison:
    """Comparison of an attribute with a constant or with another attribute of its domain."""
    names = list(names or schema.names)
    name = rng.choice(names)
    domain = schema.domain_of(name)
    theta = rng.choice(list(Theta))
    peers = [n for n in names if n != name and schema.domain_of(n) is domain]
    if peers and rng.random() < 0.3:
        return Comparison(Attr(name), theta, Attr(rng.choice(peers)))
    constant = Const(rng.choice(CONSTANTS[domain]))
    if rng.random() < 0.2:
        return Comparison(constant, theta, Attr(name))
    return Comparison(Attr(name), theta, constant)


def random_condition(
    rng: random.Random, schema: Schema, depth: int = 2, names: Sequence[str] | None = None
) -> Condition:
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        return random_comparison(rng, schema, names)
    if roll < 0.75:
        return And(
            random_condition(rng, schema, depth - 1, names),
            random_condition(rng, schema, depth - 1, names),
        )
    if roll < 0.9:
        return Or(
            random_condition(rng, schema, depth - 1, names),
            random_condition(rng, schema, depth - 1, names),
        )
    return Not(random_condition(rng, schema, depth - 1, names))


class TreeGenerator:
    """Builds random trees over named base relations, tracking each node's schema.

    Directly-follows nodes are only placed over operands holding one of the
    ``df_attributes`` (case, time) pairs.
    """

    def __init__(
        self,
        rng: random.Random,
        schemas: Mapping[str, Schema],
        df_attributes: Sequence[tuple[str, str]] = DF_ATTRIBUTES,
    ) -> None:
        self.rng = rng
        self.schemas = dict(schemas)
        self.df_attributes = list(df_attributes)
        self._fresh = 0

    def tree(self, depth: int = 3) -> AlgebraExpr:
        expr, _ = self._tree(depth)
        return expr

    def _fresh_name(self, base: str) -> str:
        self._fresh += 1
        return f"{base.replace('.', '_')}_{self._fresh}"

    def _tree(self, depth: int) -> tuple[AlgebraExpr, Schema]:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.15:
            name = rng.choice(sorted(self.schemas))
            return BaseRel(name), self.schemas[name]

        child, schema = self._tree(depth - 1)
        plain = not any("." in n for n in schema.names)
        choices = ["select", "project", "rename", "binary", "set"]
        if plain:
            choices += ["prefix", "df"]
        kind = rng.choice(choices)

        if kind == "select":
            return Select(random_condition(rng, schema), child), schema
        if kind == "project":
            names = [n for n in schema.names if rng.random() < 0.6] or [schema.names[0]]
            return Project(tuple(names), child), schema.project(names)
        if kind == "rename":
            old = rng.choice(schema.names)
            new = self._fresh_name(old)
            return RenameAttr(old, new, child), schema.rename(old, new)
        if kind == "prefix":
            prefix = rng.choice((DOWN, UP))
            return RenamePrefix(prefix, child), schema.prefixed(prefix)
        if kind == "df":
            for case, time in self.df_attributes:
                if case in schema and time in schema:
                    df_schema = schema.prefixed(DOWN).concat(schema.prefixed(UP))
                    return DirectlyFollows(case, time, child), df_schema
            return Select(random_condition(rng, schema), child), schema
        if kind == "set":
            other = Select(random_condition(rng, schema), child)
            node = rng.choice((Union, Intersect, Minus))
            left, right = (child, other) if rng.random() < 0.5 else (other, child)
            return node(left, right), schema
        return self._binary(depth, child, schema)

    def _binary(self, depth: int, left: AlgebraExpr, schema: Schema) -> tuple[AlgebraExpr, Schema]:
        rng = self.rng
        right, right_schema = self._tree(depth - 1)
        if set(schema.names) & set(right_schema.names):
            if any("." in n for n in right_schema.names):
                return Select(random_condition(rng, schema), left), schema
            prefix = rng.choice((DOWN, UP))
            right, right_schema = RenamePrefix(prefix, right), right_schema.prefixed(prefix)
            if set(schema.names) & set(right_schema.names):
                return Select(random_condition(rng, schema), left), schema
        joined = schema.concat(right_schema)
        if rng.random() < 0.25:
            return Product(left, right), joined
        return Join(random_condition(rng, joined, depth=1), left, right), joined
