"""Static schema inference and checking for expression trees."""

from __future__ import annotations

from typing import Protocol

from src.algebra.conditions import (
    Attr,
    Condition,
    Const,
    attrs,
    comparisons,
    render_condition,
)
from src.algebra.errors import Path, SchemaError, SchemaErrorKind
from src.algebra.expr import (
    SET_OPERATIONS,
    AlgebraExpr,
    BaseRel,
    DirectlyFollows,
    Join,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
)
from src.relation.schema import DOWN, UP, Schema
from src.relation.values import Domain, domain_of


class SchemaSource(Protocol):
    """Anything that resolves base-relation names to schemas."""

    def schema_of(self, name: str) -> Schema: ...


def infer_schema(expr: AlgebraExpr, cat: SchemaSource) -> Schema:
    """Output schema of ``expr``.

    Raises:
        SchemaError: If the tree is ill-formed; ``location`` is the offending node.
        MissingRelationError: If a base relation does not resolve.
    """
    return _infer(expr, cat, ())


def _infer(expr: AlgebraExpr, cat: SchemaSource, path: Path) -> Schema:
    if isinstance(expr, BaseRel):
        return cat.schema_of(expr.name)

    if isinstance(expr, Select):
        schema = _infer(expr.child, cat, path + (0,))
        _check_condition(expr.cond, schema, path)
        return schema

    if isinstance(expr, Project):
        schema = _infer(expr.child, cat, path + (0,))
        seen: set[str] = set()
        for name in expr.attrs:
            if name in seen:
                raise SchemaError(
                    SchemaErrorKind.DUPLICATE_ATTRIBUTE, path, f"'{name}' projected twice"
                )
            seen.add(name)
            _require(name, schema, path)
        return schema.project(expr.attrs)

    if isinstance(expr, RenameAttr):
        schema = _infer(expr.child, cat, path + (0,))
        _require(expr.old, schema, path)
        if expr.new != expr.old and expr.new in schema:
            raise SchemaError(
                SchemaErrorKind.DUPLICATE_ATTRIBUTE, path, f"'{expr.new}' already exists"
            )
        return schema.rename(expr.old, expr.new)

    if isinstance(expr, RenamePrefix):
        return _infer(expr.child, cat, path + (0,)).prefixed(expr.prefix)

    if isinstance(expr, (Product, Join)):
        left = _infer(expr.left, cat, path + (0,))
        right = _infer(expr.right, cat, path + (1,))
        clash = sorted(set(left.names) & set(right.names))
        if clash:
            raise SchemaError(
                SchemaErrorKind.DUPLICATE_ATTRIBUTE,
                path,
                f"both operands have attribute(s) {', '.join(clash)}",
            )
        schema = left.concat(right)
        if isinstance(expr, Join):
            _check_condition(expr.cond, schema, path)
        return schema

    if isinstance(expr, SET_OPERATIONS):
        left = _infer(expr.left, cat, path + (0,))
        right = _infer(expr.right, cat, path + (1,))
        if left != right:
            raise SchemaError(
                SchemaErrorKind.SCHEMA_MISMATCH,
                path,
                f"operands have different schemas {left} and {right}",
            )
        return left

    if isinstance(expr, DirectlyFollows):
        schema = _infer(expr.child, cat, path + (0,))
        _require(expr.case, schema, path)
        _require(expr.time, schema, path)
        return schema.prefixed(DOWN).concat(schema.prefixed(UP))

    raise TypeError(f"not an expression node: {expr!r}")


def _require(name: str, schema: Schema, path: Path) -> None:
    if name not in schema:
        raise SchemaError(
            SchemaErrorKind.UNKNOWN_ATTRIBUTE, path, f"'{name}' is not in {schema}"
        )


def _check_condition(cond: Condition, schema: Schema, path: Path) -> None:
    for name in sorted(attrs(cond)):
        _require(name, schema, path)
    for comparison in comparisons(cond):
        left = _operand_domain(comparison.lhs, schema)
        right = _operand_domain(comparison.rhs, schema)
        if left is not None and right is not None and left is not right:
            raise SchemaError(
                SchemaErrorKind.TYPE_MISMATCH,
                path,
                f"cannot compare {left.value} with {right.value} in {render_condition(comparison)}",
            )


def _operand_domain(operand: Attr | Const, schema: Schema) -> Domain | None:
    if isinstance(operand, Attr):
        return schema.domain_of(operand.name)
    return domain_of(operand.value)
