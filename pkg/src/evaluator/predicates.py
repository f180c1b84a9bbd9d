"""Compilation of conditions into row predicates."""

from __future__ import annotations

from typing import Callable

from src.algebra.conditions import And, Attr, Comparison, Condition, Not, Operand, Or
from src.evaluator.config import EvalMetrics
from src.relation.schema import Schema
from src.relation.values import compare

RowPredicate = Callable[[tuple], bool]


def compile_condition(
    cond: Condition, schema: Schema, metrics: EvalMetrics | None = None
) -> RowPredicate:
    """Turn a condition into a function over positional rows of ``schema``."""
    if isinstance(cond, Comparison):
        left = _getter(cond.lhs, schema)
        right = _getter(cond.rhs, schema)
        theta = cond.theta
        if metrics is None:
            return lambda row: compare(theta, left(row), right(row))

        def counted(row: tuple) -> bool:
            metrics.comparisons += 1
            return compare(theta, left(row), right(row))

        return counted
    if isinstance(cond, (And, Or)):
        first = compile_condition(cond.left, schema, metrics)
        second = compile_condition(cond.right, schema, metrics)
        if isinstance(cond, And):
            return lambda row: first(row) and second(row)
        return lambda row: first(row) or second(row)
    if isinstance(cond, Not):
        inner = compile_condition(cond.operand, schema, metrics)
        return lambda row: not inner(row)
    raise TypeError(f"not a condition: {cond!r}")


def _getter(operand: Operand, schema: Schema) -> Callable[[tuple], object]:
    if isinstance(operand, Attr):
        index = schema.index_of(operand.name)
        return lambda row: row[index]
    value = operand.value
    return lambda row: value
