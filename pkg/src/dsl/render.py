"""Query text for expression trees; the inverse of :func:`src.dsl.parser.parse`."""

from __future__ import annotations

from src.algebra.conditions import render_condition
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

_BINARY_NAMES = {Product: "product", Union: "union", Intersect: "intersect", Minus: "minus"}


def render(expr: AlgebraExpr) -> str:
    if isinstance(expr, BaseRel):
        return expr.name
    if isinstance(expr, Select):
        return f"select({render_condition(expr.cond)}, {render(expr.child)})"
    if isinstance(expr, Project):
        return f"project({', '.join(expr.attrs)}, {render(expr.child)})"
    if isinstance(expr, RenameAttr):
        return f"rename({expr.old} -> {expr.new}, {render(expr.child)})"
    if isinstance(expr, RenamePrefix):
        return f"prefix({expr.prefix}, {render(expr.child)})"
    if isinstance(expr, Join):
        cond = render_condition(expr.cond)
        return f"join({cond}, {render(expr.left)}, {render(expr.right)})"
    if isinstance(expr, DirectlyFollows):
        return f"df({expr.case}, {expr.time}, {render(expr.child)})"
    name = _BINARY_NAMES[type(expr)]
    return f"{name}({render(expr.left)}, {render(expr.right)})"
