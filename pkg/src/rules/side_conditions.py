"""Semantic side conditions of rewrite rules, checked against catalog declarations."""

from __future__ import annotations

from typing import Any, Callable

from src.algebra.conditions import Condition
from src.algebra.expr import (
    AlgebraExpr,
    BaseRel,
    Intersect,
    Join,
    Minus,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
)
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import AttrClass, Catalog, TotalityFact
from src.relation.schema import strip_prefix

SEQUENCE_CLASSES = (AttrClass.CASE, AttrClass.EVENT)


def trace_attribute(expr: AlgebraExpr, name: str, cat: Catalog) -> tuple[str, str] | None:
    """Base relation and attribute an output attribute of ``expr`` is copied from.

    Selections, projections, renames, the sides of products and joins and the
    left operand of minus and intersect pass attributes through unchanged.
    Returns None when the attribute is not a plain copy of a base attribute,
    e.g. below a union or a directly-follows node.
    """
    while True:
        if isinstance(expr, BaseRel):
            return (expr.name, name) if name in cat.schema_of(expr.name) else None
        if isinstance(expr, (Select, Project)):
            if isinstance(expr, Project) and name not in expr.attrs:
                return None
            expr = expr.child
        elif isinstance(expr, RenameAttr):
            if name == expr.old and expr.old != expr.new:
                return None
            name = expr.old if name == expr.new else name
            expr = expr.child
        elif isinstance(expr, RenamePrefix):
            stripped = strip_prefix(expr.prefix, name)
            if stripped is None:
                return None
            name, expr = stripped, expr.child
        elif isinstance(expr, (Product, Join)):
            expr = expr.left if name in infer_schema(expr.left, cat) else expr.right
        elif isinstance(expr, (Minus, Intersect)):
            expr = expr.left
        else:
            return None


def check_attribute_class(
    log: AlgebraExpr, attr: str, case: str, time: str, cat: Catalog
) -> str | None:
    """Validate that ``attr`` is a case or event attribute of the log being ordered.

    Args:
        log: Operand of the directly-follows node.
        attr: Attribute of the selection condition.
        case: Case attribute of the directly-follows node.
        time: Time attribute of the directly-follows node.
        cat: Catalog holding the class declarations.

    Returns:
        The missing fact if the condition fails, None if it holds.
    """
    traced = {n: trace_attribute(log, n, cat) for n in (attr, case, time)}
    bases = {t[0] for t in traced.values() if t is not None}
    if None in traced.values() or len(bases) != 1:
        return f"'{attr}', '{case}' and '{time}' are attributes of one base relation"
    base = bases.pop()
    meta = cat.meta_for(base)
    if meta.case_attr != traced[case][1]:
        return f"'{traced[case][1]}' is the declared case attribute of {base}"
    if meta.time_attr != traced[time][1]:
        return f"'{traced[time][1]}' is the declared time attribute of {base}"
    if meta.class_of(traced[attr][1]) not in SEQUENCE_CLASSES:
        return f"'{traced[attr][1]}' is a case or event attribute of {base}"
    return None


def check_join_totality(
    left: AlgebraExpr, right: AlgebraExpr, cond: Condition, cat: Catalog
) -> str | None:
    """Validate that a totality fact covers ``join(cond, left, right)``.

    Returns:
        The missing fact if none is declared, None if one is.
    """
    if cat.has_totality(left, right, cond):
        return None
    return str(TotalityFact.of(left, right, cond))


# Registry of semantic side conditions, by the names rules declare
SIDE_CONDITIONS: dict[str, Callable[..., str | None]] = {
    "attribute_class": check_attribute_class,
    "join_totality": check_join_totality,
}


def get_side_condition(name: str) -> Any | None:
    """Side-condition check by name, or None if no check has that name."""
    return SIDE_CONDITIONS.get(name)
