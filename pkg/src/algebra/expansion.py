"""Rewriting derived operators into the core algebra."""

from __future__ import annotations

from src.algebra.conditions import And, Attr, Comparison, conjoin
from src.algebra.errors import ExpansionError
from src.algebra.expr import (
    AlgebraExpr,
    DirectlyFollows,
    Join,
    Minus,
    Product,
    Project,
    RenamePrefix,
    Select,
    children,
    with_children,
)
from src.algebra.schema_inference import SchemaSource, infer_schema
from src.relation.schema import DOWN, UP, prefix_name
from src.relation.values import Theta


def following_pairs(case: str, time: str, log: AlgebraExpr) -> Join:
    """Pairs of events of one case where the first ends strictly before the second."""
    down_t, up_t = prefix_name(DOWN, time), prefix_name(UP, time)
    down_c, up_c = prefix_name(DOWN, case), prefix_name(UP, case)
    cond = And(
        Comparison(Attr(down_t), Theta.LT, Attr(up_t)),
        Comparison(Attr(down_c), Theta.EQ, Attr(up_c)),
    )
    return Join(cond, RenamePrefix(DOWN, log), RenamePrefix(UP, log))


def expand_df(expr: AlgebraExpr, cat: SchemaSource) -> AlgebraExpr:
    """Composite form of a DirectlyFollows node.

    The result is ``pairs - project(As, join(d.t < t & t < u.t & d.c = c, pairs, L))``
    where ``pairs`` is :func:`following_pairs` and ``As`` holds every ``d.``
    and ``u.`` attribute. The ``pairs`` subtree is one shared object used on
    both sides of the minus. DirectlyFollows nodes inside the operand are
    expanded as well, so the result contains none.

    Args:
        expr: The DirectlyFollows node.
        cat: Where base-relation schemas are looked up. The projection in the
            result lists the operand's attributes by name, so the tree alone
            is not enough.

    Raises:
        ExpansionError: If ``expr`` is not a DirectlyFollows node.
        MissingRelationError: If the operand names a relation ``cat`` lacks.
    """
    if not isinstance(expr, DirectlyFollows):
        raise ExpansionError(f"expected a DirectlyFollows node, got {type(expr).__name__}")
    log = expand_all_df(expr.child, cat)
    case, time = expr.case, expr.time
    schema = infer_schema(log, cat)
    pairs = following_pairs(case, time, log)
    between = conjoin(
        [
            Comparison(Attr(prefix_name(DOWN, time)), Theta.LT, Attr(time)),
            Comparison(Attr(time), Theta.LT, Attr(prefix_name(UP, time))),
            Comparison(Attr(prefix_name(DOWN, case)), Theta.EQ, Attr(case)),
        ]
    )
    kept = schema.prefixed(DOWN).names + schema.prefixed(UP).names
    return Minus(pairs, Project(kept, Join(between, pairs, log)))


def expand_all_df(expr: AlgebraExpr, cat: SchemaSource) -> AlgebraExpr:
    """Replace every DirectlyFollows node of a tree by its composite form."""
    if isinstance(expr, DirectlyFollows):
        return expand_df(expr, cat)
    kids = children(expr)
    if not kids:
        return expr
    return with_children(expr, tuple(expand_all_df(k, cat) for k in kids))


def desugar_join(expr: AlgebraExpr) -> AlgebraExpr:
    """Replace every ``join(φ, A, B)`` by ``select(φ, product(A, B))``."""
    kids = tuple(desugar_join(k) for k in children(expr))
    if isinstance(expr, Join):
        return Select(expr.cond, Product(kids[0], kids[1]))
    return with_children(expr, kids) if kids else expr
