"""Rewrites that move selections, projections and joins across directly-follows.

``df(c, t, L)`` pairs every event of ``L`` with the event that directly
follows it in its case, so each attribute ``a`` of ``L`` appears twice in
the result: ``d.a`` for the earlier event and ``u.a`` for the later one.
"""

from __future__ import annotations

from src.algebra.conditions import (
    Attr,
    Comparison,
    Condition,
    Const,
    conjoin,
    conjuncts,
    prefix_condition,
    same_comparison,
    unprefix_condition,
)
from src.algebra.expr import (
    AlgebraExpr,
    DirectlyFollows,
    Join,
    Project,
    RenamePrefix,
    Select,
)
from src.relation.schema import DOWN, UP, prefix_name, strip_prefix
from src.rules.context import RewriteContext


def _directly_follows(node: AlgebraExpr, ctx: RewriteContext) -> DirectlyFollows:
    if not isinstance(node, DirectlyFollows):
        raise ctx.mismatch("expected a directly-follows node")
    return node


def _selection_chain(node: AlgebraExpr, ctx: RewriteContext) -> tuple[list[Condition], AlgebraExpr]:
    """Conjuncts of a stack of selections and the node below the stack."""
    if not isinstance(node, Select):
        raise ctx.mismatch("expected a selection")
    parts: list[Condition] = []
    while isinstance(node, Select):
        parts.extend(conjuncts(node.cond))
        node = node.child
    return parts, node


def _with_rest(rest: list[Condition], expr: AlgebraExpr) -> AlgebraExpr:
    return Select(conjoin(rest), expr) if rest else expr


def _attribute_constant(cond: Condition) -> Comparison | None:
    """``cond`` as ``attribute theta constant``, mirroring if needed."""
    if not isinstance(cond, Comparison):
        return None
    if isinstance(cond.lhs, Attr) and isinstance(cond.rhs, Const):
        return cond
    if isinstance(cond.lhs, Const) and isinstance(cond.rhs, Attr):
        return cond.mirrored()
    return None


def _on_side(prefix: str, cond: Comparison) -> Comparison:
    return prefix_condition(cond, prefix)


# P17: df(c, t, select(a theta x, L)) = select(d.a theta x & u.a theta x, df(c, t, L))
# if a is a case or event attribute


def push_df_below_constant_selection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    df = _directly_follows(node, ctx)
    select = df.child
    if not isinstance(select, Select):
        raise ctx.mismatch("directly-follows operand is not a selection")
    cond = _attribute_constant(select.cond)
    if cond is None:
        raise ctx.mismatch("selection is not a comparison of an attribute with a constant")
    ctx.require("attribute_class", select.child, cond.lhs.name, df.case, df.time)
    both = conjoin([_on_side(DOWN, cond), _on_side(UP, cond)])
    return Select(both, DirectlyFollows(df.case, df.time, select.child))


def push_constant_selection_into_df(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    parts, below = _selection_chain(node, ctx)
    df = _directly_follows(below, ctx)
    for i, part in enumerate(parts):
        down = _attribute_constant(part)
        if down is None:
            continue
        cond = unprefix_condition(down, DOWN)
        if cond is None:
            continue
        up = _on_side(UP, cond)
        for j, other in enumerate(parts):
            if j != i and isinstance(other, Comparison) and same_comparison(other, up):
                ctx.require("attribute_class", df.child, cond.lhs.name, df.case, df.time)
                rest = [p for k, p in enumerate(parts) if k not in (i, j)]
                inner = DirectlyFollows(df.case, df.time, Select(cond, df.child))
                return _with_rest(rest, inner)
    raise ctx.mismatch("no pair of matching d. and u. constant comparisons")


# P18: df(c, t, select(a theta b, L))
#      = select(d.a theta d.b & d.a theta u.b & u.a theta d.b & u.a theta u.b, df(c, t, L))
# if a and b are case or event attributes


def _four_sides(cond: Comparison) -> list[Comparison]:
    a, b = cond.lhs.name, cond.rhs.name
    return [
        Comparison(Attr(prefix_name(x, a)), cond.theta, Attr(prefix_name(y, b)))
        for x, y in ((DOWN, DOWN), (DOWN, UP), (UP, DOWN), (UP, UP))
    ]


def push_df_below_attribute_selection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    df = _directly_follows(node, ctx)
    select = df.child
    if not isinstance(select, Select):
        raise ctx.mismatch("directly-follows operand is not a selection")
    cond = select.cond
    if not (
        isinstance(cond, Comparison) and isinstance(cond.lhs, Attr) and isinstance(cond.rhs, Attr)
    ):
        raise ctx.mismatch("selection is not a comparison of two attributes")
    ctx.require("attribute_class", select.child, cond.lhs.name, df.case, df.time)
    ctx.require("attribute_class", select.child, cond.rhs.name, df.case, df.time)
    return Select(conjoin(_four_sides(cond)), DirectlyFollows(df.case, df.time, select.child))


def _unprefixed_pair(cond: Condition) -> Comparison | None:
    """``a theta b`` for a conjunct ``d.a theta d.b``."""
    if not (
        isinstance(cond, Comparison) and isinstance(cond.lhs, Attr) and isinstance(cond.rhs, Attr)
    ):
        return None
    a, b = strip_prefix(DOWN, cond.lhs.name), strip_prefix(DOWN, cond.rhs.name)
    if a is None or b is None:
        return None
    return Comparison(Attr(a), cond.theta, Attr(b))


def push_attribute_selection_into_df(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    parts, below = _selection_chain(node, ctx)
    df = _directly_follows(below, ctx)
    for part in parts:
        cond = _unprefixed_pair(part)
        if cond is None:
            continue
        matched: list[int] = []
        for wanted in _four_sides(cond):
            hit = next(
                (
                    k
                    for k, p in enumerate(parts)
                    if k not in matched and isinstance(p, Comparison) and same_comparison(p, wanted)
                ),
                None,
            )
            if hit is None:
                break
            matched.append(hit)
        else:
            ctx.require("attribute_class", df.child, cond.lhs.name, df.case, df.time)
            ctx.require("attribute_class", df.child, cond.rhs.name, df.case, df.time)
            rest = [p for k, p in enumerate(parts) if k not in matched]
            return _with_rest(rest, DirectlyFollows(df.case, df.time, Select(cond, df.child)))
    raise ctx.mismatch("no four d./u. comparisons of one attribute pair")


# P19: df(c, t, project(A, L)) = project(d.A + u.A, df(c, t, L)) if c and t are in A


def pull_projection_above_df(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    df = _directly_follows(node, ctx)
    project = df.child
    if not isinstance(project, Project):
        raise ctx.mismatch("directly-follows operand is not a projection")
    names = tuple(prefix_name(DOWN, a) for a in project.attrs) + tuple(
        prefix_name(UP, a) for a in project.attrs
    )
    return Project(names, DirectlyFollows(df.case, df.time, project.child))


def push_projection_into_df(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    if not isinstance(node, Project):
        raise ctx.mismatch("expected a projection")
    df = _directly_follows(node.child, ctx)
    down = [strip_prefix(DOWN, a) for a in node.attrs if a.startswith(f"{DOWN}.")]
    up = [strip_prefix(UP, a) for a in node.attrs if a.startswith(f"{UP}.")]
    if len(down) + len(up) != len(node.attrs) or set(down) != set(up):
        raise ctx.mismatch("projection does not keep the same attributes on both sides")
    if df.case not in down or df.time not in down:
        raise ctx.mismatch("projection drops the case or time attribute")
    return DirectlyFollows(df.case, df.time, Project(tuple(down), df.child))


# P20: df(c, t, join(p, R, S))
#      = join(u.p, join(d.p, df(c, t, R), prefix(d, S)), prefix(u, S))
# if c and t are attributes of R and the join keeps every tuple of R


def push_df_into_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    df = _directly_follows(node, ctx)
    join = df.child
    if not isinstance(join, Join):
        raise ctx.mismatch("directly-follows operand is not a join")
    for log, other in ((join.left, join.right), (join.right, join.left)):
        schema = ctx.schema(log)
        if df.case in schema and df.time in schema:
            ctx.require("join_totality", log, other, join.cond)
            down = Join(
                prefix_condition(join.cond, DOWN),
                DirectlyFollows(df.case, df.time, log),
                RenamePrefix(DOWN, other),
            )
            return Join(prefix_condition(join.cond, UP), down, RenamePrefix(UP, other))
    raise ctx.mismatch("case and time attributes do not come from one join operand")


def pull_df_above_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = node
    if not isinstance(outer, Join) or not isinstance(outer.left, Join):
        raise ctx.mismatch("expected a join over a join")
    inner = outer.left
    df = _directly_follows(inner.left, ctx)
    down, up = inner.right, outer.right
    if not (
        isinstance(down, RenamePrefix)
        and isinstance(up, RenamePrefix)
        and down.prefix == DOWN
        and up.prefix == UP
        and down.child == up.child
    ):
        raise ctx.mismatch("expected d.- and u.-prefixed copies of one relation")
    cond = unprefix_condition(inner.cond, DOWN)
    if cond is None or cond != unprefix_condition(outer.cond, UP):
        raise ctx.mismatch("the two join conditions are not copies of one condition")
    ctx.require("join_totality", df.child, down.child, cond)
    return DirectlyFollows(df.case, df.time, Join(cond, df.child, down.child))
