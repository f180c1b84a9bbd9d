"""Rewrites for the general relational equivalences E1-E16.

Each function takes the node a rule is applied to and returns its
replacement, or raises :class:`~src.rules.errors.PatternMismatch` when the
node does not have the expected shape. Functions come in pairs, one per
direction; self-inverse rules use one function for both.
"""

from __future__ import annotations

from src.algebra.conditions import (
    And,
    attrs,
    prefix_condition,
    rename_attr,
    unprefix_condition,
)
from src.algebra.expr import (
    AlgebraExpr,
    Join,
    Minus,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
)
from src.relation.schema import prefix_name, strip_prefix
from src.rules.context import RewriteContext


def _select(node: AlgebraExpr, ctx: RewriteContext) -> Select:
    if not isinstance(node, Select):
        raise ctx.mismatch("expected a selection")
    return node


def _project(node: AlgebraExpr, ctx: RewriteContext) -> Project:
    if not isinstance(node, Project):
        raise ctx.mismatch("expected a projection")
    return node


def _join(node: AlgebraExpr, ctx: RewriteContext) -> Join:
    if not isinstance(node, Join):
        raise ctx.mismatch("expected a join")
    return node


def _minus(node: AlgebraExpr, ctx: RewriteContext) -> Minus:
    if not isinstance(node, Minus):
        raise ctx.mismatch("expected a set difference")
    return node


# E1: select(p & q, R) = select(p, select(q, R))


def split_selection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    select = _select(node, ctx)
    if not isinstance(select.cond, And):
        raise ctx.mismatch("selection condition is not a conjunction")
    return Select(select.cond.left, Select(select.cond.right, select.child))


def merge_selections(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _select(node, ctx)
    inner = _select(outer.child, ctx)
    return Select(And(outer.cond, inner.cond), inner.child)


# E2: select(p, select(q, R)) = select(q, select(p, R))


def swap_selections(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _select(node, ctx)
    inner = _select(outer.child, ctx)
    return Select(inner.cond, Select(outer.cond, inner.child))


# E3: join(p, R, S) = join(p, S, R)


def swap_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    join = _join(node, ctx)
    return Join(join.cond, join.right, join.left)


# E4: join(q, join(p, R, S), T) = join(p, R, join(q, S, T))


def associate_right(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _join(node, ctx)
    inner = _join(outer.left, ctx)
    middle = set(ctx.schema(inner.right).names) | set(ctx.schema(outer.right).names)
    if not attrs(outer.cond) <= middle:
        raise ctx.mismatch("outer condition uses attributes of the first operand")
    return Join(inner.cond, inner.left, Join(outer.cond, inner.right, outer.right))


def associate_left(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _join(node, ctx)
    inner = _join(outer.right, ctx)
    first = set(ctx.schema(outer.left).names) | set(ctx.schema(inner.left).names)
    if not attrs(outer.cond) <= first:
        raise ctx.mismatch("outer condition uses attributes of the last operand")
    return Join(inner.cond, Join(outer.cond, outer.left, inner.left), inner.right)


# E5: select(q, join(p, R, S)) = join(p, select(q, R), S) if q only uses attributes of R


def push_selection_into_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    select = _select(node, ctx)
    join = _join(select.child, ctx)
    used = attrs(select.cond)
    if used <= set(ctx.schema(join.left).names):
        return Join(join.cond, Select(select.cond, join.left), join.right)
    if used <= set(ctx.schema(join.right).names):
        return Join(join.cond, join.left, Select(select.cond, join.right))
    raise ctx.mismatch("selection uses attributes of both join operands")


def pull_selection_from_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    join = _join(node, ctx)
    if isinstance(join.left, Select):
        inner = join.left
        return Select(inner.cond, Join(join.cond, inner.child, join.right))
    if isinstance(join.right, Select):
        inner = join.right
        return Select(inner.cond, Join(join.cond, join.left, inner.child))
    raise ctx.mismatch("neither join operand is a selection")


# E6: select(q, minus(R, S)) = minus(select(q, R), select(q, S))


def distribute_selection_over_minus(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    select = _select(node, ctx)
    minus = _minus(select.child, ctx)
    return Minus(Select(select.cond, minus.left), Select(select.cond, minus.right))


def factor_selection_from_minus(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    minus = _minus(node, ctx)
    left = _select(minus.left, ctx)
    right = _select(minus.right, ctx)
    if left.cond != right.cond:
        raise ctx.mismatch("operands are selected on different conditions")
    return Select(left.cond, Minus(left.child, right.child))


# E7: select(p, rename(b -> a, R)) = rename(b -> a, select(p[a := b], R))


def push_selection_through_rename(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    select = _select(node, ctx)
    rename = select.child
    if isinstance(rename, RenameAttr):
        inner = Select(rename_attr(select.cond, rename.new, rename.old), rename.child)
        return RenameAttr(rename.old, rename.new, inner)
    if isinstance(rename, RenamePrefix):
        cond = unprefix_condition(select.cond, rename.prefix)
        if cond is None:
            raise ctx.mismatch(f"condition mentions attributes without prefix {rename.prefix}")
        return RenamePrefix(rename.prefix, Select(cond, rename.child))
    raise ctx.mismatch("selection is not over a rename")


def pull_selection_through_rename(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    if isinstance(node, RenameAttr):
        select = _select(node.child, ctx)
        cond = rename_attr(select.cond, node.old, node.new)
        return Select(cond, RenameAttr(node.old, node.new, select.child))
    if isinstance(node, RenamePrefix):
        select = _select(node.child, ctx)
        cond = prefix_condition(select.cond, node.prefix)
        return Select(cond, RenamePrefix(node.prefix, select.child))
    raise ctx.mismatch("expected a rename")


# E8: project(A, rename(b -> a, R)) = rename(b -> a, project(A[a := b], R)) if a in A


def push_projection_through_rename(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    project = _project(node, ctx)
    rename = project.child
    if isinstance(rename, RenameAttr):
        if rename.new not in project.attrs:
            raise ctx.mismatch(f"renamed attribute '{rename.new}' is projected away")
        names = tuple(rename.old if a == rename.new else a for a in project.attrs)
        return RenameAttr(rename.old, rename.new, Project(names, rename.child))
    if isinstance(rename, RenamePrefix):
        stripped = [strip_prefix(rename.prefix, a) for a in project.attrs]
        if any(s is None for s in stripped):
            raise ctx.mismatch(f"projection keeps attributes without prefix {rename.prefix}")
        return RenamePrefix(rename.prefix, Project(tuple(stripped), rename.child))
    raise ctx.mismatch("projection is not over a rename")


def pull_projection_through_rename(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    if isinstance(node, RenameAttr):
        project = _project(node.child, ctx)
        if node.old not in project.attrs:
            raise ctx.mismatch(f"renamed attribute '{node.old}' is not projected")
        names = tuple(node.new if a == node.old else a for a in project.attrs)
        return Project(names, RenameAttr(node.old, node.new, project.child))
    if isinstance(node, RenamePrefix):
        project = _project(node.child, ctx)
        names = tuple(prefix_name(node.prefix, a) for a in project.attrs)
        return Project(names, RenamePrefix(node.prefix, project.child))
    raise ctx.mismatch("expected a rename")


# E9: project(A, select(p, R)) = select(p, project(A, R)) if p only uses attributes in A


def push_projection_below_selection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    project = _project(node, ctx)
    select = _select(project.child, ctx)
    missing = attrs(select.cond) - set(project.attrs)
    if missing:
        listed = ", ".join(sorted(missing))
        raise ctx.mismatch(f"condition uses attributes projected away: {listed}")
    return Select(select.cond, Project(project.attrs, select.child))


def pull_projection_above_selection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    select = _select(node, ctx)
    project = _project(select.child, ctx)
    return Project(project.attrs, Select(select.cond, project.child))


# E10: project(A, join(p, R, S)) = join(p, project(A & R, R), project(A & S, S))


def split_projection_over_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    project = _project(node, ctx)
    join = _join(project.child, ctx)
    missing = attrs(join.cond) - set(project.attrs)
    if missing:
        listed = ", ".join(sorted(missing))
        raise ctx.mismatch(f"join condition uses attributes projected away: {listed}")
    left_schema, right_schema = ctx.schema(join.left), ctx.schema(join.right)
    left = tuple(a for a in project.attrs if a in left_schema)
    right = tuple(a for a in project.attrs if a in right_schema)
    if not left or not right:
        raise ctx.mismatch("projection keeps attributes of only one join operand")
    return Join(join.cond, Project(left, join.left), Project(right, join.right))


def merge_projections_over_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    join = _join(node, ctx)
    left = _project(join.left, ctx)
    right = _project(join.right, ctx)
    return Project(left.attrs + right.attrs, Join(join.cond, left.child, right.child))


# E11: project(A, project(B, R)) = project(A, R) if A is a subset of B


def collapse_projections(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _project(node, ctx)
    inner = _project(outer.child, ctx)
    if not set(outer.attrs) <= set(inner.attrs):
        raise ctx.mismatch("outer projection keeps attributes the inner one drops")
    return Project(outer.attrs, inner.child)


# E12: project(A, project(B, R)) = project(B, project(A, R)) if A and B hold the same attributes


def swap_projections(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    outer = _project(node, ctx)
    inner = _project(outer.child, ctx)
    if set(outer.attrs) != set(inner.attrs):
        raise ctx.mismatch("projections keep different attributes")
    return Project(inner.attrs, Project(outer.attrs, inner.child))


# E13: rename(b -> a, join(p, R, S)) = join(p[b := a], rename(b -> a, R), S) if a, b only in R


def push_rename_into_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    if isinstance(node, RenamePrefix):
        join = _join(node.child, ctx)
        return Join(
            prefix_condition(join.cond, node.prefix),
            RenamePrefix(node.prefix, join.left),
            RenamePrefix(node.prefix, join.right),
        )
    if not isinstance(node, RenameAttr):
        raise ctx.mismatch("expected a rename")
    join = _join(node.child, ctx)
    cond = rename_attr(join.cond, node.old, node.new)
    left, right = ctx.schema(join.left), ctx.schema(join.right)
    if node.old in left and node.new not in right:
        return Join(cond, RenameAttr(node.old, node.new, join.left), join.right)
    if node.old in right and node.new not in left:
        return Join(cond, join.left, RenameAttr(node.old, node.new, join.right))
    raise ctx.mismatch(f"'{node.new}' would clash with the other join operand")


def pull_rename_from_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    join = _join(node, ctx)
    if (
        isinstance(join.left, RenamePrefix)
        and isinstance(join.right, RenamePrefix)
        and join.left.prefix == join.right.prefix
    ):
        prefix = join.left.prefix
        cond = unprefix_condition(join.cond, prefix)
        if cond is None:
            raise ctx.mismatch(f"condition mentions attributes without prefix {prefix}")
        return RenamePrefix(prefix, Join(cond, join.left.child, join.right.child))
    for side, other in ((join.left, join.right), (join.right, join.left)):
        if isinstance(side, RenameAttr) and side.old not in ctx.schema(other):
            cond = rename_attr(join.cond, side.new, side.old)
            if side is join.left:
                inner = Join(cond, side.child, other)
            else:
                inner = Join(cond, other, side.child)
            return RenameAttr(side.old, side.new, inner)
    raise ctx.mismatch("no join operand is a rename that can be lifted")


# E14: project(A, R) = R if A holds exactly the attributes of R


def drop_identity_projection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    project = _project(node, ctx)
    if set(project.attrs) != set(ctx.schema(project.child).names):
        raise ctx.mismatch("projection drops attributes")
    return project.child


def add_identity_projection(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    return Project(ctx.schema(node).names, node)


# E15: project(A, join(p, R, S)) = R if the join keeps every tuple of R and A = attributes of R


def drop_total_join(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    project = _project(node, ctx)
    join = _join(project.child, ctx)
    kept = set(project.attrs)
    for side, other in ((join.left, join.right), (join.right, join.left)):
        if kept == set(ctx.schema(side).names):
            ctx.require("join_totality", side, other, join.cond)
            return side
    raise ctx.mismatch("projection does not keep exactly one operand's attributes")


# E16: join(p, minus(R, T), S) = minus(join(p, R, S), join(p, T, S))


def distribute_join_over_minus(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    join = _join(node, ctx)
    minus = _minus(join.left, ctx)
    return Minus(Join(join.cond, minus.left, join.right), Join(join.cond, minus.right, join.right))


def factor_join_from_minus(node: AlgebraExpr, ctx: RewriteContext) -> AlgebraExpr:
    minus = _minus(node, ctx)
    left = _join(minus.left, ctx)
    right = _join(minus.right, ctx)
    if left.cond != right.cond or left.right != right.right:
        raise ctx.mismatch("joins differ in condition or right operand")
    return Join(left.cond, Minus(left.left, right.left), left.right)
