"""Rule registry and the machinery for applying and checking rewrites."""

from __future__ import annotations

import logging
from typing import Callable, Union

from src.algebra.errors import Path, SchemaError
from src.algebra.expr import AlgebraExpr, node_at, replace_at
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import Catalog
from src.evaluator.engine import evaluate
from src.relation.relation import relation_equal
from src.rules import equivalences as eq
from src.rules import propositions as prop
from src.rules.context import RewriteContext
from src.rules.errors import PatternMismatch
from src.rules.schemas import Direction, RewriteRule, RuleId

logger = logging.getLogger(__name__)

LTR = Direction.LEFT_TO_RIGHT
RTL = Direction.RIGHT_TO_LEFT

Rewriter = Callable[[AlgebraExpr, RewriteContext], AlgebraExpr]
RuleRef = Union[RuleId, RewriteRule, str]

RULES: tuple[RewriteRule, ...] = (
    RewriteRule(RuleId.E1, "cascade of selections", "select(p & q, R)", "select(p, select(q, R))"),
    RewriteRule(
        RuleId.E2,
        "selections commute",
        "select(p, select(q, R))",
        "select(q, select(p, R))",
    ),
    RewriteRule(RuleId.E3, "join commutes", "join(p, R, S)", "join(p, S, R)"),
    RewriteRule(
        RuleId.E4,
        "join is associative",
        "join(q, join(p, R, S), T)",
        "join(p, R, join(q, S, T))",
        requires="q only uses attributes of S and T; p only uses attributes of R and S",
    ),
    RewriteRule(
        RuleId.E5,
        "selection and join",
        "select(q, join(p, R, S))",
        "join(p, select(q, R), S)",
        requires="q only uses attributes of the operand it moves to",
    ),
    RewriteRule(
        RuleId.E6,
        "selection and set difference",
        "select(q, minus(R, S))",
        "minus(select(q, R), select(q, S))",
    ),
    RewriteRule(
        RuleId.E7,
        "selection and rename",
        "select(p, rename(b -> a, R))",
        "rename(b -> a, select(p[a := b], R))",
        requires="for a prefix rename, p only uses prefixed attributes",
    ),
    RewriteRule(
        RuleId.E8,
        "projection and rename",
        "project(A, rename(b -> a, R))",
        "rename(b -> a, project(A[a := b], R))",
        requires="a is in A",
    ),
    RewriteRule(
        RuleId.E9,
        "projection and selection",
        "project(A, select(p, R))",
        "select(p, project(A, R))",
        requires="p only uses attributes in A",
    ),
    RewriteRule(
        RuleId.E10,
        "projection and join",
        "project(A, join(p, R, S))",
        "join(p, project(A & R, R), project(A & S, S))",
        requires="p only uses attributes in A; A keeps attributes of both operands",
    ),
    RewriteRule(
        RuleId.E11,
        "cascade of projections",
        "project(A, project(B, R))",
        "project(A, R)",
        direction=LTR,
        requires="A is a subset of B",
    ),
    RewriteRule(
        RuleId.E12,
        "projections commute",
        "project(A, project(B, R))",
        "project(B, project(A, R))",
        requires="A and B hold the same attributes",
    ),
    RewriteRule(
        RuleId.E13,
        "rename and join",
        "rename(b -> a, join(p, R, S))",
        "join(p[b := a], rename(b -> a, R), S)",
        requires="b is an attribute of R; a is not an attribute of S",
    ),
    RewriteRule(
        RuleId.E14,
        "identity projection",
        "project(A, R)",
        "R",
        requires="A holds exactly the attributes of R",
        expanding=(RTL,),
    ),
    RewriteRule(
        RuleId.E15,
        "projection of a total join",
        "project(A, join(p, R, S))",
        "R",
        direction=LTR,
        requires="A holds exactly the attributes of R",
        side_conditions=("join_totality",),
    ),
    RewriteRule(
        RuleId.E16,
        "join and set difference",
        "join(p, minus(R, T), S)",
        "minus(join(p, R, S), join(p, T, S))",
    ),
    RewriteRule(
        RuleId.P17,
        "directly follows and selection commute",
        "df(c, t, select(a theta x, L))",
        "select(d.a theta x & u.a theta x, df(c, t, L))",
        requires="a, c and t come from one base relation with case c and time t",
        side_conditions=("attribute_class",),
    ),
    RewriteRule(
        RuleId.P18,
        "directly follows and selection commute 2",
        "df(c, t, select(a theta b, L))",
        "select(d.a theta d.b & d.a theta u.b & u.a theta d.b & u.a theta u.b, df(c, t, L))",
        requires="a, b, c and t come from one base relation with case c and time t",
        side_conditions=("attribute_class",),
    ),
    RewriteRule(
        RuleId.P19,
        "directly follows and restricted projection commute",
        "df(c, t, project(A, L))",
        "project(d.A, u.A, df(c, t, L))",
        requires="c and t are in A",
    ),
    RewriteRule(
        RuleId.P20,
        "directly follows and theta join commute",
        "df(c, t, join(p, R, S))",
        "join(u.p, join(d.p, df(c, t, R), prefix(d, S)), prefix(u, S))",
        requires="c and t are attributes of R",
        side_conditions=("join_totality",),
    ),
)

_BY_ID = {rule.id: rule for rule in RULES}

# Rewrite function per rule and direction
_REWRITERS: dict[RuleId, dict[Direction, Rewriter]] = {
    RuleId.E1: {LTR: eq.split_selection, RTL: eq.merge_selections},
    RuleId.E2: {LTR: eq.swap_selections, RTL: eq.swap_selections},
    RuleId.E3: {LTR: eq.swap_join, RTL: eq.swap_join},
    RuleId.E4: {LTR: eq.associate_right, RTL: eq.associate_left},
    RuleId.E5: {LTR: eq.push_selection_into_join, RTL: eq.pull_selection_from_join},
    RuleId.E6: {LTR: eq.distribute_selection_over_minus, RTL: eq.factor_selection_from_minus},
    RuleId.E7: {LTR: eq.push_selection_through_rename, RTL: eq.pull_selection_through_rename},
    RuleId.E8: {LTR: eq.push_projection_through_rename, RTL: eq.pull_projection_through_rename},
    RuleId.E9: {LTR: eq.push_projection_below_selection, RTL: eq.pull_projection_above_selection},
    RuleId.E10: {LTR: eq.split_projection_over_join, RTL: eq.merge_projections_over_join},
    RuleId.E11: {LTR: eq.collapse_projections},
    RuleId.E12: {LTR: eq.swap_projections, RTL: eq.swap_projections},
    RuleId.E13: {LTR: eq.push_rename_into_join, RTL: eq.pull_rename_from_join},
    RuleId.E14: {LTR: eq.drop_identity_projection, RTL: eq.add_identity_projection},
    RuleId.E15: {LTR: eq.drop_total_join},
    RuleId.E16: {LTR: eq.distribute_join_over_minus, RTL: eq.factor_join_from_minus},
    RuleId.P17: {
        LTR: prop.push_df_below_constant_selection,
        RTL: prop.push_constant_selection_into_df,
    },
    RuleId.P18: {
        LTR: prop.push_df_below_attribute_selection,
        RTL: prop.push_attribute_selection_into_df,
    },
    RuleId.P19: {LTR: prop.pull_projection_above_df, RTL: prop.push_projection_into_df},
    RuleId.P20: {LTR: prop.push_df_into_join, RTL: prop.pull_df_above_join},
}


def get_rule(rule: RuleRef) -> RewriteRule:
    """Rule metadata from an id, an id string such as ``"P17"`` or the rule itself.

    Raises:
        KeyError: If no rule has that id.
    """
    if isinstance(rule, RewriteRule):
        return rule
    if isinstance(rule, str):
        try:
            rule = RuleId(rule.upper())
        except ValueError:
            raise KeyError(f"unknown rule '{rule}'") from None
    return _BY_ID[rule]


def rule_catalog() -> list[RewriteRule]:
    """Every rule in id order."""
    return list(RULES)


def apply_rule(
    rule: RuleRef,
    e: AlgebraExpr,
    path: Path,
    cat: Catalog,
    direction: Direction | None = None,
    check_side_conditions: bool = True,
) -> AlgebraExpr:
    """Rewrite the node at ``path`` of ``e`` with one rule.

    Args:
        rule: The rule to apply.
        e: Whole expression tree.
        path: Child indices leading to the node to rewrite.
        cat: Catalog supplying schemas and the facts side conditions need.
        direction: Which way to apply the rule; defaults to left to right,
            or the only permitted direction.
        check_side_conditions: Check semantic side conditions (attribute
            classes, join totality). Well-formedness is always checked.

    Returns:
        The tree with the node replaced; ``e`` itself is not modified.

    Raises:
        PatternMismatch: If the node does not have the rule's shape, the
            direction is not permitted, or the result would be ill-formed.
        SideConditionUnverified: If the catalog lacks a required fact.
    """
    meta = get_rule(rule)
    if direction is None:
        direction = meta.directions[0]
    path = tuple(path)
    if not meta.direction.allows(direction):
        raise PatternMismatch(meta.id.value, path, f"rule does not apply {direction.value}")
    try:
        node = node_at(e, path)
    except IndexError:
        raise PatternMismatch(meta.id.value, path, "path leaves the tree") from None

    ctx = RewriteContext(cat, meta.id, path, check_side_conditions)
    new = _REWRITERS[meta.id][direction](node, ctx)
    before = infer_schema(node, cat)
    try:
        after = infer_schema(new, cat)
    except SchemaError as error:
        raise ctx.mismatch(f"rewrite would be ill-formed: {error}") from None
    if after != before:
        raise ctx.mismatch(f"rewrite changes the schema from {before} to {after}")
    logger.debug("applied %s %s at %s", meta.id.value, direction.arrow, path)
    return replace_at(e, path, new)


def verify_rule_on_instance(
    rule: RuleRef,
    e: AlgebraExpr,
    path: Path,
    cat: Catalog,
    direction: Direction | None = None,
    check_side_conditions: bool = False,
) -> bool:
    """Evaluate both sides of one rule application on the catalog's data.

    Semantic side conditions are not checked by default, so that a rule can
    be tried on data that violates them.

    Returns:
        True iff the rewritten tree evaluates to the same relation.

    Raises:
        PatternMismatch: If the rule does not match at ``path``.
    """
    rewritten = apply_rule(rule, e, path, cat, direction, check_side_conditions)
    return relation_equal(evaluate(e, cat), evaluate(rewritten, cat))
