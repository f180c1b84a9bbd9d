"""Relation statistics and measured selectivities."""

from __future__ import annotations

from fractions import Fraction

from src.algebra.conditions import Condition, render_condition
from src.catalog.schemas import RelationMeta, RelationStats
from src.evaluator.predicates import compile_condition
from src.relation.relation import Relation
from src.relation.values import ABSENT


def compute_stats(relation: Relation, case_attr: str | None) -> RelationStats:
    """Tuple count, distinct case count and per-attribute distinct counts."""
    distinct = {
        name: len({v for v in relation.column(name) if v is not ABSENT})
        for name in relation.schema.names
    }
    if not relation.rows:
        v: int | None = 0
    elif case_attr is not None:
        v = distinct[case_attr]
    else:
        v = None
    return RelationStats(n=len(relation), v=v, distinct=distinct)


def collect_selectivity(relation: Relation, cond: Condition) -> Fraction:
    """Exact fraction of tuples satisfying ``cond``; 0 for an empty relation.

    Raises:
        ValueTypeError: If the condition compares values of different domains.
    """
    if not relation.rows:
        return Fraction(0)
    keep = compile_condition(cond, relation.schema)
    return Fraction(sum(1 for row in relation.rows if keep(row)), len(relation.rows))


def record_selectivity(meta: RelationMeta, relation: Relation, cond: Condition) -> Fraction:
    """Measure a selectivity and store it in the relation's statistics."""
    if meta.stats is None:
        meta.stats = compute_stats(relation, meta.case_attr)
    fraction = collect_selectivity(relation, cond)
    meta.stats.selectivity[render_condition(cond)] = fraction
    return fraction
