"""Tree-walking evaluator for algebra expressions."""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Iterable, Protocol

from src.algebra.conditions import Attr, Comparison, Condition, conjoin, conjuncts
from src.algebra.errors import Path
from src.algebra.expansion import expand_df
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
from src.algebra.schema_inference import infer_schema
from src.evaluator.config import DfStrategy, EvalConfig, EvalMetrics
from src.evaluator.directly_follows import SingleLogCatalog, check_times, evaluate_df_native
from src.evaluator.predicates import compile_condition
from src.relation.relation import Relation
from src.relation.schema import Schema
from src.relation.values import ABSENT, Theta

logger = logging.getLogger(__name__)


class RelationSource(Protocol):
    def relation(self, name: str) -> Relation: ...

    def schema_of(self, name: str) -> Schema: ...


class Evaluator:
    """Evaluates expression trees against one catalog.

    Structurally identical subtrees are computed once per evaluator, so the
    shared pair join of a composite directly-follows expansion runs a single
    time.
    """

    def __init__(self, cat: RelationSource, config: EvalConfig | None = None) -> None:
        self.cat = cat
        self.config = config or EvalConfig()
        self.metrics = EvalMetrics()
        self._memo: dict[AlgebraExpr, Relation] = {}

    @property
    def counting(self) -> bool:
        return self.config.collect_metrics

    def evaluate(self, expr: AlgebraExpr) -> Relation:
        """Evaluate ``expr``; schema errors surface before any tuple is touched."""
        infer_schema(expr, self.cat)
        return self._eval(expr, ())

    def _eval(self, expr: AlgebraExpr, path: Path) -> Relation:
        result = self._memo.get(expr)
        if result is None:
            result = self._compute(expr, path)
            self._memo[expr] = result
        if self.counting:
            self.metrics.record(path, len(result), not isinstance(expr, BaseRel))
        return result

    def _predicate_metrics(self) -> EvalMetrics | None:
        return self.metrics if self.counting else None

    def _compute(self, expr: AlgebraExpr, path: Path) -> Relation:
        if isinstance(expr, BaseRel):
            relation = self.cat.relation(expr.name)
            if self.counting:
                self.metrics.tuples_read += len(relation)
            return relation

        if isinstance(expr, (Product, Join, Union, Intersect, Minus)):
            left = self._eval(expr.left, path + (0,))
            right = self._eval(expr.right, path + (1,))
            if isinstance(expr, Product):
                rows = {l + r for l in left.rows for r in right.rows}
                return Relation.from_rows(left.schema.concat(right.schema), rows)
            if isinstance(expr, Join):
                return self._join(expr.cond, left, right)
            aligned = right.aligned_rows(left.schema)
            if isinstance(expr, Union):
                return Relation(left.schema, left.rows | aligned)
            if isinstance(expr, Intersect):
                return Relation(left.schema, left.rows & aligned)
            return Relation(left.schema, left.rows - aligned)

        child = self._eval(expr.child, path + (0,))
        if isinstance(expr, Select):
            keep = compile_condition(expr.cond, child.schema, self._predicate_metrics())
            return Relation(child.schema, frozenset(r for r in child.rows if keep(r)))
        if isinstance(expr, Project):
            positions = [child.schema.index_of(a) for a in expr.attrs]
            rows = {tuple(r[i] for i in positions) for r in child.rows}
            return Relation.from_rows(child.schema.project(expr.attrs), rows)
        if isinstance(expr, RenameAttr):
            return Relation(child.schema.rename(expr.old, expr.new), child.rows)
        if isinstance(expr, RenamePrefix):
            return Relation(child.schema.prefixed(expr.prefix), child.rows)
        if isinstance(expr, DirectlyFollows):
            return self._directly_follows(expr, child)
        raise TypeError(f"not an expression node: {expr!r}")

    def _directly_follows(self, expr: DirectlyFollows, log: Relation) -> Relation:
        if self.config.df_strategy is DfStrategy.NATIVE:
            return evaluate_df_native(log, expr.case, expr.time)
        nested = EvalConfig(DfStrategy.COMPOSITE, collect_metrics=self.counting)
        result, metrics = _composite(log, expr.case, expr.time, nested)
        if self.counting:
            self.metrics.comparisons += metrics.comparisons
            self.metrics.intermediate_tuples_peak = max(
                self.metrics.intermediate_tuples_peak, metrics.intermediate_tuples_peak
            )
        return result

    def _join(self, cond: Condition, left: Relation, right: Relation) -> Relation:
        """Theta join; equality conjuncts across the operands are answered by hashing."""
        schema = left.schema.concat(right.schema)
        left_keys: list[int] = []
        right_keys: list[int] = []
        residual: list[Condition] = []
        for part in conjuncts(cond):
            pair = _equi_pair(part, left.schema, right.schema)
            if pair is None:
                residual.append(part)
            else:
                left_keys.append(pair[0])
                right_keys.append(pair[1])
        keep = (
            compile_condition(conjoin(residual), schema, self._predicate_metrics())
            if residual
            else None
        )

        if left_keys:
            buckets: dict[tuple, list[tuple]] = defaultdict(list)
            for r in right.rows:
                key = tuple(r[i] for i in right_keys)
                if ABSENT not in key:
                    buckets[key].append(r)
            candidates: Iterable[tuple[tuple, tuple]] = (
                (l, r)
                for l in left.rows
                for r in buckets.get(tuple(l[i] for i in left_keys), ())
            )
        else:
            candidates = ((l, r) for l in left.rows for r in right.rows)

        rows = set()
        for l, r in candidates:
            if self.counting:
                self.metrics.comparisons += len(left_keys)
            row = l + r
            if keep is None or keep(row):
                rows.add(row)
        return Relation.from_rows(schema, rows)


def _equi_pair(part: Condition, left: Schema, right: Schema) -> tuple[int, int] | None:
    """Positions (left, right) if ``part`` equates a left attribute with a right one."""
    if not (
        isinstance(part, Comparison)
        and part.theta is Theta.EQ
        and isinstance(part.lhs, Attr)
        and isinstance(part.rhs, Attr)
    ):
        return None
    a, b = part.lhs.name, part.rhs.name
    if a in left and b in right:
        return left.index_of(a), right.index_of(b)
    if b in left and a in right:
        return left.index_of(b), right.index_of(a)
    return None


def _composite(
    log: Relation, case: str, time: str, config: EvalConfig
) -> tuple[Relation, EvalMetrics]:
    check_times(log, time)
    cat = SingleLogCatalog(log)
    expr = expand_df(DirectlyFollows(case, time, BaseRel(cat.name)), cat)
    evaluator = Evaluator(cat, config)
    return evaluator.evaluate(expr), evaluator.metrics


def evaluate_df_composite(log: Relation, case: str, time: str) -> Relation:
    """Directly-follows pairs by literally executing the composite expansion.

    Raises:
        AbsentTimestampError: If some event has no time value.
    """
    result, _ = _composite(log, case, time, EvalConfig(DfStrategy.COMPOSITE))
    return result


def evaluate(
    expr: AlgebraExpr, cat: RelationSource, config: EvalConfig | None = None
) -> Relation:
    """Evaluate an expression against a catalog.

    Raises:
        SchemaError: If the tree is ill-formed.
        ValueTypeError: If a comparison mixes domains at run time.
        AbsentTimestampError: If a directly-follows input has events without time.
    """
    evaluator = Evaluator(cat, config)
    result = evaluator.evaluate(expr)
    logger.debug("evaluated %d-row result", len(result))
    return result
