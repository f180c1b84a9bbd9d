"""Cost of a whole expression tree, composed bottom-up from node costs.

Every node gets a cardinality estimate (rows, width in log tuples and
distinct counts per attribute). Only reading base relations, the
directly-follows computation and joins or differences that overflow memory
cost blocks; selections, projections and renames are pipelined for free.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from src.algebra.conditions import Attr, Comparison, Condition, attrs, conjuncts, unprefix_condition
from src.algebra.errors import Path
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
    base_names,
    label,
)
from src.catalog.schemas import Catalog
from src.cost.model import blocks, bnl_cost, df_components
from src.cost.schemas import CostEstimate, CostParams, NodeCost
from src.evaluator.config import DfStrategy
from src.relation.errors import MissingStatsError
from src.relation.schema import DOWN, UP, prefix_name
from src.relation.values import Theta

logger = logging.getLogger(__name__)


@dataclass
class NodeInfo:
    """Estimated output of one node.

    ``width`` counts how many log tuples one output tuple spans, so a
    directly-follows result has width 2 and ``F / width`` tuples fit a block.
    """

    rows: Fraction
    width: int = 1
    distinct: dict[str, Fraction] = field(default_factory=dict)

    def blocks(self, f: int) -> Fraction:
        return self.rows * self.width / f


def estimate_plan(
    e: AlgebraExpr,
    cat: Catalog,
    p: CostParams,
    strategy: DfStrategy = DfStrategy.COMPOSITE,
) -> CostEstimate:
    """Estimate the block cost of evaluating ``e``.

    Only ``F``, ``M``, ``Q`` and the accounting mode of ``p`` are used; sizes
    come from the catalog statistics.

    Args:
        e: Expression tree to price.
        cat: Catalog with statistics for every base relation.
        p: Cost parameters.
        strategy: How DirectlyFollows nodes are computed.

    Raises:
        MissingStatsError: If a base relation has no statistics or a
            directly-follows input has no case count.
    """
    estimator = _PlanEstimator(cat, p, strategy)
    estimator.visit(e, ())
    estimate = estimator.estimate
    logger.debug("estimated %s blocks over %d nodes", estimate.total_blocks, len(estimate.nodes))
    return estimate


class _PlanEstimator:
    def __init__(self, cat: Catalog, p: CostParams, strategy: DfStrategy) -> None:
        self.cat = cat
        self.p = p
        self.strategy = strategy
        self.estimate = CostEstimate()

    def charge(self, path: Path, node: AlgebraExpr, info: NodeInfo, **components: Fraction) -> None:
        spent = Fraction(0)
        for name, value in components.items():
            value = max(Fraction(0), Fraction(value))
            self.estimate.add(name, value)
            spent += value
        self.estimate.nodes.append(NodeCost(path, label(node), spent, info.rows))

    def visit(self, node: AlgebraExpr, path: Path) -> NodeInfo:
        if isinstance(node, BaseRel):
            info = self.base(node.name)
            self.charge(path, node, info, scan=Fraction(blocks(info.rows, self.p.f)))
            return info
        if isinstance(node, Select) and isinstance(node.child, BaseRel):
            indexed = self.cat.meta_for(node.child.name).indexes & attrs(node.cond)
            if indexed:
                return self.index_select(node, path, sorted(indexed))
        if isinstance(node, Select):
            child = self.visit(node.child, path + (0,))
            info = self.select(node.cond, child, base_names(node))
            self.charge(path, node, info)
            return info
        if isinstance(node, Project):
            child = self.visit(node.child, path + (0,))
            keep = set(node.attrs)
            info = NodeInfo(
                child.rows,
                child.width,
                {a: d for a, d in child.distinct.items() if a in keep},
            )
            self.charge(path, node, info)
            return info
        if isinstance(node, RenameAttr):
            child = self.visit(node.child, path + (0,))
            info = _renamed(child, lambda a: node.new if a == node.old else a)
            self.charge(path, node, info)
            return info
        if isinstance(node, RenamePrefix):
            child = self.visit(node.child, path + (0,))
            info = _renamed(child, lambda a: prefix_name(node.prefix, a))
            self.charge(path, node, info)
            return info
        if isinstance(node, DirectlyFollows):
            return self.directly_follows(node, path)
        if isinstance(node, (Product, Join, Union, Intersect, Minus)):
            left = self.visit(node.left, path + (0,))
            right = self.visit(node.right, path + (1,))
            return self.binary(node, path, left, right)
        raise TypeError(f"not an expression node: {node!r}")

    def base(self, name: str) -> NodeInfo:
        relation = self.cat.relation(name)
        meta = self.cat.meta_for(name)
        if meta.stats is None:
            raise MissingStatsError(name, "N")
        stats = meta.stats
        distinct = {
            a: Fraction(stats.distinct[a]) for a in relation.schema.names if a in stats.distinct
        }
        if meta.case_attr is not None and stats.v is not None:
            distinct[meta.case_attr] = Fraction(stats.v)
        return NodeInfo(Fraction(stats.n), 1, distinct)

    def index_select(self, node: Select, path: Path, indexed: list[str]) -> NodeInfo:
        """Selection answered through an index: one block for the index plus the matches."""
        child = self.base(node.child.name)
        info = self.select(node.cond, child, {node.child.name})
        full = blocks(child.rows, self.p.f)
        q = info.rows / child.rows if child.rows else Fraction(0)
        cost = Fraction(min(full, 1 + math.ceil(q * full)))
        logger.debug("index on %s used for %s", ", ".join(indexed), node.child.name)
        base = NodeCost(path + (0,), label(node.child), Fraction(0), child.rows)
        self.estimate.nodes.append(base)
        self.charge(path, node, info, scan=cost)
        return info

    def selectivity(self, cond: Condition, bases: set[str]) -> Fraction:
        """Recorded selectivity of ``cond``, else the product over its conjuncts.

        ``d.`` and ``u.`` copies of one comparison count once.
        """
        recorded = self.cat.selectivity(cond, bases)
        if recorded is not None:
            return recorded
        seen: set[Condition] = set()
        q = Fraction(1)
        for part in conjuncts(cond):
            key = unprefix_condition(part, DOWN) or unprefix_condition(part, UP) or part
            if key in seen:
                continue
            seen.add(key)
            found = self.cat.selectivity(part, bases)
            if found is None:
                found = self.cat.selectivity(key, bases)
            q *= self.p.q if found is None else found
        return q

    def select(self, cond: Condition, child: NodeInfo, bases: set[str]) -> NodeInfo:
        q = self.selectivity(cond, bases)
        rows = child.rows * q
        if q == 1:
            return NodeInfo(rows, child.width, dict(child.distinct))
        distinct = {a: _cardenas(d, rows) for a, d in child.distinct.items()}
        return NodeInfo(rows, child.width, distinct)

    def directly_follows(self, node: DirectlyFollows, path: Path) -> NodeInfo:
        child = self.visit(node.child, path + (0,))
        v = child.distinct.get(node.case)
        if v is None:
            raise MissingStatsError(", ".join(sorted(base_names(node))) or "?", "V")
        rows = max(Fraction(0), child.rows - v)
        distinct: dict[str, Fraction] = {}
        for prefix in (DOWN, UP):
            for a, d in child.distinct.items():
                distinct[prefix_name(prefix, a)] = min(d, rows)
        info = NodeInfo(rows, child.width * 2, distinct)
        if self.strategy is DfStrategy.NATIVE or child.rows == 0:
            self.charge(path, node, info)
            return info
        per_block = Fraction(self.p.f, child.width)
        parts = df_components(child.rows, v, per_block, self.p.m, self.p.accounting)
        parts["join1"] -= blocks(child.rows, per_block)
        self.charge(path, node, info, **parts)
        return info

    def binary(self, node: AlgebraExpr, path: Path, left: NodeInfo, right: NodeInfo) -> NodeInfo:
        f, m = self.p.f, self.p.m
        if isinstance(node, (Product, Join)):
            q = Fraction(1)
            if isinstance(node, Join):
                q = self.join_selectivity(node.cond, left, right, base_names(node))
            rows = left.rows * right.rows * q
            distinct = {a: min(d, rows) for a, d in {**left.distinct, **right.distinct}.items()}
            info = NodeInfo(rows, left.width + right.width, distinct)
        elif isinstance(node, Union):
            rows = left.rows + right.rows
            keys = left.distinct.keys() & right.distinct.keys()
            distinct = {a: min(rows, left.distinct[a] + right.distinct[a]) for a in keys}
            info = NodeInfo(rows, max(left.width, right.width), distinct)
        elif isinstance(node, Intersect):
            rows = min(left.rows, right.rows)
            distinct = {a: min(d, rows) for a, d in left.distinct.items()}
            info = NodeInfo(rows, left.width, distinct)
        else:
            info = NodeInfo(left.rows, left.width, dict(left.distinct))

        if isinstance(node, (Product, Join, Minus)):
            b_l, b_r = left.blocks(f), right.blocks(f)
            self.charge(path, node, info, other=bnl_cost(b_l, b_r, m) - b_l - b_r)
        else:
            self.charge(path, node, info)
        return info

    def join_selectivity(
        self, cond: Condition, left: NodeInfo, right: NodeInfo, bases: set[str]
    ) -> Fraction:
        q = Fraction(1)
        for part in conjuncts(cond):
            equi = _equi_attrs(part)
            if equi is not None:
                a, b = equi
                if a in right.distinct and b in left.distinct:
                    a, b = b, a
                if a in left.distinct and b in right.distinct:
                    q /= max(Fraction(1), left.distinct[a], right.distinct[b])
                    continue
            found = self.cat.selectivity(part, bases)
            q *= self.p.q if found is None else found
        return q


def _renamed(info: NodeInfo, fn: Callable[[str], str]) -> NodeInfo:
    return NodeInfo(info.rows, info.width, {fn(a): d for a, d in info.distinct.items()})


def _equi_attrs(part: Condition) -> tuple[str, str] | None:
    if (
        isinstance(part, Comparison)
        and part.theta is Theta.EQ
        and isinstance(part.lhs, Attr)
        and isinstance(part.rhs, Attr)
    ):
        return part.lhs.name, part.rhs.name
    return None


def _cardenas(d: Fraction, rows: Fraction) -> Fraction:
    """Distinct values expected among ``rows`` tuples drawn from ``d`` values.

    The exponential has no rational form, so this estimate is computed in floats
    and brought back to a Fraction; it is the one inexact step of plan costing.
    """
    if d == 0 or rows == 0:
        return Fraction(0)
    expected = Fraction(float(d) * (1 - math.exp(-float(rows / d)))).limit_denominator(10**6)
    return min(d, rows, expected)
