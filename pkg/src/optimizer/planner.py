"""Search for a cheaper equivalent plan.

Two strategies share the rule engine. The greedy pass pushes selections and
projections towards the base relations, applying the first rule that fits
until none does. The exhaustive search explores every tree reachable by
rule applications, breadth first, up to a budget of expanded trees. The
cheapest tree seen wins; ties go to the smaller tree, then to the smaller
query text.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from src.algebra.expr import AlgebraExpr, node_count, walk
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import Catalog
from src.cost.plan import estimate_plan
from src.cost.schemas import CostEstimate, CostParams
from src.dsl.render import render
from src.evaluator.config import DfStrategy
from src.optimizer.schemas import OptimizeMode, PlanChoice
from src.rules.engine import RULES, apply_rule
from src.rules.errors import PatternMismatch, SideConditionUnverified
from src.rules.schemas import BlockedRule, Direction, RuleApplication, RuleId

logger = logging.getLogger(__name__)

LTR = Direction.LEFT_TO_RIGHT
RTL = Direction.RIGHT_TO_LEFT

# Order matters: the first rule that applies anywhere in the tree is taken.
GREEDY_SEQUENCE: tuple[tuple[RuleId, Direction], ...] = (
    (RuleId.P17, RTL),
    (RuleId.P18, RTL),
    (RuleId.P19, RTL),
    (RuleId.E1, LTR),
    (RuleId.E5, LTR),
    (RuleId.E6, LTR),
    (RuleId.E7, LTR),
    (RuleId.E9, RTL),
    (RuleId.E14, LTR),
    (RuleId.E11, LTR),
)

DEFAULT_BUDGET = 500
MAX_GREEDY_STEPS = 1000


@dataclass
class _Search:
    """Trees found so far with the rewrite steps that reach each one."""

    cat: Catalog
    routes: dict[AlgebraExpr, list[RuleApplication]] = field(default_factory=dict)
    blocked: dict[tuple[RuleId, Direction, tuple[int, ...]], BlockedRule] = field(
        default_factory=dict
    )

    def block(self, step: RuleApplication, error: SideConditionUnverified) -> None:
        key = (step.rule, step.direction, step.path)
        if key not in self.blocked:
            self.blocked[key] = BlockedRule(step.rule, step.direction, step.path, error.fact)

    def attempt(self, tree: AlgebraExpr, step: RuleApplication) -> AlgebraExpr | None:
        try:
            return apply_rule(step.rule, tree, step.path, self.cat, step.direction)
        except PatternMismatch:
            return None
        except SideConditionUnverified as error:
            self.block(step, error)
            return None


def greedy_pushdown(
    e: AlgebraExpr, cat: Catalog, search: _Search | None = None
) -> tuple[AlgebraExpr, list[RuleApplication]]:
    """Push selections and projections down until no rule of the sequence applies.

    Returns:
        The rewritten tree and the steps taken, in order.
    """
    search = search or _Search(cat)
    current, steps = e, []
    for _ in range(MAX_GREEDY_STEPS):
        found = _first_rewrite(current, search)
        if found is None:
            break
        current, step = found
        steps.append(step)
        logger.debug("greedy step %d: %s", len(steps), step)
    else:
        logger.warning("greedy pushdown stopped after %d steps", MAX_GREEDY_STEPS)
    return current, steps


def _first_rewrite(
    tree: AlgebraExpr, search: _Search
) -> tuple[AlgebraExpr, RuleApplication] | None:
    paths = [path for path, _ in walk(tree)]
    for rule, direction in GREEDY_SEQUENCE:
        for path in paths:
            step = RuleApplication(rule, direction, path)
            rewritten = search.attempt(tree, step)
            if rewritten is not None and rewritten != tree:
                return rewritten, step
    return None


def explore(e: AlgebraExpr, cat: Catalog, budget: int, search: _Search) -> tuple[int, bool]:
    """Breadth-first search over rule applications in every permitted direction.

    Directions a rule marks as expanding are skipped. Fills ``search.routes``
    with every tree found.

    Returns:
        The number of trees expanded and whether the budget ran out first.
    """
    search.routes.setdefault(e, [])
    queue = deque([e])
    visited = 0
    while queue:
        if visited >= budget:
            logger.warning(
                "plan search budget of %d trees exhausted with %d trees found",
                budget,
                len(search.routes),
            )
            return visited, True
        tree = queue.popleft()
        visited += 1
        route = search.routes[tree]
        for path, _ in walk(tree):
            for rule in RULES:
                for direction in rule.directions:
                    if direction in rule.expanding:
                        continue
                    step = RuleApplication(rule.id, direction, path)
                    rewritten = search.attempt(tree, step)
                    if rewritten is None or rewritten in search.routes:
                        continue
                    search.routes[rewritten] = route + [step]
                    queue.append(rewritten)
    logger.debug("plan search finished: %d trees expanded", visited)
    return visited, False


def optimize(
    e: AlgebraExpr,
    cat: Catalog,
    budget: int = DEFAULT_BUDGET,
    mode: OptimizeMode = OptimizeMode.HEURISTIC,
    params: CostParams | None = None,
    strategy: DfStrategy = DfStrategy.COMPOSITE,
) -> PlanChoice:
    """Find the cheapest equivalent of ``e`` under the block cost model.

    Args:
        e: Query to optimize.
        cat: Catalog with schemas, statistics and the facts side conditions need.
        budget: Maximum number of trees the exhaustive search expands.
        mode: Search strategy; ``OFF`` returns ``e`` unchanged.
        params: Cost parameters; only ``F``, ``M``, ``Q`` and accounting are used.
        strategy: How DirectlyFollows nodes are priced.

    Returns:
        The chosen plan; its estimated cost never exceeds the original's.

    Raises:
        SchemaError: If ``e`` is ill-formed.
        MissingStatsError: If the catalog lacks statistics for a base relation.
    """
    infer_schema(e, cat)
    params = params or CostParams()
    est_original = estimate_plan(e, cat, params, strategy)
    choice = PlanChoice(e, e, est_original=est_original, est_chosen=est_original, mode=mode)
    if mode is OptimizeMode.OFF:
        return choice

    search = _Search(cat)
    if mode is OptimizeMode.EXHAUSTIVE:
        choice.visited, choice.exhausted = explore(e, cat, budget, search)
    else:
        search.routes[e] = []
    if mode is OptimizeMode.HEURISTIC or choice.exhausted:
        pushed, steps = greedy_pushdown(e, cat, search)
        if pushed not in search.routes or len(steps) < len(search.routes[pushed]):
            search.routes[pushed] = steps

    best, best_cost = _cheapest(search.routes, cat, params, strategy)
    if _rank(best, best_cost) < _rank(e, est_original):
        choice.chosen = best
        choice.est_chosen = best_cost
        choice.applied_rules = list(search.routes[best])
    choice.blocked = list(search.blocked.values())
    logger.debug(
        "optimized %s -> %s blocks with %d rewrites",
        est_original.total_blocks,
        choice.est_chosen.total_blocks,
        len(choice.applied_rules),
    )
    return choice


def _rank(tree: AlgebraExpr, cost: CostEstimate) -> tuple:
    return (cost.total, node_count(tree), render(tree))


def _cheapest(
    trees: dict[AlgebraExpr, list[RuleApplication]],
    cat: Catalog,
    params: CostParams,
    strategy: DfStrategy,
) -> tuple[AlgebraExpr, CostEstimate]:
    priced = [(tree, estimate_plan(tree, cat, params, strategy)) for tree in trees]
    return min(priced, key=lambda item: _rank(*item))
