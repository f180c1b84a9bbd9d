"""Tests for plan search."""

from __future__ import annotations

import pytest

from src.algebra.conditions import And, cmp
from src.algebra.expr import AlgebraExpr, BaseRel, DirectlyFollows, Project, Select
from src.catalog.schemas import Catalog
from src.cost.schemas import CostParams
from src.evaluator.config import DfStrategy
from src.evaluator.engine import evaluate
from src.optimizer.planner import greedy_pushdown, optimize
from src.optimizer.schemas import OptimizeMode
from src.relation.relation import relation_equal
from src.rules.engine import apply_rule
from src.rules.schemas import Direction, RuleApplication, RuleId
from src.testkit.instances import p17_counterexample

RTL = Direction.RIGHT_TO_LEFT
LOG = BaseRel("Log")
PARAMS = CostParams(f=50, m=200)

SELECT_LAST = Select(
    And(cmp("d.case", "=", 7), cmp("u.case", "=", 7)), DirectlyFollows("case", "time", LOG)
)
SELECT_FIRST = DirectlyFollows("case", "time", Select(cmp("case", "=", 7), LOG))

EXAMPLE_QUERIES = [
    Project(
        ("u.activity",),
        Select(
            And(cmp("d.case", "=", 2), cmp("u.case", "=", 2)),
            DirectlyFollows("case", "end_time", LOG),
        ),
    ),
    Select(
        And(cmp("case", ">", 3), cmp("activity", "=", "E")),
        Project(("case", "activity"), LOG),
    ),
    Project(("case",), Project(("case", "activity"), LOG)),
    Select(cmp("d.activity", "=", "A"), DirectlyFollows("case", "end_time", LOG)),
]


def replay(tree: AlgebraExpr, steps: list[RuleApplication], cat: Catalog) -> AlgebraExpr:
    for step in steps:
        tree = apply_rule(step.rule, tree, step.path, cat, step.direction)
    return tree


class TestHeuristic:
    """Tests for the greedy pushdown."""

    def test_selection_moves_below_df(self, scenario_catalog: Catalog) -> None:
        choice = optimize(SELECT_LAST, scenario_catalog, params=PARAMS)
        assert choice.chosen == SELECT_FIRST
        assert choice.applied_rules == [RuleApplication(RuleId.P17, RTL, ())]
        assert choice.est_original.total_blocks == 76_200
        assert choice.est_chosen.total_blocks == 21
        assert choice.improved

    def test_greedy_stops_when_nothing_applies(self, scenario_catalog: Catalog) -> None:
        tree, steps = greedy_pushdown(SELECT_FIRST, scenario_catalog)
        assert tree == SELECT_FIRST
        assert steps == []

    @pytest.mark.parametrize("query", EXAMPLE_QUERIES)
    def test_replay_and_equivalence(self, example_catalog: Catalog, query: AlgebraExpr) -> None:
        choice = optimize(query, example_catalog, params=PARAMS)
        assert replay(choice.original, choice.applied_rules, example_catalog) == choice.chosen
        assert choice.est_chosen.total <= choice.est_original.total
        assert relation_equal(
            evaluate(choice.original, example_catalog), evaluate(choice.chosen, example_catalog)
        )

    def test_native_pricing_has_nothing_to_gain(self, scenario_catalog: Catalog) -> None:
        choice = optimize(SELECT_LAST, scenario_catalog, params=PARAMS, strategy=DfStrategy.NATIVE)
        assert choice.est_chosen.total <= choice.est_original.total


class TestBlockedRules:
    """Rules whose side conditions fail are reported, not applied."""

    def test_selection_on_other_attribute_stays_above_df(self) -> None:
        _, cat = p17_counterexample()
        query = Select(
            And(cmp("d.res", "=", "X"), cmp("u.res", "=", "X")),
            DirectlyFollows("case", "time", LOG),
        )
        choice = optimize(query, cat, params=PARAMS)
        assert choice.chosen == query
        assert choice.applied_rules == []
        blocked = [b for b in choice.blocked if b.rule is RuleId.P17]
        assert blocked
        assert "res" in blocked[0].reason
        assert "blocked" in str(blocked[0])


class TestModes:
    """Tests for the off and exhaustive modes."""

    def test_off_keeps_query(self, scenario_catalog: Catalog) -> None:
        choice = optimize(SELECT_LAST, scenario_catalog, mode=OptimizeMode.OFF, params=PARAMS)
        assert choice.chosen is SELECT_LAST
        assert choice.applied_rules == []
        assert choice.est_chosen.total_blocks == 76_200

    def test_exhaustive_within_budget(self, scenario_catalog: Catalog) -> None:
        choice = optimize(
            SELECT_FIRST, scenario_catalog, budget=50, mode=OptimizeMode.EXHAUSTIVE, params=PARAMS
        )
        assert 1 <= choice.visited <= 50
        assert choice.est_chosen.total_blocks == 21

    def test_exhausted_budget_falls_back_to_greedy(self, scenario_catalog: Catalog) -> None:
        choice = optimize(
            SELECT_LAST, scenario_catalog, budget=1, mode=OptimizeMode.EXHAUSTIVE, params=PARAMS
        )
        assert choice.exhausted
        assert choice.visited == 1
        assert choice.chosen == SELECT_FIRST
        assert replay(SELECT_LAST, choice.applied_rules, scenario_catalog) == SELECT_FIRST

    def test_to_dict(self, scenario_catalog: Catalog) -> None:
        data = optimize(SELECT_LAST, scenario_catalog, params=PARAMS).to_dict()
        assert data["chosen"] == "df(case, time, select(case = 7, Log))"
        assert data["applied_rules"] == [{"rule": "P17", "direction": "right-to-left", "path": []}]
        assert data["est_chosen"]["total"] == 21
