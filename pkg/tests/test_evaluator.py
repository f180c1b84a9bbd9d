"""Tests for the evaluator and both directly-follows strategies."""

from __future__ import annotations

import random

import pytest

from src.algebra.conditions import cmp
from src.algebra.expansion import expand_df
from src.algebra.expr import BaseRel, DirectlyFollows, Project, Select
from src.catalog.schemas import AttrClass, Catalog
from src.evaluator.config import DfStrategy, EvalConfig
from src.evaluator.directly_follows import evaluate_df_native
from src.evaluator.engine import Evaluator, evaluate, evaluate_df_composite
from src.relation.errors import AbsentTimestampError
from src.relation.relation import Relation, relation_equal
from src.relation.values import ABSENT
from src.testkit.generator import AttributeSpec, LogSpec, generate_log
from src.testkit.oracle import brute_force_df
from tests.conftest import EXAMPLE_PAIRS, LOG_SCHEMA, clock, example_pair_rows, example_rows

LOG = BaseRel("Log")
DF = DirectlyFollows("case", "end_time", LOG)

STRATEGIES = [DfStrategy.NATIVE, DfStrategy.COMPOSITE]


class TestCoreOperators:
    """Tests for the classical operators on the example log."""

    def test_base_relation(self, example_catalog: Catalog) -> None:
        assert set(evaluate(LOG, example_catalog).rows) == example_rows()

    def test_select_one_case(self, example_catalog: Catalog) -> None:
        result = evaluate(Select(cmp("case", "=", 1), LOG), example_catalog)
        assert len(result) == 3

    def test_project_collapses_duplicates(self, example_catalog: Catalog) -> None:
        result = evaluate(Project(("case",), LOG), example_catalog)
        assert set(result.rows) == {(c,) for c in range(1, 7)}

    def test_clock_comparison(self, example_catalog: Catalog) -> None:
        late = Select(cmp("start_time", ">=", clock("07:00")), LOG)
        activities = {row["activity"] for row in evaluate(late, example_catalog)}
        assert activities == {"C", "E"}

    def test_metrics_count_reads(self, example_catalog: Catalog) -> None:
        evaluator = Evaluator(example_catalog, EvalConfig(collect_metrics=True))
        evaluator.evaluate(Select(cmp("case", "=", 1), LOG))
        assert evaluator.metrics.tuples_read == 18
        assert evaluator.metrics.node_rows == {(): 3, (0,): 18}

    def test_metrics_off_by_default(self, example_catalog: Catalog) -> None:
        evaluator = Evaluator(example_catalog)
        evaluator.evaluate(LOG)
        assert evaluator.metrics.tuples_read == 0


class TestDirectlyFollows:
    """Tests for the directly-follows operator."""

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_example_log(self, example_catalog: Catalog, strategy: DfStrategy) -> None:
        result = evaluate(DF, example_catalog, EvalConfig(df_strategy=strategy))
        assert set(result.rows) == example_pair_rows()
        assert len(result) == len(EXAMPLE_PAIRS)

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_successors_of_a(self, example_catalog: Catalog, strategy: DfStrategy) -> None:
        tree = Project(("u.activity",), Select(cmp("d.activity", "=", "A"), DF))
        result = evaluate(tree, example_catalog, EvalConfig(df_strategy=strategy))
        assert set(result.rows) == {("B",), ("C",), ("D",)}

    def test_empty_log(self) -> None:
        empty = Relation.empty(LOG_SCHEMA)
        assert len(evaluate_df_native(empty, "case", "end_time")) == 0
        assert len(evaluate_df_composite(empty, "case", "end_time")) == 0

    def test_single_event_case_has_no_pairs(self) -> None:
        log = Relation.from_rows(LOG_SCHEMA, [(1, "A", clock("01:00"), clock("01:05"))])
        assert len(evaluate_df_native(log, "case", "end_time")) == 0

    def test_ties_pair_every_event_of_adjacent_groups(self) -> None:
        t1, t2 = clock("01:00"), clock("02:00")
        log = Relation.from_rows(
            LOG_SCHEMA,
            [(1, "A", t1, t1), (1, "B", t1, t1), (1, "C", t2, t2)],
        )
        for evaluate_df in (evaluate_df_native, evaluate_df_composite):
            pairs = {
                (row["d.activity"], row["u.activity"])
                for row in evaluate_df(log, "case", "end_time")
            }
            assert pairs == {("A", "C"), ("B", "C")}

    def test_absent_case_produces_no_pairs(self) -> None:
        log = Relation.from_rows(
            LOG_SCHEMA,
            [
                (ABSENT, "A", clock("01:00"), clock("01:00")),
                (ABSENT, "B", clock("02:00"), clock("02:00")),
            ],
        )
        assert len(evaluate_df_native(log, "case", "end_time")) == 0
        assert len(evaluate_df_composite(log, "case", "end_time")) == 0

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_absent_timestamp_rejected(self, strategy: DfStrategy) -> None:
        log = Relation.from_rows(
            LOG_SCHEMA,
            [(1, "A", clock("01:00"), ABSENT), (1, "B", clock("02:00"), clock("02:05"))],
        )
        cat = Catalog({"Log": log})
        with pytest.raises(AbsentTimestampError):
            evaluate(DF, cat, EvalConfig(df_strategy=strategy))

    def test_matches_oracle_on_generated_logs(self) -> None:
        rng = random.Random(11)
        activity = AttributeSpec("activity", AttrClass.OTHER, ("a", "b", "c"))
        for seed in range(1000):
            spec = LogSpec(
                cases=rng.randint(0, 4),
                events_per_case=(0, 5),
                duplicate_timestamp_rate=0.3,
                attributes=(activity,),
                seed=seed,
            )
            log, _ = generate_log(spec)
            expected = brute_force_df(log, "case", "time")
            assert relation_equal(evaluate_df_native(log, "case", "time"), expected)
            assert relation_equal(evaluate_df_composite(log, "case", "time"), expected)

    def test_matches_oracle_on_larger_logs(self) -> None:
        rng = random.Random(13)
        activity = AttributeSpec("activity", AttrClass.OTHER, ("a", "b", "c", "d"))
        for seed in range(1000):
            spec = LogSpec(
                cases=rng.randint(0, 8),
                events_per_case=(0, 12),
                duplicate_timestamp_rate=0.1,
                attributes=(activity,),
                seed=seed,
            )
            log, _ = generate_log(spec)
            expected = brute_force_df(log, "case", "time")
            assert relation_equal(evaluate_df_native(log, "case", "time"), expected)
            assert relation_equal(evaluate_df_composite(log, "case", "time"), expected)


@pytest.mark.slow
class TestIntermediateSizes:
    """Tests for the sizes of the composite form's intermediate results."""

    def test_uniform_log(self) -> None:
        log, meta = generate_log(LogSpec(cases=500, events_per_case=20, seed=3))
        cat = Catalog({"Log": log}, {"Log": meta})
        expanded = expand_df(DirectlyFollows("case", "time", LOG), cat)
        evaluator = Evaluator(cat, EvalConfig(collect_metrics=True))
        result = evaluator.evaluate(expanded)

        assert evaluator.metrics.node_rows[(0,)] == 95_000
        assert evaluator.metrics.node_rows[(1,)] == 85_500
        assert len(result) == 500 * 19
