"""Tests for values, schemas and relations."""

from __future__ import annotations

from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.relation.errors import SchemaMismatchError, ValueTypeError
from src.relation.relation import Relation, insert_tuple, relation_equal
from src.relation.schema import DOWN, UP, Attribute, Schema
from src.relation.values import (
    ABSENT,
    Domain,
    Theta,
    Timestamp,
    compare,
    format_literal,
    render_value,
    sort_key,
)
from tests.conftest import LOG_SCHEMA, clock

values = st.one_of(
    st.integers(),
    st.decimals(allow_nan=False, allow_infinity=False, places=3),
    st.builds(Timestamp, st.integers(min_value=-(10**12), max_value=10**13)),
    st.text(max_size=5),
)
integers_or_absent = st.one_of(st.integers(), st.just(ABSENT))


class TestCompare:
    """Tests for two-valued comparison."""

    def test_absent_never_compares_true(self) -> None:
        for theta in Theta:
            assert compare(theta, ABSENT, 1) is False
            assert compare(theta, 1, ABSENT) is False
            assert compare(theta, ABSENT, ABSENT) is False

    def test_cross_domain_comparison_raises(self) -> None:
        with pytest.raises(ValueTypeError):
            compare(Theta.EQ, 1, "1")
        with pytest.raises(ValueTypeError):
            compare(Theta.LT, Decimal("1.5"), 2)

    def test_clock_times_order(self) -> None:
        assert compare(Theta.LT, clock("00:22"), clock("02:08"))
        assert not compare(Theta.LT, clock("02:32"), clock("02:32"))

    @given(values, values)
    def test_same_domain_order_is_total(self, a: object, b: object) -> None:
        if type(a) is not type(b):
            return
        holds = [compare(t, a, b) for t in (Theta.LT, Theta.EQ, Theta.GT)]
        assert holds.count(True) == 1

    @given(values, values)
    def test_mirrored_operator_swaps_operands(self, a: object, b: object) -> None:
        if type(a) is not type(b):
            return
        for theta in Theta:
            assert compare(theta, a, b) == compare(theta.mirrored, b, a)

    @given(integers_or_absent, integers_or_absent)
    def test_not_equal_is_negation_only_without_absent(self, a: object, b: object) -> None:
        if a is ABSENT or b is ABSENT:
            assert not compare(Theta.EQ, a, b) and not compare(Theta.NE, a, b)
        else:
            assert compare(Theta.NE, a, b) == (not compare(Theta.EQ, a, b))


class TestValues:
    """Tests for parsing and rendering values."""

    def test_clock_time_anchors_on_epoch_day(self) -> None:
        assert Timestamp.parse("00:20") == Timestamp(20 * 60_000)
        assert Timestamp.parse("00:20").render() == "00:20"

    def test_iso_timestamp(self) -> None:
        moment = Timestamp.parse("2020-09-13T12:26:40.123Z")
        assert moment.millis == 1_600_000_000_123
        assert moment.render() == "2020-09-13T12:26:40.123Z"

    def test_invalid_clock_time(self) -> None:
        with pytest.raises(ValueError):
            Timestamp.parse("25:00")

    def test_domain_parse(self) -> None:
        assert Domain.INTEGER.parse(" 42 ") == 42
        assert Domain.DECIMAL.parse("2.50") == Decimal("2.50")
        assert Domain.TEXT.parse("A") == "A"
        with pytest.raises(ValueError):
            Domain.INTEGER.parse("4.2")

    def test_render_absent_as_empty(self) -> None:
        assert render_value(ABSENT) == ""
        assert render_value(Decimal("1E+2")) == "100"

    def test_text_literal_escapes_quotes(self) -> None:
        assert format_literal("it's") == "'it\\'s'"

    def test_absent_sorts_first(self) -> None:
        assert sorted([3, ABSENT, 1], key=sort_key) == [ABSENT, 1, 3]


class TestSchema:
    """Tests for schemas."""

    def test_equality_ignores_order(self) -> None:
        a = Schema.of(("x", Domain.INTEGER), ("y", Domain.TEXT))
        b = Schema.of(("y", Domain.TEXT), ("x", Domain.INTEGER))
        assert a == b
        assert hash(a) == hash(b)

    def test_domain_is_part_of_equality(self) -> None:
        assert Schema.of(("x", Domain.INTEGER)) != Schema.of(("x", Domain.TEXT))

    def test_duplicate_name_rejected(self) -> None:
        with pytest.raises(SchemaMismatchError):
            Schema((Attribute("x", Domain.INTEGER), Attribute("x", Domain.TEXT)))

    def test_prefixed_names(self) -> None:
        names = LOG_SCHEMA.prefixed(DOWN).concat(LOG_SCHEMA.prefixed(UP)).names
        assert names[0] == "d.case"
        assert names[4] == "u.case"
        assert len(names) == 8


class TestRelation:
    """Tests for set-semantics relations."""

    def test_reordered_rows_are_equal(self, example_log: Relation) -> None:
        reordered = Relation.from_rows(LOG_SCHEMA, reversed(sorted(example_log.rows, key=str)))
        assert relation_equal(example_log, reordered)

    def test_selection_is_not_equal(self, example_log: Relation) -> None:
        case1 = Relation.from_rows(LOG_SCHEMA, {r for r in example_log.rows if r[0] == 1})
        assert len(case1) == 3
        assert not relation_equal(example_log, case1)

    def test_equality_across_column_orders(self) -> None:
        a = Relation.of(Schema.of(("x", Domain.INTEGER), ("y", Domain.TEXT)), [{"x": 1, "y": "a"}])
        b = Relation.of(Schema.of(("y", Domain.TEXT), ("x", Domain.INTEGER)), [{"x": 1, "y": "a"}])
        assert relation_equal(a, b)

    def test_insert_first_row(self) -> None:
        row = {
            "case": 1,
            "activity": "A",
            "start_time": clock("00:20"),
            "end_time": clock("00:22"),
        }
        relation = insert_tuple(Relation.empty(LOG_SCHEMA), row)
        assert len(relation) == 1
        assert insert_tuple(relation, row) is relation

    def test_insert_missing_attribute(self) -> None:
        with pytest.raises(SchemaMismatchError):
            insert_tuple(Relation.empty(LOG_SCHEMA), {"case": 1, "activity": "A"})

    def test_insert_wrong_domain(self) -> None:
        row = {"case": "1", "activity": "A", "start_time": ABSENT, "end_time": ABSENT}
        with pytest.raises(SchemaMismatchError):
            insert_tuple(Relation.empty(LOG_SCHEMA), row)

    def test_absent_values_are_allowed(self) -> None:
        row = {"case": 1, "activity": ABSENT, "start_time": ABSENT, "end_time": clock("01:00")}
        assert len(insert_tuple(Relation.empty(LOG_SCHEMA), row)) == 1
