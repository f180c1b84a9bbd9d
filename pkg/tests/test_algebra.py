"""Tests for expression trees, schema inference and the composite expansion."""

from __future__ import annotations

import pytest

from src.algebra.conditions import And, Attr, attrs, cmp
from src.algebra.errors import ExpansionError, SchemaError, SchemaErrorKind
from src.algebra.expansion import desugar_join, expand_all_df, expand_df
from src.algebra.expr import (
    BaseRel,
    DirectlyFollows,
    Join,
    Minus,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
    Union,
    node_at,
    render_tree,
    replace_at,
    walk,
)
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import Catalog
from src.evaluator.engine import evaluate
from src.relation.errors import MissingRelationError
from tests.conftest import example_pair_rows

LOG = BaseRel("Log")
DF = DirectlyFollows("case", "end_time", LOG)


class TestInferSchema:
    """Tests for schema inference."""

    def test_projection(self, example_catalog: Catalog) -> None:
        assert infer_schema(Project(("case",), LOG), example_catalog).names == ("case",)

    def test_rename(self, example_catalog: Catalog) -> None:
        schema = infer_schema(RenameAttr("case", "id", LOG), example_catalog)
        assert set(schema.names) == {"id", "activity", "start_time", "end_time"}

    def test_directly_follows(self, example_catalog: Catalog) -> None:
        schema = infer_schema(DF, example_catalog)
        assert schema.names == (
            "d.case",
            "d.activity",
            "d.start_time",
            "d.end_time",
            "u.case",
            "u.activity",
            "u.start_time",
            "u.end_time",
        )

    def test_nested_prefixes_compose(self, example_catalog: Catalog) -> None:
        nested = DirectlyFollows("u.case", "u.end_time", DF)
        schema = infer_schema(nested, example_catalog)
        assert "d.u.case" in schema
        assert "u.d.activity" in schema
        assert len(schema) == 16

    def test_unknown_attribute_located(self, example_catalog: Catalog) -> None:
        tree = Project(("case",), Select(cmp("resource", "=", "x"), LOG))
        with pytest.raises(SchemaError) as info:
            infer_schema(tree, example_catalog)
        assert info.value.kind is SchemaErrorKind.UNKNOWN_ATTRIBUTE
        assert info.value.location == (0,)

    def test_union_schema_mismatch(self, example_catalog: Catalog) -> None:
        with pytest.raises(SchemaError) as info:
            infer_schema(Union(LOG, Project(("case",), LOG)), example_catalog)
        assert info.value.kind is SchemaErrorKind.SCHEMA_MISMATCH

    def test_product_name_clash(self, example_catalog: Catalog) -> None:
        with pytest.raises(SchemaError) as info:
            infer_schema(Product(LOG, LOG), example_catalog)
        assert info.value.kind is SchemaErrorKind.DUPLICATE_ATTRIBUTE

    def test_type_mismatch(self, example_catalog: Catalog) -> None:
        with pytest.raises(SchemaError) as info:
            infer_schema(Select(cmp("case", "=", "one"), LOG), example_catalog)
        assert info.value.kind is SchemaErrorKind.TYPE_MISMATCH

    def test_missing_relation(self, example_catalog: Catalog) -> None:
        with pytest.raises(MissingRelationError):
            infer_schema(BaseRel("Nope"), example_catalog)


class TestExpandDf:
    """Tests for the composite form of directly-follows."""

    def test_shape(self, example_catalog: Catalog) -> None:
        expanded = expand_df(DF, example_catalog)
        nodes = [node for _, node in walk(expanded)]
        assert isinstance(expanded, Minus)
        assert sum(isinstance(n, Minus) for n in nodes) == 1
        assert sum(isinstance(n, Join) for n in nodes) == 3
        assert sum(isinstance(n, Project) for n in nodes) == 1
        assert len({id(n) for n in nodes if isinstance(n, RenamePrefix)}) == 2
        assert not any(isinstance(n, DirectlyFollows) for n in nodes)

    def test_pairs_subtree_is_shared(self, example_catalog: Catalog) -> None:
        expanded = expand_df(DF, example_catalog)
        assert expanded.left is expanded.right.child.left

    def test_schema_preserved(self, example_catalog: Catalog) -> None:
        expanded = expand_df(DF, example_catalog)
        assert infer_schema(expanded, example_catalog) == infer_schema(DF, example_catalog)

    def test_evaluates_to_example_pairs(self, example_catalog: Catalog) -> None:
        result = evaluate(expand_df(DF, example_catalog), example_catalog)
        assert set(result.rows) == example_pair_rows()

    def test_rejects_other_nodes(self, example_catalog: Catalog) -> None:
        with pytest.raises(ExpansionError):
            expand_df(LOG, example_catalog)

    def test_operand_schema_comes_from_catalog(self, example_catalog: Catalog) -> None:
        with pytest.raises(MissingRelationError):
            expand_df(DirectlyFollows("case", "end_time", BaseRel("Events")), example_catalog)

    def test_expand_all_removes_nested_df(self, example_catalog: Catalog) -> None:
        tree = Project(("u.activity",), DF)
        expanded = expand_all_df(tree, example_catalog)
        assert not any(isinstance(n, DirectlyFollows) for _, n in walk(expanded))


class TestDesugarJoin:
    """Tests for replacing joins by selections over products."""

    def test_join_becomes_select_over_product(self) -> None:
        cond = cmp("a", "=", Attr("b"))
        tree = Join(cond, BaseRel("R"), BaseRel("S"))
        assert desugar_join(tree) == Select(cond, Product(BaseRel("R"), BaseRel("S")))

    def test_tree_without_joins_unchanged(self) -> None:
        tree = Select(cmp("case", "=", 1), LOG)
        assert desugar_join(tree) == tree


class TestTreeHelpers:
    """Tests for paths, conditions and the tree text form."""

    def test_node_at_and_replace_at(self) -> None:
        tree = Select(cmp("case", "=", 1), DF)
        assert node_at(tree, (0,)) == DF
        replaced = replace_at(tree, (0, 0), BaseRel("Other"))
        assert node_at(replaced, (0, 0)) == BaseRel("Other")
        assert node_at(tree, (0, 0)) == LOG

    def test_attrs_of_condition(self) -> None:
        cond = And(cmp("d.activity", "=", "A"), cmp("u.end_time", ">", Attr("d.end_time")))
        assert attrs(cond) == {"d.activity", "u.end_time", "d.end_time"}

    def test_render_tree(self) -> None:
        text = render_tree(Select(cmp("case", "=", 1), DF))
        assert text.splitlines() == [
            "Select case = 1",
            "  DirectlyFollows case, end_time",
            "    BaseRel Log",
        ]
