"""Tests for CSV loading, sidecars, statistics and declaration checks."""

from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path

import pytest

from src.algebra.conditions import Attr, Condition, cmp
from src.algebra.expr import BaseRel
from src.catalog.loader import LoadOptions, infer_domain, load_catalog, load_csv, load_relation
from src.catalog.schemas import AttrClass, Catalog, RelationMeta, TotalityFact
from src.catalog.sidecar import read_sidecar
from src.catalog.statistics import collect_selectivity, compute_stats, record_selectivity
from src.catalog.validation import check_totality, validate_classes, verify_totality
from src.relation.errors import CatalogLoadError, MissingDeclarationError
from src.relation.relation import Relation
from src.relation.schema import Schema
from src.relation.values import ABSENT, Domain
from src.testkit.generator import AttributeSpec, LogSpec, generate_log
from tests.conftest import (
    EXAMPLE_LOG,
    EXAMPLE_SIDECAR,
    LOG_SCHEMA,
    example_rows,
    write_example_log,
)

ACTS = "act,label\nA,start\nB,review\nC,check\nD,decide\nE,end\n"
ACTS_TOTALITY = "totality:\n  - {left: Log, right: Acts, condition: activity = act}\n"


class TestLoadCsv:
    """Tests for reading one CSV file."""

    def test_example_log(self, tmp_path: Path) -> None:
        relation, meta = load_csv(write_example_log(tmp_path), LoadOptions(case_attr="case"))
        assert relation.schema == LOG_SCHEMA
        assert set(relation.rows) == example_rows()
        assert meta.stats.n == 18
        assert meta.stats.v == 6

    def test_header_only(self, tmp_path: Path) -> None:
        path = tmp_path / "Empty.csv"
        path.write_text("case,activity\n", encoding="utf-8")
        relation, meta = load_csv(path)
        assert len(relation) == 0
        assert relation.schema.domain_of("case") is Domain.TEXT
        assert meta.stats.n == 0

    def test_missing_header(self, tmp_path: Path) -> None:
        path = tmp_path / "Blank.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(CatalogLoadError):
            load_csv(path)

    def test_duplicate_rows_collapse(
        self, tmp_path: Path, caplog: pytest.LogCaptureFixture
    ) -> None:
        path = write_example_log(tmp_path)
        first = ",".join(str(v) for v in EXAMPLE_LOG[0])
        path.write_text(path.read_text(encoding="utf-8") + first + "\n", encoding="utf-8")
        with caplog.at_level(logging.WARNING):
            relation, meta = load_csv(path)
        assert len(relation) == 18
        assert meta.stats.duplicates_dropped == 1
        assert "duplicate" in caplog.text

    def test_ragged_row(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.csv"
        path.write_text("case,activity\n1,A\n2\n", encoding="utf-8")
        with pytest.raises(CatalogLoadError, match=":3:"):
            load_csv(path)

    def test_empty_cells_are_absent(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.csv"
        path.write_text("case,amount\n1,\n1,2.5\n", encoding="utf-8")
        relation, _ = load_csv(path)
        assert relation.schema.domain_of("amount") is Domain.DECIMAL
        assert ABSENT in relation.column("amount")

    def test_type_override_must_parse(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.csv"
        path.write_text("case,activity\n1,A\n", encoding="utf-8")
        with pytest.raises(CatalogLoadError, match="activity"):
            load_csv(path, LoadOptions(types={"activity": Domain.INTEGER}))

    def test_reserved_prefix(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.csv"
        path.write_text("d.case,activity\n1,A\n", encoding="utf-8")
        with pytest.raises(CatalogLoadError, match="reserved"):
            load_csv(path)

    def test_declared_attribute_must_exist(self, tmp_path: Path) -> None:
        with pytest.raises(CatalogLoadError):
            load_csv(write_example_log(tmp_path), LoadOptions(time_attr="timestamp"))

    def test_semicolon_delimiter(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.csv"
        path.write_text("case;activity\n1;A\n", encoding="utf-8")
        relation, _ = load_csv(path, LoadOptions(delimiter=";"))
        assert relation.schema.names == ("case", "activity")

    @pytest.mark.parametrize(
        ("cells", "domain"),
        [
            (["1", "2", ""], Domain.INTEGER),
            (["1", "2.5"], Domain.DECIMAL),
            (["08:00", "2020-01-01T00:00:00Z"], Domain.TIMESTAMP),
            (["1", "x"], Domain.TEXT),
            (["", ""], Domain.TEXT),
        ],
    )
    def test_infer_domain(self, cells: list[str], domain: Domain) -> None:
        assert infer_domain(cells) is domain


class TestSidecar:
    """Tests for declaration files next to a CSV file."""

    def test_yaml_sidecar(self, loaded_catalog: Catalog) -> None:
        meta = loaded_catalog.meta_for("Log")
        assert meta.case_attr == "case"
        assert meta.time_attr == "end_time"
        assert meta.class_of("case") is AttrClass.CASE
        assert meta.class_of("activity") is AttrClass.OTHER
        assert meta.stats.v == 6

    def test_key_value_sidecar(self, tmp_path: Path) -> None:
        write_example_log(tmp_path)
        (tmp_path / "Log.meta").write_text(
            "# example\n"
            "case_attr = case\n"
            "time_attr = end_time\n"
            "classes.case = case\n"
            "indexes = activity, case\n"
            "selectivity = activity = 'A' ; 1/3\n",
            encoding="utf-8",
        )
        _, meta = load_relation(tmp_path / "Log.csv")
        assert meta.indexes == {"activity", "case"}
        assert meta.attr_classes == {"case": AttrClass.CASE}
        assert meta.stats.selectivity["activity = 'A'"] == Fraction(1, 3)

    def test_selectivity_keys_are_canonical(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.meta.yaml"
        path.write_text("selectivity: {\"activity='A'\": 0.25}\n", encoding="utf-8")
        assert read_sidecar(path).selectivity == {"activity = 'A'": Fraction(1, 4)}

    def test_unknown_key(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.meta"
        path.write_text("colour = blue\n", encoding="utf-8")
        with pytest.raises(CatalogLoadError, match="unknown key"):
            read_sidecar(path)

    def test_invalid_class(self, tmp_path: Path) -> None:
        path = tmp_path / "Log.meta.yaml"
        path.write_text("classes: {case: sometimes}\n", encoding="utf-8")
        with pytest.raises(CatalogLoadError):
            read_sidecar(path)

    def test_class_for_unknown_attribute(self, tmp_path: Path) -> None:
        write_example_log(tmp_path, sidecar="classes: {resource: case}\n")
        with pytest.raises(CatalogLoadError, match="resource"):
            load_relation(tmp_path / "Log.csv")


class TestLoadCatalog:
    """Tests for loading directories of relations."""

    def test_relation_per_file(self, tmp_path: Path) -> None:
        write_example_log(tmp_path, sidecar=EXAMPLE_SIDECAR)
        (tmp_path / "Acts.csv").write_text(ACTS, encoding="utf-8")
        cat = load_catalog(tmp_path)
        assert sorted(cat.relations) == ["Acts", "Log"]
        assert len(cat.relation("Acts")) == 5

    def test_byte_order_mark(self, tmp_path: Path) -> None:
        (tmp_path / "Log.csv").write_text(
            "\ufeffcase,activity,time\n1,A,1\n1,B,2\n", encoding="utf-8"
        )
        (tmp_path / "Log.meta.yaml").write_text(
            "\ufeffcase_attr: case\ntime_attr: time\n", encoding="utf-8"
        )
        cat = load_catalog(tmp_path)
        log = cat.relation("Log")
        assert log.schema.names == ("case", "activity", "time")
        assert cat.meta_for("Log").case_attr == "case"
        assert cat.meta_for("Log").stats.v == 1

    def test_missing_directory(self, tmp_path: Path) -> None:
        with pytest.raises(CatalogLoadError):
            load_catalog(tmp_path / "nowhere")

    def test_name_defined_twice(self, tmp_path: Path) -> None:
        write_example_log(tmp_path / "one")
        write_example_log(tmp_path / "two")
        with pytest.raises(CatalogLoadError, match="twice"):
            load_catalog(tmp_path / "one", tmp_path / "two")


class TestStatistics:
    """Tests for statistics and measured selectivities."""

    def test_compute_stats(self, example_log: Relation) -> None:
        stats = compute_stats(example_log, "case")
        assert (stats.n, stats.v) == (18, 6)
        assert stats.distinct["activity"] == 5

    def test_no_case_attribute(self, example_log: Relation) -> None:
        assert compute_stats(example_log, None).v is None

    @pytest.mark.parametrize(
        ("cond", "expected"),
        [
            (cmp("case", "=", 1), Fraction(3, 18)),
            (cmp("case", ">=", 1), Fraction(1)),
            (cmp("activity", "=", "A"), Fraction(6, 18)),
        ],
    )
    def test_selectivity(self, example_log: Relation, cond: Condition, expected: Fraction) -> None:
        assert collect_selectivity(example_log, cond) == expected

    def test_selectivity_of_empty_relation(self) -> None:
        assert collect_selectivity(Relation.empty(LOG_SCHEMA), cmp("case", "=", 1)) == 0

    def test_record_selectivity(self, example_log: Relation, example_meta: RelationMeta) -> None:
        record_selectivity(example_meta, example_log, cmp("activity", "=", "A"))
        cat = Catalog({"Log": example_log}, {"Log": example_meta})
        assert cat.selectivity(cmp("activity", "=", "A"), {"Log"}) == Fraction(1, 3)
        assert cat.selectivity(cmp("activity", "=", "B"), {"Log"}) is None


class TestValidateClasses:
    """Tests for checking declared classes against data."""

    SCHEMA = Schema.of(
        ("case", Domain.INTEGER),
        ("time", Domain.INTEGER),
        ("owner", Domain.TEXT),
        ("ticket", Domain.TEXT),
    )

    def meta(self) -> RelationMeta:
        return RelationMeta(
            attr_classes={"owner": AttrClass.CASE, "ticket": AttrClass.EVENT},
            case_attr="case",
            time_attr="time",
        )

    def test_example_log_is_valid(self, example_log: Relation, example_meta: RelationMeta) -> None:
        assert validate_classes(example_log, example_meta) == []

    def test_case_attribute_may_start_absent(self) -> None:
        rows = [(1, 1, ABSENT, "t1"), (1, 2, "ann", ABSENT), (1, 3, "ann", ABSENT)]
        log = Relation.from_rows(self.SCHEMA, rows)
        assert validate_classes(log, self.meta()) == []

    def test_case_attribute_changes(self) -> None:
        rows = [(1, 1, "ann", ABSENT), (1, 2, "bob", ABSENT), (2, 1, "cat", ABSENT)]
        violations = validate_classes(Relation.from_rows(self.SCHEMA, rows), self.meta())
        assert len(violations) == 1
        assert violations[0].attribute == "owner"
        assert violations[0].case == 1
        assert violations[0].time == 2

    def test_case_attribute_lost(self) -> None:
        rows = [(1, 1, "ann", ABSENT), (1, 2, ABSENT, ABSENT)]
        violations = validate_classes(Relation.from_rows(self.SCHEMA, rows), self.meta())
        assert [v.message for v in violations] == ["loses its value ann"]

    def test_ties_may_be_ordered_either_way(self) -> None:
        rows = [(1, 1, ABSENT, ABSENT), (1, 2, "ann", ABSENT), (1, 2, ABSENT, ABSENT)]
        violations = validate_classes(Relation.from_rows(self.SCHEMA, rows), self.meta())
        assert violations == []

    def test_event_attribute_twice(self) -> None:
        rows = [(1, 1, ABSENT, "t1"), (1, 2, ABSENT, "t2")]
        violations = validate_classes(Relation.from_rows(self.SCHEMA, rows), self.meta())
        assert [(v.attribute, v.attr_class) for v in violations] == [("ticket", AttrClass.EVENT)]

    def test_needs_declarations(self, example_log: Relation) -> None:
        with pytest.raises(MissingDeclarationError):
            validate_classes(example_log, RelationMeta(attr_classes={"case": AttrClass.CASE}))

    def test_generated_logs_honor_their_classes(self) -> None:
        attributes = (
            AttributeSpec("owner", AttrClass.CASE, ("ann", "bob"), absent_rate=0.3),
            AttributeSpec("ticket", AttrClass.EVENT, (1, 2, 3), absent_rate=0.3),
            AttributeSpec("resource", AttrClass.OTHER, ("x", "y")),
        )
        for seed in range(50):
            spec = LogSpec(
                cases=5,
                events_per_case=(1, 6),
                duplicate_timestamp_rate=0.3,
                attributes=attributes,
                seed=seed,
            )
            log, meta = generate_log(spec)
            assert validate_classes(log, meta) == []


class TestTotality:
    """Tests for checking declared totality facts against data."""

    def catalog(self, tmp_path: Path, acts: str) -> Catalog:
        write_example_log(tmp_path, sidecar=ACTS_TOTALITY)
        (tmp_path / "Acts.csv").write_text(acts, encoding="utf-8")
        return load_catalog(tmp_path)

    def test_fact_holds(self, tmp_path: Path) -> None:
        cat = self.catalog(tmp_path, ACTS)
        fact = TotalityFact.parse("Log", "Acts", "activity = act")
        assert check_totality(cat, fact)
        assert verify_totality(cat) == []
        assert cat.has_totality(BaseRel("Log"), BaseRel("Acts"), cmp("activity", "=", Attr("act")))

    def test_fact_contradicted(self, tmp_path: Path) -> None:
        cat = self.catalog(tmp_path, ACTS.replace("E,end\n", ""))
        assert verify_totality(cat) == [TotalityFact.parse("Log", "Acts", "activity = act")]
