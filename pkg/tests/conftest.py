"""Pytest fixtures for dfq tests."""

from __future__ import annotations

from pathlib import Path

import pytest

from src.catalog.loader import load_catalog
from src.catalog.schemas import AttrClass, Catalog, RelationMeta, RelationStats
from src.catalog.statistics import compute_stats
from src.relation.relation import Relation
from src.relation.schema import Schema
from src.relation.values import Domain, Timestamp

LOG_SCHEMA = Schema.of(
    ("case", Domain.INTEGER),
    ("activity", Domain.TEXT),
    ("start_time", Domain.TIMESTAMP),
    ("end_time", Domain.TIMESTAMP),
)

# The example log: six cases of three events each.
EXAMPLE_LOG = [
    (1, "A", "00:20", "00:22"),
    (1, "B", "02:04", "02:08"),
    (1, "E", "02:32", "02:32"),
    (2, "A", "02:15", "02:20"),
    (2, "D", "03:14", "03:19"),
    (2, "E", "05:06", "05:07"),
    (3, "A", "02:27", "02:29"),
    (3, "D", "04:17", "04:20"),
    (3, "E", "06:51", "06:53"),
    (4, "A", "03:06", "03:10"),
    (4, "B", "05:04", "05:09"),
    (4, "E", "07:26", "07:29"),
    (5, "A", "03:40", "03:44"),
    (5, "B", "05:59", "06:06"),
    (5, "E", "07:49", "07:52"),
    (6, "A", "04:18", "04:20"),
    (6, "C", "07:08", "07:12"),
    (6, "E", "09:05", "09:07"),
]

# Directly-follows pairs of the example log, as (case, first activity, next activity).
EXAMPLE_PAIRS = {
    (1, "A", "B"),
    (1, "B", "E"),
    (2, "A", "D"),
    (2, "D", "E"),
    (3, "A", "D"),
    (3, "D", "E"),
    (4, "A", "B"),
    (4, "B", "E"),
    (5, "A", "B"),
    (5, "B", "E"),
    (6, "A", "C"),
    (6, "C", "E"),
}


def clock(text: str) -> Timestamp:
    return Timestamp.parse(text)


def example_rows() -> set[tuple]:
    return {(c, a, clock(s), clock(e)) for c, a, s, e in EXAMPLE_LOG}


def example_pair_rows() -> set[tuple]:
    """Full directly-follows tuples: the down event followed by the up event."""
    by_key = {(c, a): (c, a, clock(s), clock(e)) for c, a, s, e in EXAMPLE_LOG}
    return {by_key[(c, first)] + by_key[(c, second)] for c, first, second in EXAMPLE_PAIRS}


def write_example_log(directory: Path, name: str = "Log", sidecar: str | None = None) -> Path:
    """Write the example log as CSV, with an optional YAML sidecar."""
    directory.mkdir(parents=True, exist_ok=True)
    lines = ["case,activity,start_time,end_time"]
    lines += [",".join(str(v) for v in row) for row in EXAMPLE_LOG]
    path = directory / f"{name}.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if sidecar is not None:
        (directory / f"{name}.meta.yaml").write_text(sidecar, encoding="utf-8")
    return path


EXAMPLE_SIDECAR = "case_attr: case\ntime_attr: end_time\nclasses: {case: case}\n"


@pytest.fixture
def example_log() -> Relation:
    """The example log as a relation."""
    return Relation.from_rows(LOG_SCHEMA, example_rows())


@pytest.fixture
def example_meta(example_log: Relation) -> RelationMeta:
    return RelationMeta(
        attr_classes={"case": AttrClass.CASE},
        case_attr="case",
        time_attr="end_time",
        stats=compute_stats(example_log, "case"),
    )


@pytest.fixture
def example_catalog(example_log: Relation, example_meta: RelationMeta) -> Catalog:
    return Catalog({"Log": example_log}, {"Log": example_meta})


@pytest.fixture
def catalog_dir(tmp_path: Path) -> Path:
    """Directory holding Log.csv and its sidecar."""
    directory = tmp_path / "catalog"
    write_example_log(directory, sidecar=EXAMPLE_SIDECAR)
    return directory


@pytest.fixture
def loaded_catalog(catalog_dir: Path) -> Catalog:
    return load_catalog(catalog_dir)


@pytest.fixture
def scenario_catalog() -> Catalog:
    """Statistics-only log of 10000 events in 500 cases with an index on case.

    The relation itself is empty; only the recorded statistics are used for
    cost estimation.
    """
    schema = Schema.of(
        ("case", Domain.INTEGER), ("activity", Domain.TEXT), ("time", Domain.INTEGER)
    )
    meta = RelationMeta(
        attr_classes={"case": AttrClass.CASE},
        case_attr="case",
        time_attr="time",
        stats=RelationStats(
            n=10_000, v=500, distinct={"case": 500, "activity": 10, "time": 10_000}
        ),
        indexes={"case"},
    )
    return Catalog({"Log": Relation.empty(schema)}, {"Log": meta})
