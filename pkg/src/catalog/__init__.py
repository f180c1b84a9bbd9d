"""Catalog: relations, declarations, statistics and CSV loading."""

from src.catalog.loader import LoadOptions, load_catalog, load_csv, load_relation
from src.catalog.schemas import AttrClass, Catalog, RelationMeta, RelationStats, TotalityFact
from src.catalog.statistics import collect_selectivity, compute_stats, record_selectivity
from src.catalog.validation import (
    ClassViolation,
    check_totality,
    validate_classes,
    verify_totality,
)

__all__ = [
    "AttrClass",
    "Catalog",
    "ClassViolation",
    "LoadOptions",
    "RelationMeta",
    "RelationStats",
    "TotalityFact",
    "check_totality",
    "collect_selectivity",
    "compute_stats",
    "load_catalog",
    "load_csv",
    "load_relation",
    "record_selectivity",
    "validate_classes",
    "verify_totality",
]
