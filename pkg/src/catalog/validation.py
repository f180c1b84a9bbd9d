"""Data-driven checks of catalog declarations."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from itertools import groupby
from typing import Any

from src.algebra.expr import Join, Project
from src.catalog.schemas import AttrClass, Catalog, RelationMeta, TotalityFact
from src.dsl.parser import parse, parse_condition
from src.evaluator.engine import Evaluator
from src.relation.errors import MissingDeclarationError
from src.relation.relation import Relation
from src.relation.values import ABSENT, Value, render_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassViolation:
    """An attribute whose values contradict its declared class within one case."""

    attribute: str
    attr_class: AttrClass
    case: Value
    time: Value
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "attribute": self.attribute,
            "class": self.attr_class.value,
            "case": render_value(self.case),
            "time": render_value(self.time),
            "message": self.message,
        }

    def __str__(self) -> str:
        return (
            f"{self.attribute} ({self.attr_class.value}) in case {render_value(self.case)} "
            f"at {render_value(self.time)}: {self.message}"
        )


def validate_classes(relation: Relation, meta: RelationMeta) -> list[ClassViolation]:
    """Check declared Case and Event attributes against the data.

    A Case attribute may start Absent but, once it has a value, keeps that
    value for every later event of the case. Events sharing a timestamp may
    occur in any order, so a Case attribute is only reported when every
    ordering consistent with the ties violates the rule. An Event attribute
    has a value on at most one event per case.

    Args:
        relation: The event log.
        meta: Declarations for the log; case and time attributes are required.

    Returns:
        One violation per offending (attribute, case), ordered by attribute
        then case. An empty list means the declarations hold.

    Raises:
        MissingDeclarationError: If the case or time attribute is not declared.
    """
    if meta.case_attr is None or meta.time_attr is None:
        raise MissingDeclarationError("class validation needs case_attr and time_attr")
    schema = relation.schema
    case_index = schema.index_of(meta.case_attr)
    time_index = schema.index_of(meta.time_attr)

    cases: dict[Value, list[tuple]] = defaultdict(list)
    skipped = 0
    for row in relation.rows:
        if row[case_index] is ABSENT:
            continue
        if row[time_index] is ABSENT:
            skipped += 1
            continue
        cases[row[case_index]].append(row)
    if skipped:
        logger.warning("skipped %d event(s) without a %s value", skipped, meta.time_attr)

    violations: list[ClassViolation] = []
    for attribute, attr_class in sorted(meta.attr_classes.items()):
        if attr_class is AttrClass.OTHER:
            continue
        index = schema.index_of(attribute)
        check = _check_case_attr if attr_class is AttrClass.CASE else _check_event_attr
        for case in sorted(cases, key=_display_key):
            rows = sorted(cases[case], key=lambda r: r[time_index])
            groups = [
                (time, [r[index] for r in group])
                for time, group in groupby(rows, key=lambda r: r[time_index])
            ]
            found = check(groups)
            if found is not None:
                time, message = found
                violations.append(ClassViolation(attribute, attr_class, case, time, message))
    return violations


def _display_key(value: Value) -> tuple[str, str]:
    return (type(value).__name__, render_value(value))


def _check_case_attr(groups: list[tuple[Value, list[Value]]]) -> tuple[Value, str] | None:
    first: Value = ABSENT
    for time, values in groups:
        present = {v for v in values if v is not ABSENT}
        if first is ABSENT:
            if len(present) > 1:
                return time, "takes several values at once"
            if present:
                first = present.pop()
            continue
        if present - {first}:
            return time, f"changes from {render_value(first)}"
        if ABSENT in values:
            return time, f"loses its value {render_value(first)}"
    return None


def _check_event_attr(groups: list[tuple[Value, list[Value]]]) -> tuple[Value, str] | None:
    seen = 0
    for time, values in groups:
        seen += sum(1 for v in values if v is not ABSENT)
        if seen > 1:
            return time, "has a value on more than one event"
    return None


def check_totality(cat: Catalog, fact: TotalityFact) -> bool:
    """True if every tuple of the fact's left side joins some tuple of its right side.

    Raises:
        SchemaError: If the join of the two sides is ill-formed.
        MissingRelationError: If a side names an unknown relation.
    """
    left = parse(fact.left)
    joined = Join(parse_condition(fact.condition), left, parse(fact.right))
    evaluator = Evaluator(cat)
    kept = evaluator.evaluate(Project(evaluator.evaluate(left).schema.names, joined))
    return len(kept) == len(evaluator.evaluate(left))


def verify_totality(cat: Catalog) -> list[TotalityFact]:
    """Declared totality facts that the catalog's data contradicts."""
    facts = {f for meta in cat.meta.values() for f in meta.totality_facts}
    failed = [f for f in sorted(facts, key=str) if not check_totality(cat, f)]
    for fact in failed:
        logger.warning("totality fact does not hold: %s", fact)
    return failed
