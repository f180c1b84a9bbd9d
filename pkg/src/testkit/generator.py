"""Random event logs whose attributes honor their declared classes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Union

from src.catalog.schemas import AttrClass, RelationMeta
from src.catalog.statistics import compute_stats
from src.relation.relation import Relation
from src.relation.schema import Attribute, Schema
from src.relation.values import ABSENT, Domain, Value, domain_of

CASE_ATTR = "case"
EVENT_ATTR = "event"
TIME_ATTR = "time"


@dataclass(frozen=True)
class AttributeSpec:
    """One generated attribute.

    A Case attribute gets one value from ``pool`` per case, starting at a
    random time group; earlier events stay Absent when ``absent_rate`` allows.
    An Event attribute gets a value on at most one event per case. Other
    attributes draw a value from ``pool`` for every event.
    """

    name: str
    attr_class: AttrClass
    pool: tuple[Value, ...]
    absent_rate: float = 0.0

    @property
    def domain(self) -> Domain:
        return domain_of(self.pool[0])

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "class": self.attr_class.value,
            "pool": list(self.pool),
            "absent_rate": self.absent_rate,
        }


@dataclass(frozen=True)
class LogSpec:
    """Shape of a generated log.

    ``events_per_case`` is either a fixed count or an inclusive (low, high)
    range. With ``duplicate_timestamp_rate`` an event repeats the previous
    event's time, up to ``max_tie_group`` events sharing one time.
    """

    cases: int = 6
    events_per_case: Union[int, tuple[int, int]] = 3
    duplicate_timestamp_rate: float = 0.0
    attributes: tuple[AttributeSpec, ...] = field(default_factory=tuple)
    seed: int = 0
    max_tie_group: int = 2

    def __post_init__(self) -> None:
        if self.cases < 0:
            raise ValueError(f"cases must be non-negative, got {self.cases}")
        low, high = self.case_length_range
        if not 0 <= low <= high:
            raise ValueError(f"bad events_per_case {self.events_per_case}")
        if not 0 <= self.duplicate_timestamp_rate <= 1:
            raise ValueError("duplicate_timestamp_rate must lie in [0, 1]")
        if self.max_tie_group < 1:
            raise ValueError("max_tie_group must be at least 1")
        for spec in self.attributes:
            if not spec.pool:
                raise ValueError(f"attribute '{spec.name}' has an empty value pool")

    @property
    def case_length_range(self) -> tuple[int, int]:
        if isinstance(self.events_per_case, int):
            return self.events_per_case, self.events_per_case
        return tuple(self.events_per_case)

    def to_dict(self) -> dict[str, Any]:
        return {
            "cases": self.cases,
            "events_per_case": self.events_per_case,
            "duplicate_timestamp_rate": self.duplicate_timestamp_rate,
            "attributes": [a.to_dict() for a in self.attributes],
            "seed": self.seed,
            "max_tie_group": self.max_tie_group,
        }


def log_schema(spec: LogSpec) -> Schema:
    fixed = [Attribute(n, Domain.INTEGER) for n in (CASE_ATTR, EVENT_ATTR, TIME_ATTR)]
    return Schema(tuple(fixed + [Attribute(a.name, a.domain) for a in spec.attributes]))


def _time_groups(rng: random.Random, length: int, spec: LogSpec, start: int) -> list[int]:
    """Time of every event of one case, non-decreasing."""
    times: list[int] = []
    group = 0
    for _ in range(length):
        tie = (
            times
            and group < spec.max_tie_group
            and rng.random() < spec.duplicate_timestamp_rate
        )
        if tie:
            times.append(times[-1])
            group += 1
        else:
            times.append(times[-1] + rng.randint(1, 3) if times else start)
            group = 1
    return times


def _attribute_values(
    rng: random.Random, attr: AttributeSpec, times: list[int]
) -> list[Value]:
    length = len(times)
    if attr.attr_class is AttrClass.CASE:
        value = rng.choice(attr.pool)
        if length and rng.random() < attr.absent_rate:
            first_time = rng.choice(sorted(set(times)))
        else:
            first_time = times[0] if times else 0
        return [value if t >= first_time else ABSENT for t in times]
    if attr.attr_class is AttrClass.EVENT:
        values: list[Value] = [ABSENT] * length
        if length and rng.random() >= attr.absent_rate:
            values[rng.randrange(length)] = rng.choice(attr.pool)
        return values
    return [rng.choice(attr.pool) for _ in range(length)]


def generate_log(spec: LogSpec) -> tuple[Relation, RelationMeta]:
    """Generate a log with columns case, event, time and the declared attributes.

    The same spec always yields the same log. Event ids are unique across the
    log and times are integers.
    """
    rng = random.Random(spec.seed)
    low, high = spec.case_length_range
    rows = []
    event_id = 0
    for case in range(1, spec.cases + 1):
        times = _time_groups(rng, rng.randint(low, high), spec, start=rng.randint(0, 5))
        columns = [_attribute_values(rng, attr, times) for attr in spec.attributes]
        for i, time in enumerate(times):
            event_id += 1
            rows.append((case, event_id, time, *(column[i] for column in columns)))

    relation = Relation.from_rows(log_schema(spec), rows)
    meta = RelationMeta(
        attr_classes={a.name: a.attr_class for a in spec.attributes},
        case_attr=CASE_ATTR,
        time_attr=TIME_ATTR,
        stats=compute_stats(relation, CASE_ATTR),
        types={a.name: a.domain for a in relation.schema},
    )
    return relation, meta
