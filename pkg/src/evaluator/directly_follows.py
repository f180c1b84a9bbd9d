"""Native directly-follows computation by sorted scan."""

from __future__ import annotations

from collections import defaultdict
from itertools import groupby
from operator import itemgetter

from src.relation.errors import AbsentTimestampError, MissingRelationError
from src.relation.relation import Relation
from src.relation.schema import DOWN, UP, Schema
from src.relation.values import ABSENT

LOG_NAME = "_log"


def df_schema(schema: Schema) -> Schema:
    """``d.``-prefixed attributes followed by ``u.``-prefixed attributes."""
    return schema.prefixed(DOWN).concat(schema.prefixed(UP))


def check_times(log: Relation, time: str) -> None:
    """Raise AbsentTimestampError if any event lacks a time value."""
    index = log.schema.index_of(time)
    if any(row[index] is ABSENT for row in log.rows):
        raise AbsentTimestampError(time)


def evaluate_df_native(log: Relation, case: str, time: str) -> Relation:
    """Directly-follows pairs by sorting each case on time.

    Events of a case are grouped by equal time; every event of one group is
    paired with every event of the next group. Events with an absent case
    value belong to no case and produce no pairs.

    Raises:
        AbsentTimestampError: If some event has no time value.
    """
    check_times(log, time)
    case_index = log.schema.index_of(case)
    time_index = log.schema.index_of(time)
    by_case: dict[object, list[tuple]] = defaultdict(list)
    for row in log.rows:
        if row[case_index] is not ABSENT:
            by_case[row[case_index]].append(row)

    pairs = set()
    at_time = itemgetter(time_index)
    for rows in by_case.values():
        rows.sort(key=at_time)
        groups = [list(group) for _, group in groupby(rows, key=at_time)]
        for earlier, later in zip(groups, groups[1:]):
            for down in earlier:
                for up in later:
                    pairs.add(down + up)
    return Relation.from_rows(df_schema(log.schema), pairs)


class SingleLogCatalog:
    """A catalog holding one relation, used to evaluate the composite expansion."""

    def __init__(self, log: Relation, name: str = LOG_NAME) -> None:
        self.name = name
        self.log = log

    def relation(self, name: str) -> Relation:
        if name != self.name:
            raise MissingRelationError(name)
        return self.log

    def schema_of(self, name: str) -> Schema:
        return self.relation(name).schema
