"""Brute-force directly-follows relation, independent of the evaluator."""

from __future__ import annotations

from src.relation.errors import AbsentTimestampError
from src.relation.relation import Relation
from src.relation.schema import DOWN, UP
from src.relation.values import ABSENT, Theta, compare


def brute_force_df(log: Relation, case: str, time: str) -> Relation:
    """Pairs (e, f) of one case with e before f and no event of the case in between.

    Follows the nested ``NOT EXISTS`` formulation: for every pair of events
    every third event is checked. Cubic in the log size.

    Raises:
        AbsentTimestampError: If some event has no time value.
    """
    c = log.schema.index_of(case)
    t = log.schema.index_of(time)
    rows = list(log.rows)
    if any(row[t] is ABSENT for row in rows):
        raise AbsentTimestampError(time)

    def same_case(x: tuple, y: tuple) -> bool:
        return compare(Theta.EQ, x[c], y[c])

    def before(x: tuple, y: tuple) -> bool:
        return compare(Theta.LT, x[t], y[t])

    pairs = set()
    for e in rows:
        for f in rows:
            if not (same_case(e, f) and before(e, f)):
                continue
            between = any(same_case(g, e) and before(e, g) and before(g, f) for g in rows)
            if not between:
                pairs.add(e + f)
    schema = log.schema.prefixed(DOWN).concat(log.schema.prefixed(UP))
    return Relation.from_rows(schema, pairs)
