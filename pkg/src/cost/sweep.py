"""Cost curves over one parameter and the thresholds where they jump."""

from __future__ import annotations

import csv
import logging
import math
from fractions import Fraction
from typing import Iterable, TextIO

from src.cost.model import composite_df_cost, following_pairs, indirect_pairs, selected_params
from src.cost.schemas import (
    DF_COMPONENTS,
    Accounting,
    CostParams,
    Number,
    SweepAxis,
    SweepPoint,
    as_fraction,
)
from src.relation.errors import CostParamsError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("x", *DF_COMPONENTS, "total")


def sweep_range(start: Number, stop: Number, step: Number) -> list[Fraction]:
    """Values from ``start`` to ``stop`` inclusive.

    Raises:
        CostParamsError: If the step is not positive or the range is empty.
    """
    start, stop, step = as_fraction(start), as_fraction(stop), as_fraction(step)
    if step <= 0:
        raise CostParamsError(f"sweep step must be positive, got {step}")
    if stop < start:
        raise CostParamsError(f"sweep range is empty: {start} > {stop}")
    count = math.floor((stop - start) / step) + 1
    return [start + i * step for i in range(count)]


def params_at(p: CostParams, axis: SweepAxis, x: Fraction) -> CostParams:
    """Parameters of one point of a sweep along ``axis``."""
    if axis is SweepAxis.EVENTS_PER_CASE:
        return p.evolve(n=math.ceil(p.v * x))
    if axis is SweepAxis.N:
        return p.evolve(n=math.ceil(x))
    if axis is SweepAxis.M:
        return p.evolve(m=math.ceil(x))
    return selected_params(p.evolve(q=x))


def sweep(p: CostParams, axis: SweepAxis, values: Iterable[Number]) -> list[SweepPoint]:
    """Composite directly-follows cost at each value of ``axis``.

    Every other parameter keeps its value from ``p``. Along ``Q`` the log is
    reduced to the selected cases first.

    Raises:
        CostParamsError: If ``values`` is empty or a point has invalid parameters.
    """
    points = []
    for value in values:
        x = as_fraction(value)
        points.append(SweepPoint(x, composite_df_cost(params_at(p, axis, x))))
    if not points:
        raise CostParamsError("sweep range is empty")
    logger.debug("swept %s over %d points", axis.value, len(points))
    return points


def detect_jumps(points: list[SweepPoint], ratio: Number = 2) -> list[Fraction]:
    """Axis values at which the total grows by at least ``ratio`` over the previous point."""
    ratio = as_fraction(ratio)
    jumps = []
    for before, after in zip(points, points[1:]):
        low = before.estimate.total
        if low > 0 and after.estimate.total / low >= ratio:
            jumps.append(after.x)
    return jumps


def fit_thresholds(p: CostParams, axis: SweepAxis) -> dict[str, float | None]:
    """Axis values where ``result1`` and ``result2`` stop fitting in memory.

    Solved from the fit conditions with the log's block count taken as
    ``N / F`` without rounding. A result spills above the returned value,
    except along ``M`` where it spills below it. None means the result never
    changes between fitting and spilling.

    Thresholds along the case-length axes are roots of quadratics and are
    returned as floats; the cost curves themselves stay exact.
    """
    if p.m is None:
        return {"result1": None, "result2": None}
    strict = p.accounting is Accounting.STRICT
    if axis in (SweepAxis.EVENTS_PER_CASE, SweepAxis.N):
        k = Fraction(p.m * p.f, p.v)
        # Pair blocks are V x (x - 1) / F and in-between blocks V (x - 1) (x - 2) / F;
        # strict accounting adds the log's V x / F blocks to each.
        if strict:
            first = math.sqrt(k)
            second = 1 + math.sqrt(k - 1) if k >= 1 else None
        else:
            first = (1 + math.sqrt(1 + 4 * k)) / 2
            second = first + 1
        scale = p.v if axis is SweepAxis.N else 1
        return {
            "result1": first * scale,
            "result2": None if second is None else second * scale,
        }

    pairs = 2 * following_pairs(p.n, p.v) / p.f
    between = 2 * indirect_pairs(p.n, p.v) / p.f
    resident = Fraction(p.n, p.f) if strict else Fraction(0)
    if axis is SweepAxis.M:
        return {"result1": float(pairs + resident), "result2": float(between + resident)}

    def spill_fraction(size: Fraction) -> float | None:
        total = size + resident
        if total == 0 or p.m / total >= 1:
            return None
        return float(p.m / total)

    return {"result1": spill_fraction(pairs), "result2": spill_fraction(between)}


def write_sweep_csv(points: list[SweepPoint], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for point in points:
        writer.writerow(point.row())
