"""Block I/O cost formulas for the directly-follows operator.

All arithmetic is exact (:class:`fractions.Fraction`); values are rounded up
to whole blocks only when reported. ``n`` events per log, ``v`` cases,
``f`` tuples per block and ``m`` memory blocks, with ``m=None`` meaning
memory is unlimited.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from src.cost.schemas import (
    DF_COMPONENTS,
    Accounting,
    CostEstimate,
    CostParams,
    ExecutionOrder,
    Number,
    Strategy,
    StrategyCost,
)
from src.relation.errors import CostParamsError

logger = logging.getLogger(__name__)


def blocks(tuples: Number, f: Number) -> int:
    """Blocks needed to store ``tuples`` tuples, ``f`` per block."""
    return math.ceil(Fraction(tuples) / Fraction(f))


def fits(size: Number, m: int | None) -> bool:
    return m is None or size <= m


def bnl_cost(b_r: Number, b_s: Number, m: int | None) -> Fraction:
    """Block nested loop join of ``b_r`` and ``b_s`` blocks with ``m`` blocks of memory.

    ``b_r + b_s`` when either operand fits in memory, otherwise
    ``b_r + (b_s / m) * b_r`` with ``b_r`` as the outer operand.
    """
    b_r, b_s = Fraction(b_r), Fraction(b_s)
    if m is None or min(b_r, b_s) <= m:
        return b_r + b_s
    return b_r + (b_s / m) * b_r


def following_pairs(n: Number, v: Number) -> Fraction:
    """Pairs of events of one case where the first precedes the second.

    Every case holds ``n / v`` events and contributes ``k (k - 1) / 2`` pairs.
    """
    n, v = Fraction(n), Fraction(v)
    if v == 0:
        return Fraction(0)
    k = n / v
    return max(Fraction(0), v * k * (k - 1) / 2)


def indirect_pairs(n: Number, v: Number) -> Fraction:
    """Following pairs with at least one event of the case in between."""
    n, v = Fraction(n), Fraction(v)
    if v == 0:
        return Fraction(0)
    return max(Fraction(0), following_pairs(n, v) - v * (n / v - 1))


def df_components(
    n: Number,
    v: Number,
    f: Number,
    m: int | None,
    accounting: Accounting = Accounting.GENEROUS,
) -> dict[str, Fraction]:
    """The five components of the composite directly-follows cost.

    ``join1`` builds the following pairs, ``result1`` writes them out,
    ``join2`` joins them with the log again, ``result2`` writes the pairs
    that have an event in between and ``minus`` subtracts the two results.
    A result costs nothing while it fits in memory; under strict accounting
    the log's own blocks are not available to it.
    """
    b = blocks(n, f)
    pair_blocks = 2 * following_pairs(n, v) / Fraction(f)
    between_blocks = 2 * indirect_pairs(n, v) / Fraction(f)
    free = None if m is None else (m - b if accounting is Accounting.STRICT else m)

    result1 = Fraction(0) if fits(pair_blocks, free) else pair_blocks
    if fits(b, m):
        join1, join2 = Fraction(b), Fraction(0)
    else:
        join1 = bnl_cost(b, b, m)
        join2 = b + (pair_blocks / m) * b
    if fits(between_blocks, free):
        result2 = minus = Fraction(0)
    else:
        result2 = between_blocks
        minus = pair_blocks + (pair_blocks / m) * between_blocks
    logger.debug("df cost: %s pair blocks, %s in-between blocks", pair_blocks, between_blocks)
    values = (join1, result1, join2, result2, minus)
    return dict(zip(DF_COMPONENTS, values))


def composite_df_cost(p: CostParams) -> CostEstimate:
    """Cost of evaluating the composite directly-follows expansion over the log."""
    estimate = CostEstimate()
    for name, value in df_components(p.n, p.v, p.f, p.m, p.accounting).items():
        estimate.add(name, value)
    return estimate


def order_of_cost(p: CostParams) -> Fraction:
    """Order of the composite cost when intermediates spill: ``(N^2/V/F/M) * (N^2/V/F)``.

    Raises:
        CostParamsError: If memory is unlimited.
    """
    if p.m is None:
        raise CostParamsError("order of cost needs a finite memory size M")
    pair_blocks = Fraction(p.n * p.n, p.v) / p.f
    return pair_blocks / p.m * pair_blocks


def execution_order_cost(order: ExecutionOrder, in_memory: bool, p: CostParams) -> Fraction:
    """Cost order of a selection combined with directly-follows.

    Reading the log once costs ``B``; spilling intermediates multiplies that
    by the squared case length. Selecting first scales both by ``Q``.
    """
    cost = Fraction(p.b)
    if not in_memory:
        cost *= p.events_per_case**2
    if order is ExecutionOrder.SELECT_FIRST:
        cost *= p.q
    return cost


def strategy_costs(p: CostParams) -> list[StrategyCost]:
    """Blocks read by each way of obtaining directly-follows pairs."""
    b = Fraction(p.b)
    return [
        StrategyCost(Strategy.INTERMEDIATE_STORAGE, "3 * B", 3 * b),
        StrategyCost(Strategy.DATABASE_CONNECTION, "B", b),
        StrategyCost(Strategy.NATIVE_OPERATOR, "B", b),
        StrategyCost(
            Strategy.COMPOSITE_OPERATOR, "(N^2/V/F/M) * (N^2/V/F)", composite_df_cost(p).total
        ),
    ]


def selected_params(p: CostParams) -> CostParams:
    """Parameters of the log left after selecting a fraction ``Q`` of its cases."""
    n = max(1, math.ceil(p.q * p.n))
    v = max(1, min(n, math.ceil(p.q * p.v)))
    return p.evolve(n=n, v=v)
