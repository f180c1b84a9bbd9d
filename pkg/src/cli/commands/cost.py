"""Cost command: block I/O figures of the directly-follows operator."""

from __future__ import annotations

import io
import math
from fractions import Fraction
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from src.cli.shared import error_console, reported_errors
from src.cost.model import composite_df_cost, execution_order_cost, strategy_costs
from src.cost.schemas import (
    Accounting,
    CostParams,
    ExecutionOrder,
    Strategy,
    SweepAxis,
    as_fraction,
)
from src.cost.sweep import detect_jumps, fit_thresholds, sweep, sweep_range, write_sweep_csv
from src.relation.errors import CostParamsError

console = Console()


def _number(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CostParamsError(f"not a number: {text!r}") from None


def _show(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{float(value):g}"


@click.command()
@click.option("--N", "n", type=int, help="Events in the log")
@click.option("--V", "v", type=int, help="Cases in the log")
@click.option("--B", "b", type=int, help="Blocks holding the log (instead of --N)")
@click.option("--F", "--block-factor", "f", type=int, default=50, show_default=True,
              help="Tuples per block")
@click.option("--M", "--memory-blocks", "m", type=int, help="Memory in blocks (default unlimited)")
@click.option("--Q", "q", default="0.1", show_default=True, help="Fraction of selected cases")
@click.option("--tuple-bytes", type=int, default=80, show_default=True, help="Bytes per tuple")
@click.option("--accounting", type=click.Choice([a.value for a in Accounting]),
              default=Accounting.GENEROUS.value, show_default=True,
              help="Whether the resident log counts against memory")
@click.option("--select-first", "order", flag_value=ExecutionOrder.SELECT_FIRST.value,
              help="Order of cost with the selection before directly-follows")
@click.option("--select-last", "order", flag_value=ExecutionOrder.SELECT_LAST.value,
              help="Order of cost with the selection after directly-follows")
@click.option("--in-memory/--on-disk", "in_memory", default=None,
              help="Whether intermediates fit in memory (default both)")
@click.option("--strategies", is_flag=True, help="Compare ways of obtaining directly-follows pairs")
@click.option("--sweep", "axis", type=click.Choice([a.value for a in SweepAxis]),
              help="Vary one parameter and print the composite cost as CSV")
@click.option("--start", help="First sweep value")
@click.option("--stop", help="Last sweep value (inclusive)")
@click.option("--step", default="1", show_default=True, help="Sweep step")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the sweep CSV to a file instead of stdout")
def cost(
    n: int | None,
    v: int | None,
    b: int | None,
    f: int,
    m: int | None,
    q: str,
    tuple_bytes: int,
    accounting: str,
    order: str | None,
    in_memory: bool | None,
    strategies: bool,
    axis: str | None,
    start: str | None,
    stop: str | None,
    step: str,
    out: Path | None,
) -> None:
    """Estimate block reads of directly-follows and its combination with selection.

    Without a mode flag, prints the composite operator's cost breakdown.

    \b
    Examples:
      dfq cost --N 10000 --V 500 --M 200
      dfq cost --N 10000 --V 500 --select-first --in-memory --Q 0.1
      dfq cost --strategies --B 200
      dfq cost --V 10000 --M 1000000 --sweep events_per_case --start 2 --stop 100
    """
    with reported_errors():
        if axis is not None:
            axis_enum = SweepAxis(axis)
            if v is None:
                raise CostParamsError("a sweep needs --V")
            first = _number(start)
            if first is None or stop is None:
                raise CostParamsError("a sweep needs --start and --stop")
            if n is None and axis_enum is SweepAxis.EVENTS_PER_CASE:
                n = v  # replaced at every point of the sweep
            p = _params(n, v, b, f, m, q, tuple_bytes, accounting)
            _print_sweep(p, axis_enum, sweep_range(first, _number(stop), _number(step)), out)
            return

        p = _params(n, v, b, f, m, q, tuple_bytes, accounting)
        if strategies:
            _print_strategies(p, has_cases=v is not None)
        elif order is not None:
            modes = (True, False) if in_memory is None else (in_memory,)
            if v is None and False in modes:
                raise CostParamsError("the on-disk order of cost needs --V")
            _print_orders(p, ExecutionOrder(order), modes)
        else:
            if v is None:
                raise CostParamsError("the directly-follows cost needs --V")
            _print_breakdown(p)


def _params(
    n: int | None,
    v: int | None,
    b: int | None,
    f: int,
    m: int | None,
    q: str,
    tuple_bytes: int,
    accounting: str,
) -> CostParams:
    if n is None and b is None:
        raise CostParamsError("give the log size with --N or --B")
    if n is not None and b is not None and f >= 1 and math.ceil(Fraction(n, f)) != b:
        raise CostParamsError(f"--B {b} disagrees with --N {n} and --F {f}")
    return CostParams(
        n=n if n is not None else b * f,
        v=v if v is not None else 1,
        f=f,
        m=m,
        q=_number(q),
        tuple_bytes=tuple_bytes,
        accounting=Accounting(accounting),
    )


def _print_breakdown(p: CostParams) -> None:
    estimate = composite_df_cost(p)
    table = Table(title="Composite directly-follows cost", show_header=True)
    table.add_column("Component")
    table.add_column("Blocks", justify="right")
    for component, blocks in estimate.rounded().items():
        if component in ("scan", "other"):
            continue
        table.add_row(component, str(blocks))
    table.add_row("[bold]total[/bold]", f"[bold]{estimate.total_blocks}[/bold]")
    console.print(table)
    memory = "unlimited" if p.m is None else str(p.m)
    console.print(f"B={p.b}, N/V={_show(p.events_per_case)}, M={memory}, "
                  f"tuple size {p.tuple_bytes} bytes")


def _print_orders(p: CostParams, order: ExecutionOrder, modes: tuple[bool, ...]) -> None:
    table = Table(title="Order of cost", show_header=True)
    table.add_column("Plan")
    table.add_column("Intermediates")
    table.add_column("Blocks", justify="right")
    for in_memory in modes:
        where = "in memory" if in_memory else "on disk"
        table.add_row(order.value, where, _show(execution_order_cost(order, in_memory, p)))
    console.print(table)


def _print_strategies(p: CostParams, has_cases: bool) -> None:
    table = Table(title=f"Strategies for B={p.b}", show_header=True)
    table.add_column("Strategy")
    table.add_column("Order")
    table.add_column("Blocks", justify="right")
    for item in strategy_costs(p):
        if item.strategy is Strategy.COMPOSITE_OPERATOR and not has_cases:
            table.add_row(item.strategy.value, item.order, "n/a (needs --V)")
            continue
        table.add_row(item.strategy.value, item.order, str(item.to_dict()["blocks"]))
    console.print(table)


def _print_sweep(p: CostParams, axis: SweepAxis, values: list[Fraction], out: Path | None) -> None:
    points = sweep(p, axis, values)
    if out is None:
        buffer = io.StringIO()
        write_sweep_csv(points, buffer)
        click.echo(buffer.getvalue(), nl=False)
    else:
        with out.open("w", encoding="utf-8", newline="") as handle:
            write_sweep_csv(points, handle)
        console.print(f"[green]Wrote {len(points)} points to {out}[/green]")

    jumps = ", ".join(_show(x) for x in detect_jumps(points)) or "none"
    fitted = ", ".join(
        f"{name} at {'never' if x is None else f'{x:.2f}'}"
        for name, x in fit_thresholds(p, axis).items()
    )
    error_console.print(f"Cost jumps at {axis.value} = {jumps}; spill thresholds: {fitted}")
