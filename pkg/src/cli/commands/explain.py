"""Explain command: show the plan the optimizer picks and what it costs."""

from __future__ import annotations

import json

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.algebra.errors import format_path
from src.algebra.expr import render_tree
from src.cli.shared import (
    catalog_option,
    open_catalog,
    plan_options,
    reported_errors,
    settings,
)
from src.cost.schemas import CostEstimate
from src.dsl.parser import parse
from src.optimizer.planner import optimize
from src.optimizer.schemas import PlanChoice
from src.rules.engine import get_rule

console = Console()


@click.command()
@click.argument("query")
@catalog_option
@plan_options
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@click.pass_context
def explain(
    ctx: click.Context,
    query: str,
    catalog_dirs: tuple[str, ...],
    as_json: bool,
    **plan: object,
) -> None:
    """Show how QUERY would be executed.

    Prints the query tree, the rewrites the optimizer applied, the chosen
    tree and the estimated block reads of both.
    """
    config = settings(ctx, catalog_dirs=catalog_dirs or None, **plan)
    cat = open_catalog(config)
    with reported_errors(query):
        choice = optimize(
            parse(query),
            cat,
            budget=config.budget,
            mode=config.optimize,
            params=config.cost_params(),
            strategy=config.engine,
        )
    if as_json:
        click.echo(json.dumps(choice.to_dict(), indent=2))
        return
    print_report(choice)


def print_report(choice: PlanChoice) -> None:
    console.print(f"[bold]Optimizer:[/bold] {choice.mode.value}")
    if choice.visited:
        note = " (budget exhausted, greedy fallback)" if choice.exhausted else ""
        console.print(f"Trees expanded: {choice.visited}{note}")

    console.print("\n[bold]Original plan[/bold]")
    console.print(escape(render_tree(choice.original)), highlight=False)
    console.print(_cost_table("Original plan cost", choice.est_original))

    if choice.applied_rules:
        table = Table(title="Applied rules", show_header=True)
        table.add_column("#", justify="right")
        table.add_column("Rule", style="cyan")
        table.add_column("Direction")
        table.add_column("Node")
        for number, step in enumerate(choice.applied_rules, start=1):
            rule = get_rule(step.rule)
            table.add_row(
                str(number),
                escape(f"{rule.id.value} {rule.title}"),
                step.direction.arrow,
                format_path(step.path),
            )
        console.print(table)
    else:
        console.print("\n[dim]No rewrites applied[/dim]")

    if choice.blocked:
        console.print("\n[yellow]Blocked rules:[/yellow]")
        for blocked in choice.blocked:
            title = get_rule(blocked.rule).title
            console.print(f"  - {escape(str(blocked))} ({escape(title)})", highlight=False)

    console.print("\n[bold]Chosen plan[/bold]")
    console.print(escape(render_tree(choice.chosen)), highlight=False)
    console.print(_cost_table("Chosen plan cost", choice.est_chosen))

    before = choice.est_original.total_blocks
    after = choice.est_chosen.total_blocks
    color = "green" if choice.improved else "yellow"
    console.print(f"\n[{color}]Estimated cost: {before} -> {after} blocks[/{color}]")


def _cost_table(title: str, estimate: CostEstimate) -> Table:
    table = Table(title=title, show_header=True)
    table.add_column("Node")
    table.add_column("Operator")
    table.add_column("Rows", justify="right")
    table.add_column("Blocks", justify="right")
    for node in estimate.nodes:
        row = node.to_dict()
        table.add_row(row["path"], escape(row["node"]), str(row["rows"]), str(row["blocks"]))
    for component, blocks in estimate.rounded().items():
        if blocks:
            table.add_row("", f"[dim]{component}[/dim]", "", str(blocks))
    table.add_row("", "[bold]total[/bold]", "", f"[bold]{estimate.total_blocks}[/bold]")
    return table
