"""Rules commands: browse the rewrite-rule catalog."""

from __future__ import annotations

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.cli.shared import fail
from src.rules.engine import get_rule, rule_catalog

console = Console()


@click.group()
def rules() -> None:
    """Rewrite rules known to the optimizer."""
    pass


@rules.command("list")
@click.option("--propositions", is_flag=True, help="Only rules involving directly-follows")
def list_rules(propositions: bool) -> None:
    """List every rewrite rule."""
    table = Table(show_header=True, title="Rewrite rules")
    table.add_column("ID", style="cyan")
    table.add_column("Title")
    table.add_column("Direction")
    table.add_column("Side conditions")

    for rule in rule_catalog():
        if propositions and not rule.id.value.startswith("P"):
            continue
        table.add_row(
            rule.id.value,
            escape(rule.title),
            rule.direction.arrow,
            ", ".join(rule.side_conditions) or "[dim]none[/dim]",
        )
    console.print(table)


@rules.command("show")
@click.argument("rule_id")
def show_rule(rule_id: str) -> None:
    """Show one rule in detail.

    RULE_ID is a rule identifier such as E5 or P17.
    """
    try:
        rule = get_rule(rule_id)
    except KeyError:
        fail(f"Rule '{rule_id}' not found", 1)

    console.print(f"[bold]{rule.id.value}[/bold] {escape(rule.title)}")
    console.print(f"  Left:      {escape(rule.left)}", highlight=False)
    console.print(f"  Right:     {escape(rule.right)}", highlight=False)
    console.print(f"  Direction: {rule.direction.value}")
    if rule.requires:
        console.print(f"  Requires:  {escape(rule.requires)}")
    if rule.side_conditions:
        console.print(f"  Side conditions: {', '.join(rule.side_conditions)}")
    if rule.expanding:
        skipped = ", ".join(d.value for d in rule.expanding)
        console.print(f"  [dim]Left out of plan search: {skipped}[/dim]")
