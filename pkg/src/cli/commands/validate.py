"""Validate command: check declared attribute classes against the data."""

from __future__ import annotations

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.catalog.schemas import Catalog
from src.catalog.validation import ClassViolation, validate_classes, verify_totality
from src.cli.shared import EXIT_VIOLATIONS, catalog_option, open_catalog, reported_errors, settings

console = Console()


@click.command()
@click.argument("names", nargs=-1)
@catalog_option
@click.option("--check-totality", is_flag=True, help="Also check declared totality facts")
@click.pass_context
def validate(
    ctx: click.Context, names: tuple[str, ...], catalog_dirs: tuple[str, ...], check_totality: bool
) -> None:
    """Validate attribute classes of the named relations.

    NAMES are relation names; without any, every relation declaring
    attribute classes is checked. Exits with status 4 on violations.
    """
    config = settings(ctx, catalog_dirs=catalog_dirs or None)
    cat = open_catalog(config)
    found = 0
    with reported_errors():
        targets = list(names) or _declared(cat)
        if not targets:
            console.print("[yellow]No relation declares attribute classes[/yellow]")
        for name in targets:
            violations = validate_classes(cat.relation(name), cat.meta_for(name))
            found += len(violations)
            _report(name, violations)
        if check_totality:
            failed = verify_totality(cat)
            found += len(failed)
            for fact in failed:
                console.print(f"[red]Totality fact does not hold:[/red] {escape(str(fact))}")
            if not failed:
                console.print("[green]All totality facts hold[/green]")
    if found:
        raise SystemExit(EXIT_VIOLATIONS)


def _declared(cat: Catalog) -> list[str]:
    return sorted(name for name, meta in cat.meta.items() if meta.attr_classes)


def _report(name: str, violations: list[ClassViolation]) -> None:
    if not violations:
        console.print(f"[green]Relation '{escape(name)}' is valid[/green]")
        return
    table = Table(title=f"Class violations in '{escape(name)}'", show_header=True)
    table.add_column("Attribute", style="cyan")
    table.add_column("Class")
    table.add_column("Case")
    table.add_column("Time")
    table.add_column("Problem")
    for violation in violations:
        row = violation.to_dict()
        columns = ("attribute", "class", "case", "time", "message")
        table.add_row(*(escape(str(row[k])) for k in columns))
    console.print(table)
    console.print(f"[yellow]{len(violations)} violation(s)[/yellow]")
