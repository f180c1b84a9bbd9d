"""Printing relations: rich tables, CSV and JSON lines."""

from __future__ import annotations

import csv
import io
import json

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from src.cli.config import OutputFormat
from src.relation.relation import Relation
from src.relation.schema import Schema
from src.relation.values import json_value, render_value, sort_key


def sorted_rows(relation: Relation, schema: Schema | None = None) -> tuple[list[str], list[tuple]]:
    """Column names and rows in display order.

    Columns follow ``schema`` (the relation's own by default). Rows are sorted
    on every column, Absent before any value.
    """
    schema = schema or relation.schema
    rows = relation.aligned_rows(schema)
    ordered = sorted(rows, key=lambda row: tuple(sort_key(v) for v in row))
    return list(schema.names), ordered


def relation_csv(relation: Relation, schema: Schema | None = None) -> str:
    """CSV text with a header row; Absent cells are empty."""
    names, rows = sorted_rows(relation, schema)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(names)
    for row in rows:
        writer.writerow([render_value(v) for v in row])
    return buffer.getvalue()


def relation_json_lines(relation: Relation, schema: Schema | None = None) -> str:
    """One JSON object per tuple; Absent becomes null."""
    names, rows = sorted_rows(relation, schema)
    lines = [
        json.dumps({n: json_value(v) for n, v in zip(names, row)}, ensure_ascii=False)
        for row in rows
    ]
    return "".join(line + "\n" for line in lines)


def relation_table(relation: Relation, schema: Schema | None = None, title: str = "") -> Table:
    names, rows = sorted_rows(relation, schema)
    table = Table(title=title or None, show_header=True)
    for name in names:
        table.add_column(escape(name))
    for row in rows:
        table.add_row(*(escape(render_value(v)) for v in row))
    return table


def print_relation(
    relation: Relation,
    output_format: OutputFormat,
    console: Console,
    schema: Schema | None = None,
) -> None:
    if output_format is OutputFormat.CSV:
        click.echo(relation_csv(relation, schema), nl=False)
    elif output_format is OutputFormat.JSON_LINES:
        click.echo(relation_json_lines(relation, schema), nl=False)
    else:
        console.print(relation_table(relation, schema))
        console.print(f"[dim]{len(relation)} tuple(s)[/dim]")
