"""Run command: parse, optimize and evaluate a query."""

from __future__ import annotations

import logging

import click
from rich.console import Console

from src.algebra.schema_inference import infer_schema
from src.cli.config import OutputFormat
from src.cli.output import print_relation
from src.cli.shared import (
    catalog_option,
    format_option,
    open_catalog,
    plan_options,
    reported_errors,
    settings,
)
from src.dsl.parser import parse
from src.evaluator.config import EvalConfig
from src.evaluator.engine import evaluate
from src.optimizer.planner import optimize
from src.optimizer.schemas import OptimizeMode

logger = logging.getLogger(__name__)

console = Console()


@click.command()
@click.argument("query")
@catalog_option
@plan_options
@format_option
@click.pass_context
def run(
    ctx: click.Context,
    query: str,
    catalog_dirs: tuple[str, ...],
    output_format: OutputFormat | None,
    **plan: object,
) -> None:
    """Evaluate QUERY against the catalog and print the result.

    Rows are sorted on every column, so the output does not depend on the
    engine or on the plan the optimizer picks.

    \b
    Examples:
      dfq run "Log"
      dfq run "df(case, end_time, Log)" --format csv
      dfq run "project(u.activity, select(d.activity = 'A', df(case, end_time, Log)))"
    """
    config = settings(
        ctx, catalog_dirs=catalog_dirs or None, output_format=output_format, **plan
    )
    cat = open_catalog(config)
    with reported_errors(query):
        expr = parse(query)
        schema = infer_schema(expr, cat)
        chosen = expr
        if config.optimize is not OptimizeMode.OFF:
            choice = optimize(
                expr,
                cat,
                budget=config.budget,
                mode=config.optimize,
                params=config.cost_params(),
                strategy=config.engine,
            )
            chosen = choice.chosen
            logger.debug("evaluating plan after %d rewrite(s)", len(choice.applied_rules))
        result = evaluate(chosen, cat, EvalConfig(df_strategy=config.engine))
    print_relation(result, config.output_format, console, schema)
