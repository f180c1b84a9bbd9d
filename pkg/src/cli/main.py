"""Main CLI entry point for dfq."""

from __future__ import annotations

from pathlib import Path

import click

from src.cli.commands.cost import cost
from src.cli.commands.explain import explain
from src.cli.commands.rules import rules
from src.cli.commands.run import run
from src.cli.commands.validate import validate
from src.cli.config import CliState, configure_logging, load_config
from src.cli.shared import reported_errors


@click.group()
@click.version_option(version="0.1.0")
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages to stderr")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="YAML configuration file (default .dfq/config.yaml when present)",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, config_path: Path | None) -> None:
    """dfq - relational queries over event logs with a directly-follows operator.

    \b
    EXIT CODES:
      0  success
      1  query parse error
      2  schema or type error
      3  missing relation, statistics or declaration; catalog or config load failure
      4  attribute-class or totality violations (validate)
      5  invalid cost parameters

    \b
    COMMANDS:
      dfq run QUERY          Evaluate a query and print the result
      dfq explain QUERY      Show the optimized plan and its estimated cost
      dfq cost ...           Block I/O figures of directly-follows
      dfq validate [NAMES]   Check declared attribute classes
      dfq rules list         List rewrite rules
    """
    configure_logging(verbose)
    with reported_errors():
        ctx.obj = CliState(config=load_config(config_path), verbose=verbose)


cli.add_command(run)
cli.add_command(explain)
cli.add_command(cost)
cli.add_command(validate)
cli.add_command(rules)


if __name__ == "__main__":
    cli()
