"""Options, exit codes and error reporting shared by the commands."""

from __future__ import annotations

import contextlib
import logging
from typing import Callable, Iterator, NoReturn

import click
from rich.console import Console
from rich.markup import escape

from src.algebra.errors import ExpansionError, SchemaError
from src.catalog.loader import load_catalog
from src.catalog.schemas import Catalog
from src.cli.config import CATALOG_ENV, CliConfig, CliState, ConfigError, OutputFormat
from src.cost.schemas import Accounting
from src.dsl.errors import ParseError
from src.evaluator.config import DfStrategy
from src.optimizer.schemas import OptimizeMode
from src.relation.errors import (
    AbsentTimestampError,
    CatalogLoadError,
    CostParamsError,
    DfqError,
    MissingDeclarationError,
    MissingRelationError,
    MissingStatsError,
    SchemaMismatchError,
    ValueTypeError,
)

logger = logging.getLogger(__name__)

error_console = Console(stderr=True)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SCHEMA = 2
EXIT_MISSING = 3
EXIT_VIOLATIONS = 4
EXIT_COST_PARAMS = 5

# First match wins.
EXIT_CODES: tuple[tuple[type[DfqError], int], ...] = (
    (ParseError, EXIT_PARSE),
    (SchemaError, EXIT_SCHEMA),
    (SchemaMismatchError, EXIT_SCHEMA),
    (ValueTypeError, EXIT_SCHEMA),
    (AbsentTimestampError, EXIT_SCHEMA),
    (ExpansionError, EXIT_SCHEMA),
    (MissingRelationError, EXIT_MISSING),
    (MissingStatsError, EXIT_MISSING),
    (MissingDeclarationError, EXIT_MISSING),
    (CatalogLoadError, EXIT_MISSING),
    (ConfigError, EXIT_MISSING),
    (CostParamsError, EXIT_COST_PARAMS),
)


def exit_code_for(error: DfqError) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    return EXIT_SCHEMA


def fail(message: str, code: int) -> NoReturn:
    error_console.print(f"[red]Error:[/red] {escape(message)}")
    raise SystemExit(code)


@contextlib.contextmanager
def reported_errors(query: str | None = None) -> Iterator[None]:
    """Turn a dfq error into a message on stderr and its exit code."""
    try:
        yield
    except DfqError as e:
        code = exit_code_for(e)
        logger.debug("%s mapped to exit code %d", type(e).__name__, code)
        if isinstance(e, ParseError) and query is not None:
            error_console.print(f"[red]Error:[/red] parse error {escape(str(e))}")
            error_console.print(escape(e.caret(query)), highlight=False)
            raise SystemExit(code)
        fail(str(e), code)


def settings(ctx: click.Context, **flags: object) -> CliConfig:
    """The group's configuration with this command's flags applied."""
    state = ctx.find_object(CliState) or CliState()
    with reported_errors():
        return state.config.merged(**flags)


def open_catalog(config: CliConfig) -> Catalog:
    if not config.catalog_dirs:
        fail(f"no catalog directory; pass --catalog-dir or set {CATALOG_ENV}", EXIT_MISSING)
    with reported_errors():
        return load_catalog(*config.catalog_dirs)


def _enum_option(*decls: str, enum: type, help: str) -> Callable:
    """Option restricted to the values of ``enum``, converted to a member."""
    return click.option(
        *decls,
        type=click.Choice([member.value for member in enum]),
        callback=lambda ctx, param, value: enum(value) if value else None,
        help=help,
    )


def catalog_option(f: Callable) -> Callable:
    return click.option(
        "--catalog-dir",
        "catalog_dirs",
        multiple=True,
        envvar=CATALOG_ENV,
        type=click.Path(file_okay=False),
        help=f"Directory of CSV relations (repeatable; default ${CATALOG_ENV})",
    )(f)


def plan_options(f: Callable) -> Callable:
    """Options selecting how a query is optimized and priced.

    Each option is named after the :class:`CliConfig` field it overrides.
    """
    options = [
        _enum_option("--engine", enum=DfStrategy, help="Directly-follows operator"),
        _enum_option("--optimize", enum=OptimizeMode, help="Plan search"),
        click.option("--budget", type=click.IntRange(min=1), help="Trees the search may expand"),
        click.option(
            "--block-factor", "-F", type=click.IntRange(min=1), help="Tuples per block (F)"
        ),
        click.option(
            "--memory-blocks", "-M", type=click.IntRange(min=1), help="Memory in blocks (M)"
        ),
        _enum_option("--accounting", enum=Accounting, help="Memory accounting"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def format_option(f: Callable) -> Callable:
    return _enum_option(
        "--format", "output_format", enum=OutputFormat, help="Output format (default table)"
    )(f)
