"""CLI configuration: YAML file defaults overridden by command-line flags."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from rich.console import Console
from rich.logging import RichHandler

from src.cost.schemas import Accounting, CostParams, as_fraction
from src.evaluator.config import DfStrategy
from src.optimizer.planner import DEFAULT_BUDGET
from src.optimizer.schemas import OptimizeMode
from src.relation.errors import DfqError

DEFAULT_CONFIG_PATH = Path(".dfq") / "config.yaml"
CATALOG_ENV = "DFQ_CATALOG_DIR"


class ConfigError(DfqError):
    """The configuration file is unreadable or holds an invalid value."""


class OutputFormat(Enum):
    TABLE = "table"
    CSV = "csv"
    JSON_LINES = "json-lines"


@dataclass(frozen=True)
class CliConfig:
    """Settings shared by the query commands.

    Attributes:
        catalog_dirs: Directories whose CSV files form the catalog.
        block_factor: Tuples per block (F).
        memory_blocks: Memory size in blocks (M); None means unlimited.
        tuple_bytes: Tuple size, reported alongside cost figures.
        selectivity: Default selection fraction (Q) for conditions without samples.
        accounting: Whether resident operands count against memory.
        engine: How directly-follows nodes are evaluated.
        optimize: Plan search strategy.
        budget: Trees the exhaustive search may expand.
        output_format: How result relations are printed.
    """

    catalog_dirs: tuple[str, ...] = ()
    block_factor: int = 50
    memory_blocks: int | None = None
    tuple_bytes: int = 80
    selectivity: Fraction = Fraction(1, 10)
    accounting: Accounting = Accounting.GENEROUS
    engine: DfStrategy = DfStrategy.NATIVE
    optimize: OptimizeMode = OptimizeMode.HEURISTIC
    budget: int = DEFAULT_BUDGET
    output_format: OutputFormat = OutputFormat.TABLE

    def cost_params(self, n: int = 1, v: int = 1) -> CostParams:
        return CostParams(
            n=n,
            v=v,
            f=self.block_factor,
            m=self.memory_blocks,
            q=self.selectivity,
            tuple_bytes=self.tuple_bytes,
            accounting=self.accounting,
        )

    def merged(self, **overrides: Any) -> CliConfig:
        """Copy with every override that is not None applied."""
        known = {f.name for f in fields(self)}
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - known
        if unknown:
            raise ConfigError(f"unknown setting(s): {', '.join(sorted(unknown))}")
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "catalog_dirs": list(self.catalog_dirs),
            "block_factor": self.block_factor,
            "memory_blocks": self.memory_blocks,
            "tuple_bytes": self.tuple_bytes,
            "selectivity": str(self.selectivity),
            "accounting": self.accounting.value,
            "engine": self.engine.value,
            "optimize": self.optimize.value,
            "budget": self.budget,
            "output_format": self.output_format.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CliConfig:
        dirs = data.get("catalog_dirs", [])
        if isinstance(dirs, str):
            dirs = [dirs]
        memory = data.get("memory_blocks")
        return cls(
            catalog_dirs=tuple(str(d) for d in dirs),
            block_factor=int(data.get("block_factor", 50)),
            memory_blocks=None if memory is None else int(memory),
            tuple_bytes=int(data.get("tuple_bytes", 80)),
            selectivity=as_fraction(data.get("selectivity", Fraction(1, 10))),
            accounting=Accounting(data.get("accounting", "generous")),
            engine=DfStrategy(data.get("engine", "native")),
            optimize=OptimizeMode(data.get("optimize", "heuristic")),
            budget=int(data.get("budget", DEFAULT_BUDGET)),
            output_format=OutputFormat(data.get("output_format", "table")),
        )


def load_config(path: Path | None = None) -> CliConfig:
    """Read the YAML configuration file.

    Without an explicit path, ``.dfq/config.yaml`` is used when it exists.

    Raises:
        ConfigError: If the file cannot be read or a value is invalid.
    """
    if path is None and DEFAULT_CONFIG_PATH.exists():
        path = DEFAULT_CONFIG_PATH
    data: dict[str, Any] = {}
    if path is not None:
        try:
            data = yaml.safe_load(Path(path).read_text()) or {}
        except (yaml.YAMLError, OSError) as e:
            raise ConfigError(f"cannot read {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping at the top level")
    try:
        return CliConfig.from_dict(data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}") from e


def configure_logging(verbose: bool = False) -> None:
    """Send library log records to stderr through rich."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@dataclass
class CliState:
    """Object carried on the click context from the group to its commands."""

    config: CliConfig = field(default_factory=CliConfig)
    verbose: bool = False
