"""CLI commands for dfq."""

from src.cli.commands.cost import cost
from src.cli.commands.explain import explain
from src.cli.commands.rules import rules
from src.cli.commands.run import run
from src.cli.commands.validate import validate

__all__ = ["cost", "explain", "rules", "run", "validate"]
