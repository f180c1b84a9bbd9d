"""Command-line interface for dfq."""

from src.cli.main import cli

__all__ = ["cli"]
