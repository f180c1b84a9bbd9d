"""Errors raised when a rewrite rule cannot be applied."""

from __future__ import annotations

from src.algebra.errors import Path, format_path
from src.relation.errors import DfqError


class PatternMismatch(DfqError):
    """The node at the given path does not have the rule's shape."""

    def __init__(self, rule: str, path: Path, message: str) -> None:
        self.rule = rule
        self.path = tuple(path)
        self.message = message
        super().__init__(f"{rule} does not match at {format_path(self.path)}: {message}")


class SideConditionUnverified(DfqError):
    """The pattern matches but the catalog does not establish a required fact."""

    def __init__(self, rule: str, path: Path, fact: str) -> None:
        self.rule = rule
        self.path = tuple(path)
        self.fact = fact
        super().__init__(f"{rule} at {format_path(self.path)} needs: {fact}")
