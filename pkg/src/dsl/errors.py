"""Parse errors with source spans."""

from __future__ import annotations

from dataclasses import dataclass

from src.relation.errors import DfqError


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets ``[start, end)`` into the query text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise ValueError(f"invalid span {self.start}..{self.end}")


class ParseError(DfqError):
    """First failure while parsing a query; there is no recovery."""

    def __init__(self, span: SourceSpan, expected: list[str], found: str) -> None:
        if not expected:
            raise ValueError("a parse error must say what was expected")
        self.span = span
        self.expected = list(expected)
        self.found = found
        super().__init__(str(self))

    def __str__(self) -> str:
        expected = " or ".join(self.expected)
        return f"at byte {self.span.start}: expected {expected}, found {self.found}"

    def caret(self, text: str) -> str:
        """Two-line excerpt marking the span under the query text."""
        encoded = text.encode("utf-8")
        start = len(encoded[: self.span.start].decode("utf-8", errors="ignore"))
        end = len(encoded[: self.span.end].decode("utf-8", errors="ignore"))
        return f"{text}\n{' ' * start}{'^' * max(1, end - start)}"
