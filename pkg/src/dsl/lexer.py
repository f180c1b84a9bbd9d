"""Tokenizer for the query language."""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Any

from src.dsl.errors import ParseError, SourceSpan
from src.relation.values import Timestamp

KEYWORDS = frozenset(
    {
        "select",
        "project",
        "rename",
        "prefix",
        "product",
        "join",
        "union",
        "intersect",
        "minus",
        "df",
    }
)


class TokenKind(Enum):
    IDENT = "identifier"
    TIMESTAMP = "timestamp"
    DECIMAL = "decimal"
    INTEGER = "integer"
    STRING = "string"
    ARROW = "'->'"
    COMPARE = "comparison operator"
    NOT = "'!'"
    AND = "'&'"
    OR = "'|'"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    EOF = "end of input"


# Alternatives are tried in order; timestamps must precede plain numbers.
_PATTERNS = [
    ("WS", r"\s+"),
    ("TIMESTAMP", r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}(?::\d{2}(?:\.\d+)?)?(?:Z|[+-]\d{2}:\d{2})?"),
    ("CLOCK", r"\d{1,2}:\d{2}"),
    ("DECIMAL", r"-?\d+\.\d+"),
    ("INTEGER", r"-?\d+"),
    ("STRING", r"'(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\""),
    ("ARROW", r"->"),
    ("COMPARE", r"<=|>=|!=|=|<|>"),
    ("NOT", r"!"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _PATTERNS))
_ESCAPE = re.compile(r"\\(.)", re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int  # character offsets
    end: int
    value: Any = None

    def describe(self) -> str:
        return "end of input" if self.kind is TokenKind.EOF else repr(self.text)


def byte_span(text: str, start: int, end: int) -> SourceSpan:
    """Convert character offsets into a byte-offset span."""
    head = len(text[:start].encode("utf-8"))
    return SourceSpan(head, head + len(text[start:end].encode("utf-8")))


def tokenize(text: str) -> list[Token]:
    """Split query text into tokens, ending with an EOF token.

    Raises:
        ParseError: On a character that starts no token or a malformed literal.
    """
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _MASTER.match(text, pos)
        if match is None:
            raise ParseError(byte_span(text, pos, pos + 1), ["token"], repr(text[pos]))
        group = match.lastgroup
        lexeme = match.group()
        end = match.end()
        if group != "WS":
            tokens.append(_make_token(text, group, lexeme, pos, end))
        pos = end
    tokens.append(Token(TokenKind.EOF, "", len(text), len(text)))
    return tokens


def _make_token(text: str, group: str, lexeme: str, start: int, end: int) -> Token:
    if group in ("TIMESTAMP", "CLOCK"):
        try:
            value = Timestamp.parse(lexeme)
        except ValueError:
            raise ParseError(byte_span(text, start, end), ["timestamp"], repr(lexeme)) from None
        return Token(TokenKind.TIMESTAMP, lexeme, start, end, value)
    if group == "DECIMAL":
        return Token(TokenKind.DECIMAL, lexeme, start, end, Decimal(lexeme))
    if group == "INTEGER":
        return Token(TokenKind.INTEGER, lexeme, start, end, int(lexeme))
    if group == "STRING":
        return Token(TokenKind.STRING, lexeme, start, end, _ESCAPE.sub(r"\1", lexeme[1:-1]))
    return Token(TokenKind[group], lexeme, start, end)
