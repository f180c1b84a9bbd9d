"""Recursive-descent parser for the query language.

Grammar::

    expr       := IDENT | name "(" args ")"
    select     := "select" "(" cond "," expr ")"
    project    := "project" "(" attr {"," attr} "," expr ")"
    rename     := "rename" "(" attr "->" attr "," expr ")"
    prefix     := "prefix" "(" IDENT "," expr ")"
    join       := "join" "(" cond "," expr "," expr ")"
    binary     := ("product" | "union" | "intersect" | "minus") "(" expr "," expr ")"
    df         := "df" "(" attr "," attr "," expr ")"
    cond       := conj {"|" conj}
    conj       := unary {"&" unary}
    unary      := "!" unary | "(" cond ")" | operand COMPARE operand
    operand    := attr | INTEGER | DECIMAL | STRING | TIMESTAMP

Attribute names may carry the ``d.``/``u.`` prefixes of a directly-follows
result, e.g. ``u.activity`` or ``d.u.case`` after nesting.
Operator names are keywords only directly before ``(``; anywhere else they are
ordinary relation or attribute names.
"""

from __future__ import annotations

from typing import Callable

from src.algebra.conditions import And, Attr, Comparison, Condition, Const, Not, Operand, Or
from src.algebra.expr import (
    AlgebraExpr,
    BaseRel,
    DirectlyFollows,
    Intersect,
    Join,
    Minus,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
    Union,
)
from src.dsl.errors import ParseError
from src.dsl.lexer import KEYWORDS, Token, TokenKind, byte_span, tokenize
from src.relation.values import Theta

_BINARY: dict[str, Callable[[AlgebraExpr, AlgebraExpr], AlgebraExpr]] = {
    "product": Product,
    "union": Union,
    "intersect": Intersect,
    "minus": Minus,
}
_LITERALS = (TokenKind.INTEGER, TokenKind.DECIMAL, TokenKind.STRING, TokenKind.TIMESTAMP)


class Parser:
    """Single-use parser over one query text."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # token helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.pos += 1
        return token

    def fail(self, expected: list[str], token: Token | None = None) -> ParseError:
        token = token or self.peek()
        return ParseError(byte_span(self.text, token.start, token.end), expected, token.describe())

    def expect(self, kind: TokenKind) -> Token:
        if self.peek().kind is not kind:
            raise self.fail([kind.value])
        return self.advance()

    def is_call(self) -> bool:
        """An operator name is a keyword only when a parenthesis follows it."""
        token = self.peek()
        return (
            token.kind is TokenKind.IDENT
            and token.text in KEYWORDS
            and self.peek(1).kind is TokenKind.LPAREN
        )

    def name(self, what: str) -> str:
        token = self.peek()
        if token.kind is not TokenKind.IDENT:
            raise self.fail([what])
        return self.advance().text

    # expressions

    def parse(self) -> AlgebraExpr:
        expr = self.expr()
        self.expect(TokenKind.EOF)
        return expr

    def expr(self) -> AlgebraExpr:
        if self.is_call():
            return self.call()
        return BaseRel(self.name("relation name or operator"))

    def call(self) -> AlgebraExpr:
        keyword = self.advance().text
        self.expect(TokenKind.LPAREN)
        if keyword == "select":
            cond = self.condition()
            self.expect(TokenKind.COMMA)
            result: AlgebraExpr = Select(cond, self.expr())
        elif keyword == "project":
            result = self.project_args()
        elif keyword == "rename":
            old = self.name("attribute")
            self.expect(TokenKind.ARROW)
            new = self.name("attribute")
            self.expect(TokenKind.COMMA)
            result = RenameAttr(old, new, self.expr())
        elif keyword == "prefix":
            prefix = self.name("prefix")
            self.expect(TokenKind.COMMA)
            result = RenamePrefix(prefix, self.expr())
        elif keyword == "join":
            cond = self.condition()
            self.expect(TokenKind.COMMA)
            left = self.expr()
            self.expect(TokenKind.COMMA)
            result = Join(cond, left, self.expr())
        elif keyword == "df":
            case = self.name("attribute")
            self.expect(TokenKind.COMMA)
            time = self.name("attribute")
            self.expect(TokenKind.COMMA)
            result = DirectlyFollows(case, time, self.expr())
        else:
            left = self.expr()
            self.expect(TokenKind.COMMA)
            result = _BINARY[keyword](left, self.expr())
        self.expect(TokenKind.RPAREN)
        return result

    def project_args(self) -> AlgebraExpr:
        # The last argument is the operand; an attribute is any identifier followed by a comma.
        names: list[str] = []
        while True:
            token = self.peek()
            if token.kind is TokenKind.IDENT and self.peek(1).kind is TokenKind.COMMA:
                names.append(self.advance().text)
                self.advance()
                continue
            if not names:
                raise self.fail(["attribute"])
            return Project(tuple(names), self.expr())

    # conditions

    def condition(self) -> Condition:
        cond = self.conjunction()
        while self.peek().kind is TokenKind.OR:
            self.advance()
            cond = Or(cond, self.conjunction())
        return cond

    def conjunction(self) -> Condition:
        cond = self.unary()
        while self.peek().kind is TokenKind.AND:
            self.advance()
            cond = And(cond, self.unary())
        return cond

    def unary(self) -> Condition:
        token = self.peek()
        if token.kind is TokenKind.NOT:
            self.advance()
            return Not(self.unary())
        if token.kind is TokenKind.LPAREN:
            self.advance()
            cond = self.condition()
            self.expect(TokenKind.RPAREN)
            return cond
        lhs = self.operand(["'!'", "'('", "attribute", "literal"])
        op = self.expect(TokenKind.COMPARE)
        rhs = self.operand(["attribute", "literal"])
        return Comparison(lhs, Theta(op.text), rhs)

    def operand(self, expected: list[str]) -> Operand:
        token = self.peek()
        if token.kind in _LITERALS:
            self.advance()
            return Const(token.value)
        if token.kind is TokenKind.IDENT:
            self.advance()
            return Attr(token.text)
        raise self.fail(expected)


def parse(text: str) -> AlgebraExpr:
    """Parse a query into an expression tree.

    Raises:
        ParseError: At the first token that does not fit the grammar.
    """
    return Parser(text).parse()


def parse_condition(text: str) -> Condition:
    """Parse a standalone condition, e.g. a selectivity key in a catalog sidecar."""
    parser = Parser(text)
    cond = parser.condition()
    parser.expect(TokenKind.EOF)
    return cond
