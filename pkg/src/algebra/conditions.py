"""Selection and join conditions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union

from src.relation.schema import prefix_name, strip_prefix
from src.relation.values import Theta, Value, format_literal


@dataclass(frozen=True)
class Attr:
    """Reference to an attribute by name."""

    name: str


@dataclass(frozen=True)
class Const:
    """A literal value."""

    value: Value


Operand = Union[Attr, Const]


@dataclass(frozen=True)
class Comparison:
    lhs: Operand
    theta: Theta
    rhs: Operand

    def mirrored(self) -> Comparison:
        """Same comparison with the operands swapped."""
        return Comparison(self.rhs, self.theta.mirrored, self.lhs)


@dataclass(frozen=True)
class And:
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Or:
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Not:
    operand: Condition


Condition = Union[Comparison, And, Or, Not]


def cmp(lhs: str | Value, theta: Theta | str, rhs: str | Value) -> Comparison:
    """Shorthand: ``cmp("a", "<", 5)``; plain strings on the left are attributes.

    The right-hand side is an attribute only when wrapped in :class:`Attr`,
    so ``cmp("activity", "=", "A")`` compares with the text ``'A'``.
    """
    if isinstance(lhs, (Attr, Const)):
        left = lhs
    else:
        left = Attr(lhs) if isinstance(lhs, str) else Const(lhs)
    right = rhs if isinstance(rhs, (Attr, Const)) else Const(rhs)
    return Comparison(left, Theta(theta) if isinstance(theta, str) else theta, right)


def attrs(cond: Condition) -> frozenset[str]:
    """All attribute names mentioned by a condition."""
    if isinstance(cond, Comparison):
        return frozenset(o.name for o in (cond.lhs, cond.rhs) if isinstance(o, Attr))
    if isinstance(cond, (And, Or)):
        return attrs(cond.left) | attrs(cond.right)
    return attrs(cond.operand)


def comparisons(cond: Condition) -> list[Comparison]:
    if isinstance(cond, Comparison):
        return [cond]
    if isinstance(cond, (And, Or)):
        return comparisons(cond.left) + comparisons(cond.right)
    return comparisons(cond.operand)


def conjuncts(cond: Condition) -> list[Condition]:
    """Flatten nested conjunctions, left to right."""
    if isinstance(cond, And):
        return conjuncts(cond.left) + conjuncts(cond.right)
    return [cond]


def conjoin(parts: Iterable[Condition]) -> Condition:
    """Left-associated conjunction of one or more conditions."""
    items = list(parts)
    if not items:
        raise ValueError("conjoin needs at least one condition")
    result = items[0]
    for item in items[1:]:
        result = And(result, item)
    return result


def map_attrs(cond: Condition, fn: Callable[[str], str]) -> Condition:
    """Condition with every attribute name passed through ``fn``."""
    if isinstance(cond, Comparison):
        return Comparison(_map_operand(cond.lhs, fn), cond.theta, _map_operand(cond.rhs, fn))
    if isinstance(cond, And):
        return And(map_attrs(cond.left, fn), map_attrs(cond.right, fn))
    if isinstance(cond, Or):
        return Or(map_attrs(cond.left, fn), map_attrs(cond.right, fn))
    return Not(map_attrs(cond.operand, fn))


def _map_operand(operand: Operand, fn: Callable[[str], str]) -> Operand:
    return Attr(fn(operand.name)) if isinstance(operand, Attr) else operand


def rename_attr(cond: Condition, old: str, new: str) -> Condition:
    return map_attrs(cond, lambda n: new if n == old else n)


def prefix_condition(cond: Condition, prefix: str) -> Condition:
    return map_attrs(cond, lambda n: prefix_name(prefix, n))


def unprefix_condition(cond: Condition, prefix: str) -> Condition | None:
    """Inverse of :func:`prefix_condition`; None if some attribute lacks the prefix."""
    if any(strip_prefix(prefix, n) is None for n in attrs(cond)):
        return None
    return map_attrs(cond, lambda n: strip_prefix(prefix, n) or n)


def same_comparison(a: Comparison, b: Comparison) -> bool:
    """Equality up to swapping the operands."""
    return a == b or a == b.mirrored()


# Binding strength, loosest first.
_OR, _AND, _NOT, _ATOM = 1, 2, 3, 4


def _precedence(cond: Condition) -> int:
    if isinstance(cond, Or):
        return _OR
    if isinstance(cond, And):
        return _AND
    if isinstance(cond, Not):
        return _NOT
    return _ATOM


def render_operand(operand: Operand) -> str:
    return operand.name if isinstance(operand, Attr) else format_literal(operand.value)


def render_condition(cond: Condition, minimum: int = _OR) -> str:
    """Infix text of a condition, parenthesized only where needed.

    ``&`` and ``|`` associate to the left, so a right operand of the same
    operator gets parentheses.
    """
    if isinstance(cond, Comparison):
        text = f"{render_operand(cond.lhs)} {cond.theta.value} {render_operand(cond.rhs)}"
    elif isinstance(cond, Or):
        text = f"{render_condition(cond.left, _OR)} | {render_condition(cond.right, _OR + 1)}"
    elif isinstance(cond, And):
        text = f"{render_condition(cond.left, _AND)} & {render_condition(cond.right, _AND + 1)}"
    else:
        text = "!" + render_condition(cond.operand, _NOT)
    return f"({text})" if _precedence(cond) < minimum else text
