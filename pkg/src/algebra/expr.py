"""Immutable relational-algebra expression trees.

Every node is a frozen dataclass, so trees compare and hash structurally.
A node is addressed by its path: the tuple of child indices leading to it
from the root (``()`` is the root itself).
"""

from __future__ import annotations

import typing
from dataclasses import dataclass, replace
from typing import Iterator

from src.algebra.conditions import Condition, render_condition
from src.algebra.errors import Path


@dataclass(frozen=True)
class BaseRel:
    name: str


@dataclass(frozen=True)
class Select:
    cond: Condition
    child: AlgebraExpr


@dataclass(frozen=True)
class Project:
    attrs: tuple[str, ...]
    child: AlgebraExpr

    def __post_init__(self) -> None:
        object.__setattr__(self, "attrs", tuple(self.attrs))


@dataclass(frozen=True)
class RenameAttr:
    old: str
    new: str
    child: AlgebraExpr


@dataclass(frozen=True)
class RenamePrefix:
    """Prefix every attribute name with ``prefix.``."""

    prefix: str
    child: AlgebraExpr


@dataclass(frozen=True)
class Product:
    left: AlgebraExpr
    right: AlgebraExpr


@dataclass(frozen=True)
class Join:
    cond: Condition
    left: AlgebraExpr
    right: AlgebraExpr


@dataclass(frozen=True)
class Union:
    left: AlgebraExpr
    right: AlgebraExpr


@dataclass(frozen=True)
class Intersect:
    left: AlgebraExpr
    right: AlgebraExpr


@dataclass(frozen=True)
class Minus:
    left: AlgebraExpr
    right: AlgebraExpr


@dataclass(frozen=True)
class DirectlyFollows:
    """Pairs of events of one case that directly follow each other in time."""

    case: str
    time: str
    child: AlgebraExpr


AlgebraExpr = typing.Union[
    BaseRel,
    Select,
    Project,
    RenameAttr,
    RenamePrefix,
    Product,
    Join,
    Union,
    Intersect,
    Minus,
    DirectlyFollows,
]

UNARY = (Select, Project, RenameAttr, RenamePrefix, DirectlyFollows)
BINARY = (Product, Join, Union, Intersect, Minus)
SET_OPERATIONS = (Union, Intersect, Minus)


def children(node: AlgebraExpr) -> tuple[AlgebraExpr, ...]:
    if isinstance(node, UNARY):
        return (node.child,)
    if isinstance(node, BINARY):
        return (node.left, node.right)
    return ()


def with_children(node: AlgebraExpr, new_children: tuple[AlgebraExpr, ...]) -> AlgebraExpr:
    """Copy of ``node`` with its children replaced."""
    if isinstance(node, UNARY):
        (child,) = new_children
        return replace(node, child=child)
    if isinstance(node, BINARY):
        left, right = new_children
        return replace(node, left=left, right=right)
    return node


def node_at(root: AlgebraExpr, path: Path) -> AlgebraExpr:
    """Node reached by following ``path`` from ``root``.

    Raises:
        IndexError: If the path leaves the tree.
    """
    node = root
    for index in path:
        node = children(node)[index]
    return node


def replace_at(root: AlgebraExpr, path: Path, new: AlgebraExpr) -> AlgebraExpr:
    """Copy of ``root`` with the node at ``path`` replaced by ``new``."""
    if not path:
        return new
    kids = list(children(root))
    kids[path[0]] = replace_at(kids[path[0]], tuple(path[1:]), new)
    return with_children(root, tuple(kids))


def walk(root: AlgebraExpr, path: Path = ()) -> Iterator[tuple[Path, AlgebraExpr]]:
    """Pre-order traversal yielding (path, node)."""
    yield path, root
    for i, child in enumerate(children(root)):
        yield from walk(child, path + (i,))


def node_count(root: AlgebraExpr) -> int:
    return sum(1 for _ in walk(root))


def base_names(root: AlgebraExpr) -> set[str]:
    return {node.name for _, node in walk(root) if isinstance(node, BaseRel)}


def label(node: AlgebraExpr) -> str:
    """One-line description of a node without its children."""
    if isinstance(node, BaseRel):
        return f"BaseRel {node.name}"
    if isinstance(node, Select):
        return f"Select {render_condition(node.cond)}"
    if isinstance(node, Project):
        return f"Project {', '.join(node.attrs)}"
    if isinstance(node, RenameAttr):
        return f"RenameAttr {node.old} -> {node.new}"
    if isinstance(node, RenamePrefix):
        return f"RenamePrefix {node.prefix}"
    if isinstance(node, Join):
        return f"Join {render_condition(node.cond)}"
    if isinstance(node, DirectlyFollows):
        return f"DirectlyFollows {node.case}, {node.time}"
    return {Product: "Product", Union: "Union", Intersect: "Intersect", Minus: "Minus"}[
        type(node)
    ]


def render_tree(root: AlgebraExpr) -> str:
    """Canonical text form: one node per line, children indented two spaces."""
    lines = [f"{'  ' * len(path)}{label(node)}" for path, node in walk(root)]
    return "\n".join(lines)
