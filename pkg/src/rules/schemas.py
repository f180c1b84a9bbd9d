"""Rewrite-rule data structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from src.algebra.errors import Path, format_path


class RuleId(Enum):
    """Identifier of a rewrite rule.

    ``E1``-``E16`` are general relational equivalences; ``P17``-``P20`` relate
    the directly-follows operator to selection, projection and join.
    """

    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"
    E5 = "E5"
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"
    E9 = "E9"
    E10 = "E10"
    E11 = "E11"
    E12 = "E12"
    E13 = "E13"
    E14 = "E14"
    E15 = "E15"
    E16 = "E16"
    P17 = "P17"
    P18 = "P18"
    P19 = "P19"
    P20 = "P20"


class Direction(Enum):
    """Which side of an equivalence is rewritten into the other."""

    LEFT_TO_RIGHT = "left-to-right"
    RIGHT_TO_LEFT = "right-to-left"
    BOTH = "both"

    @property
    def arrow(self) -> str:
        return {"left-to-right": "->", "right-to-left": "<-", "both": "<->"}[self.value]

    def allows(self, direction: Direction) -> bool:
        return self is Direction.BOTH or self is direction


@dataclass(frozen=True)
class RewriteRule:
    """An equivalence between two expression shapes.

    ``left`` and ``right`` are the two shapes in query syntax. ``side_conditions``
    names the checks in :mod:`src.rules.side_conditions` that must hold before
    the rule may be applied; well-formedness checks are always enforced and
    are listed in ``requires`` as prose. ``expanding`` lists directions that
    grow the tree without bound and are left out of plan search.
    """

    id: RuleId
    title: str
    left: str
    right: str
    direction: Direction = Direction.BOTH
    requires: str = ""
    side_conditions: tuple[str, ...] = ()
    expanding: tuple[Direction, ...] = ()

    @property
    def directions(self) -> tuple[Direction, ...]:
        if self.direction is Direction.BOTH:
            return (Direction.LEFT_TO_RIGHT, Direction.RIGHT_TO_LEFT)
        return (self.direction,)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id.value,
            "title": self.title,
            "left": self.left,
            "right": self.right,
            "direction": self.direction.value,
            "requires": self.requires,
            "side_conditions": list(self.side_conditions),
            "expanding": [d.value for d in self.expanding],
        }

    def __str__(self) -> str:
        return f"{self.id.value} {self.title}"


@dataclass(frozen=True)
class RuleApplication:
    """One rewrite step: which rule, which way, at which node."""

    rule: RuleId
    direction: Direction
    path: Path = field(default_factory=tuple)

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule.value, "direction": self.direction.value, "path": list(self.path)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RuleApplication:
        return cls(
            rule=RuleId(data["rule"]),
            direction=Direction(data.get("direction", "left-to-right")),
            path=tuple(data.get("path", ())),
        )

    def __str__(self) -> str:
        return f"{self.rule.value} {self.direction.arrow} at {format_path(self.path)}"


@dataclass(frozen=True)
class BlockedRule:
    """A rule whose pattern matched but whose side condition could not be verified."""

    rule: RuleId
    direction: Direction
    path: Path
    reason: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule.value,
            "direction": self.direction.value,
            "path": list(self.path),
            "reason": self.reason,
        }

    def __str__(self) -> str:
        return (
            f"{self.rule.value} {self.direction.arrow} at {format_path(self.path)} "
            f"blocked: side condition: {self.reason}"
        )
