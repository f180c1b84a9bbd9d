"""Plan search settings and results."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from src.algebra.expr import AlgebraExpr
from src.cost.schemas import CostEstimate
from src.dsl.render import render
from src.rules.schemas import BlockedRule, RuleApplication


class OptimizeMode(Enum):
    """How hard the optimizer searches for a cheaper plan."""

    OFF = "off"  # keep the query as written
    HEURISTIC = "heuristic"  # greedy pushdown only
    EXHAUSTIVE = "exhaustive"  # bounded search, greedy fallback


@dataclass
class PlanChoice:
    """Outcome of optimizing one query.

    Replaying ``applied_rules`` in order with :func:`src.rules.apply_rule`
    turns ``original`` into ``chosen``. ``blocked`` lists rules that matched
    but whose side conditions the catalog does not establish.
    """

    original: AlgebraExpr
    chosen: AlgebraExpr
    applied_rules: list[RuleApplication] = field(default_factory=list)
    est_original: CostEstimate = field(default_factory=CostEstimate)
    est_chosen: CostEstimate = field(default_factory=CostEstimate)
    blocked: list[BlockedRule] = field(default_factory=list)
    mode: OptimizeMode = OptimizeMode.HEURISTIC
    visited: int = 0
    exhausted: bool = False

    @property
    def improved(self) -> bool:
        return self.est_chosen.total < self.est_original.total

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode.value,
            "original": render(self.original),
            "chosen": render(self.chosen),
            "applied_rules": [a.to_dict() for a in self.applied_rules],
            "blocked": [b.to_dict() for b in self.blocked],
            "est_original": self.est_original.to_dict(),
            "est_chosen": self.est_chosen.to_dict(),
            "visited": self.visited,
            "exhausted": self.exhausted,
        }
