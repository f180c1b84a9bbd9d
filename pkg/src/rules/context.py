"""State shared by the rewrite functions while one rule is applied."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from src.algebra.errors import Path
from src.algebra.expr import AlgebraExpr
from src.algebra.schema_inference import infer_schema
from src.catalog.schemas import Catalog
from src.relation.schema import Schema
from src.rules.errors import PatternMismatch, SideConditionUnverified
from src.rules.schemas import RuleId
from src.rules.side_conditions import get_side_condition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewriteContext:
    cat: Catalog
    rule: RuleId
    path: Path = ()
    check_side_conditions: bool = True

    def schema(self, expr: AlgebraExpr) -> Schema:
        return infer_schema(expr, self.cat)

    def mismatch(self, message: str) -> PatternMismatch:
        return PatternMismatch(self.rule.value, self.path, message)

    def require(self, name: str, *args: Any) -> None:
        """Run a named side-condition check.

        Raises:
            SideConditionUnverified: If checking is enabled and the fact is missing.
        """
        if not self.check_side_conditions:
            return
        check = get_side_condition(name)
        if check is None:
            raise KeyError(f"unknown side condition '{name}'")
        fact = check(*args, self.cat)
        if fact is not None:
            logger.debug("%s blocked: %s", self.rule.value, fact)
            raise SideConditionUnverified(self.rule.value, self.path, fact)
