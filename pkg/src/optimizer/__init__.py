"""Cost-based plan search over the rewrite rules."""

from src.optimizer.planner import DEFAULT_BUDGET, GREEDY_SEQUENCE, greedy_pushdown, optimize
from src.optimizer.schemas import OptimizeMode, PlanChoice

__all__ = [
    "DEFAULT_BUDGET",
    "GREEDY_SEQUENCE",
    "OptimizeMode",
    "PlanChoice",
    "greedy_pushdown",
    "optimize",
]
