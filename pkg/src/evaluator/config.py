"""Evaluation settings and counters."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from src.algebra.errors import Path, format_path


class DfStrategy(Enum):
    """How a DirectlyFollows node is computed."""

    NATIVE = "native"  # sorted scan over the log
    COMPOSITE = "composite"  # joins, projection and minus


@dataclass(frozen=True)
class EvalConfig:
    df_strategy: DfStrategy = DfStrategy.NATIVE
    collect_metrics: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {"df_strategy": self.df_strategy.value, "collect_metrics": self.collect_metrics}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EvalConfig:
        return cls(
            df_strategy=DfStrategy(data.get("df_strategy", "native")),
            collect_metrics=data.get("collect_metrics", False),
        )


@dataclass
class EvalMetrics:
    """Tuple counters gathered during one evaluation.

    ``node_rows`` maps a node path to the cardinality of that node's output.
    All counters stay zero unless metrics collection is enabled.
    """

    tuples_read: int = 0
    intermediate_tuples_peak: int = 0
    comparisons: int = 0
    node_rows: dict[Path, int] = field(default_factory=dict)

    def record(self, path: Path, rows: int, intermediate: bool) -> None:
        self.node_rows[path] = rows
        if intermediate and rows > self.intermediate_tuples_peak:
            self.intermediate_tuples_peak = rows

    def to_dict(self) -> dict[str, Any]:
        return {
            "tuples_read": self.tuples_read,
            "intermediate_tuples_peak": self.intermediate_tuples_peak,
            "comparisons": self.comparisons,
            "node_rows": {format_path(p): n for p, n in sorted(self.node_rows.items())},
        }
