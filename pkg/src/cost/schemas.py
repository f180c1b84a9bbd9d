"""Cost model data structures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Union

from src.algebra.errors import Path, format_path
from src.relation.errors import CostParamsError

Number = Union[int, Fraction]

COMPONENTS = ("join1", "result1", "join2", "result2", "minus", "scan", "other")
DF_COMPONENTS = COMPONENTS[:5]


class Accounting(Enum):
    """How intermediate results are tested against memory."""

    GENEROUS = "generous"  # the whole of M is available
    STRICT = "strict"  # M minus the blocks of the resident log


class ExecutionOrder(Enum):
    """Whether the selection runs before or after the directly-follows operator."""

    SELECT_FIRST = "select-first"
    SELECT_LAST = "select-last"


class Strategy(Enum):
    """Ways of getting directly-follows pairs out of a database."""

    INTERMEDIATE_STORAGE = "intermediate-storage"
    DATABASE_CONNECTION = "database-connection"
    NATIVE_OPERATOR = "native-operator"
    COMPOSITE_OPERATOR = "composite-operator"


class SweepAxis(Enum):
    EVENTS_PER_CASE = "events_per_case"
    N = "N"
    M = "M"
    Q = "Q"


def as_fraction(value: Any) -> Fraction:
    """Exact fraction from an int, Fraction, decimal string or float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class CostParams:
    """Parameters of the block cost model.

    ``n`` events in ``v`` cases, ``f`` tuples per block, ``m`` memory blocks
    (None means unlimited) and selection fraction ``q``. ``tuple_bytes`` is
    carried for display only.
    """

    n: int = 1
    v: int = 1
    f: int = 50
    m: int | None = None
    q: Fraction = Fraction(1, 10)
    tuple_bytes: int = 80
    accounting: Accounting = Accounting.GENEROUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", as_fraction(self.q))
        if not self.n >= self.v >= 1:
            raise CostParamsError(f"need N >= V >= 1, got N={self.n}, V={self.v}")
        if self.f < 1:
            raise CostParamsError(f"block factor F must be at least 1, got {self.f}")
        if self.m is not None and self.m < 1:
            raise CostParamsError(f"memory M must be at least 1 block, got {self.m}")
        if not 0 <= self.q <= 1:
            raise CostParamsError(f"selection fraction Q must lie in [0, 1], got {self.q}")
        if self.tuple_bytes < 1:
            raise CostParamsError(f"tuple size must be positive, got {self.tuple_bytes}")

    @property
    def b(self) -> int:
        """Blocks holding the log."""
        return math.ceil(Fraction(self.n, self.f))

    @property
    def events_per_case(self) -> Fraction:
        return Fraction(self.n, self.v)

    def evolve(self, **changes: Any) -> CostParams:
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "N": self.n,
            "V": self.v,
            "F": self.f,
            "M": self.m,
            "Q": str(self.q),
            "tuple_bytes": self.tuple_bytes,
            "accounting": self.accounting.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CostParams:
        return cls(
            n=int(data.get("N", 1)),
            v=int(data.get("V", 1)),
            f=int(data.get("F", 50)),
            m=None if data.get("M") is None else int(data["M"]),
            q=as_fraction(data.get("Q", Fraction(1, 10))),
            tuple_bytes=int(data.get("tuple_bytes", 80)),
            accounting=Accounting(data.get("accounting", "generous")),
        )


@dataclass(frozen=True)
class NodeCost:
    """Blocks charged to one plan node and its estimated output size."""

    path: Path
    label: str
    blocks: Fraction
    rows: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": format_path(self.path),
            "node": self.label,
            "blocks": math.ceil(self.blocks),
            "rows": math.ceil(self.rows),
        }


@dataclass
class CostEstimate:
    """Cost split into named components, in exact block counts."""

    components: dict[str, Fraction] = field(
        default_factory=lambda: {name: Fraction(0) for name in COMPONENTS}
    )
    nodes: list[NodeCost] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return sum(self.components.values(), Fraction(0))

    @property
    def total_blocks(self) -> int:
        """Total rounded up to whole blocks."""
        return math.ceil(self.total)

    def add(self, component: str, blocks: Number) -> None:
        if component not in self.components:
            raise KeyError(f"unknown cost component '{component}'")
        self.components[component] += Fraction(blocks)

    def rounded(self) -> dict[str, int]:
        return {name: math.ceil(value) for name, value in self.components.items()}

    def to_dict(self) -> dict[str, Any]:
        return {
            "components": self.rounded(),
            "total": self.total_blocks,
            "nodes": [n.to_dict() for n in self.nodes],
        }


@dataclass(frozen=True)
class StrategyCost:
    strategy: Strategy
    order: str
    blocks: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy.value,
            "order": self.order,
            "blocks": math.ceil(self.blocks),
        }


@dataclass(frozen=True)
class SweepPoint:
    x: Fraction
    estimate: CostEstimate

    def row(self) -> dict[str, Any]:
        """CSV row: the axis value, the directly-follows components and the total."""
        rounded = self.estimate.rounded()
        x = int(self.x) if self.x.denominator == 1 else float(self.x)
        components = {k: rounded[k] for k in DF_COMPONENTS}
        return {"x": x, **components, "total": self.estimate.total_blocks}
