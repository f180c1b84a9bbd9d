"""Block I/O cost model, plan estimates and parameter sweeps."""

from src.cost.model import (
    bnl_cost,
    composite_df_cost,
    df_components,
    execution_order_cost,
    order_of_cost,
    selected_params,
    strategy_costs,
)
from src.cost.plan import estimate_plan
from src.cost.schemas import (
    Accounting,
    CostEstimate,
    CostParams,
    ExecutionOrder,
    NodeCost,
    Strategy,
    StrategyCost,
    SweepAxis,
    SweepPoint,
)
from src.cost.sweep import detect_jumps, fit_thresholds, sweep, sweep_range, write_sweep_csv

__all__ = [
    "Accounting",
    "CostEstimate",
    "CostParams",
    "ExecutionOrder",
    "NodeCost",
    "Strategy",
    "StrategyCost",
    "SweepAxis",
    "SweepPoint",
    "bnl_cost",
    "composite_df_cost",
    "detect_jumps",
    "df_components",
    "estimate_plan",
    "execution_order_cost",
    "fit_thresholds",
    "order_of_cost",
    "selected_params",
    "strategy_costs",
    "sweep",
    "sweep_range",
    "write_sweep_csv",
]
