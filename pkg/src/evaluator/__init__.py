"""Evaluation of expression trees."""

from src.evaluator.config import DfStrategy, EvalConfig, EvalMetrics
from src.evaluator.directly_follows import evaluate_df_native
from src.evaluator.engine import Evaluator, evaluate, evaluate_df_composite

__all__ = [
    "DfStrategy",
    "EvalConfig",
    "EvalMetrics",
    "Evaluator",
    "evaluate",
    "evaluate_df_composite",
    "evaluate_df_native",
]
