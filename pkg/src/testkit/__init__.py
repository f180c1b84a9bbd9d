"""Generators and oracles for testing the engine."""

from src.testkit.generator import AttributeSpec, LogSpec, generate_log
from src.testkit.instances import (
    BUILDERS,
    RuleInstance,
    keyed_minus_instance,
    p17_counterexample,
    random_catalog,
    rule_instance,
    rule_instances,
)
from src.testkit.oracle import brute_force_df
from src.testkit.trees import TreeGenerator, random_comparison, random_condition

__all__ = [
    "BUILDERS",
    "AttributeSpec",
    "LogSpec",
    "RuleInstance",
    "TreeGenerator",
    "brute_force_df",
    "generate_log",
    "keyed_minus_instance",
    "p17_counterexample",
    "random_catalog",
    "random_comparison",
    "random_condition",
    "rule_instance",
    "rule_instances",
]
