"""Rewrite rules over expression trees and their side conditions."""

from src.rules.engine import RULES, apply_rule, get_rule, rule_catalog, verify_rule_on_instance
from src.rules.errors import PatternMismatch, SideConditionUnverified
from src.rules.schemas import BlockedRule, Direction, RewriteRule, RuleApplication, RuleId
from src.rules.side_conditions import trace_attribute

__all__ = [
    "RULES",
    "BlockedRule",
    "Direction",
    "PatternMismatch",
    "RewriteRule",
    "RuleApplication",
    "RuleId",
    "SideConditionUnverified",
    "apply_rule",
    "get_rule",
    "rule_catalog",
    "trace_attribute",
    "verify_rule_on_instance",
]
