"""Schemas, typed values and set-semantics relations."""

from src.relation.errors import DfqError, SchemaMismatchError, ValueTypeError
from src.relation.relation import Relation, insert_tuple, relation_equal
from src.relation.schema import DOWN, UP, Attribute, Schema
from src.relation.values import ABSENT, Domain, Theta, Timestamp, compare

__all__ = [
    "ABSENT",
    "DOWN",
    "UP",
    "Attribute",
    "DfqError",
    "Domain",
    "Relation",
    "Schema",
    "SchemaMismatchError",
    "Theta",
    "Timestamp",
    "ValueTypeError",
    "compare",
    "insert_tuple",
    "relation_equal",
]
