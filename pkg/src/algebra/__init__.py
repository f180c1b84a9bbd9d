"""Expression trees, conditions and schema inference."""

from src.algebra.conditions import And, Attr, Comparison, Const, Not, Or, attrs, cmp
from src.algebra.errors import SchemaError, SchemaErrorKind
from src.algebra.expansion import desugar_join, expand_all_df, expand_df
from src.algebra.expr import (
    AlgebraExpr,
    BaseRel,
    DirectlyFollows,
    Intersect,
    Join,
    Minus,
    Product,
    Project,
    RenameAttr,
    RenamePrefix,
    Select,
    Union,
    render_tree,
)
from src.algebra.schema_inference import infer_schema

__all__ = [
    "AlgebraExpr",
    "And",
    "Attr",
    "BaseRel",
    "Comparison",
    "Const",
    "DirectlyFollows",
    "Intersect",
    "Join",
    "Minus",
    "Not",
    "Or",
    "Product",
    "Project",
    "RenameAttr",
    "RenamePrefix",
    "SchemaError",
    "SchemaErrorKind",
    "Select",
    "Union",
    "attrs",
    "cmp",
    "desugar_join",
    "expand_all_df",
    "expand_df",
    "infer_schema",
    "render_tree",
]
