"""Text query language: parsing and rendering."""

from src.dsl.errors import ParseError, SourceSpan
from src.dsl.parser import parse, parse_condition
from src.dsl.render import render

__all__ = ["ParseError", "SourceSpan", "parse", "parse_condition", "render"]
