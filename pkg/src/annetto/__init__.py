"""ANNETT-O: describe neural-network configurations, their training and evaluation as RDF, then check and query them."""

from .builder import KB
from .errors import (
    AnnettoError, BuildError, QuerySyntaxError, SchemaError, TermError, TurtleSyntaxError,
    UnknownTermError, UnsupportedFeatureError,
)
from .examples import build_aae, build_all, build_gan, build_simple_classifier, export_examples
from .graph import Graph, graph_equal
from .query import ResultTable, evaluate, evaluate_naive, parse_query, run_query
from .schema import SchemaModel, builtin_schema, extend_from_graph, types_with_inference
from .terms import Iri, Literal, Triple
from .turtle import parse_turtle, serialize_turtle
from .validator import ValidationReport, Violation, validate

__version__ = "0.1.0"

__all__ = [
    "KB", "Graph", "graph_equal", "Iri", "Literal", "Triple",
    "SchemaModel", "builtin_schema", "extend_from_graph", "types_with_inference",
    "parse_turtle", "serialize_turtle", "validate", "ValidationReport", "Violation",
    "parse_query", "evaluate", "evaluate_naive", "run_query", "ResultTable",
    "build_simple_classifier", "build_gan", "build_aae", "build_all", "export_examples",
    "AnnettoError", "BuildError", "QuerySyntaxError", "SchemaError", "TermError",
    "TurtleSyntaxError", "UnknownTermError", "UnsupportedFeatureError",
]
