"""SPARQL SELECT subset: parser, evaluator, reference oracle and result formats."""

from .ast import (
    Aggregate, AggregateBinding, Comparison, GroupPattern, QueryAst, SelectQuery, TriplePattern, Var,
)
from .evaluator import evaluate, run_query
from .naive import evaluate_naive
from .parser import QUERY_PREFIXES, parse_query
from .results import ResultTable

__all__ = [
    "Aggregate", "AggregateBinding", "Comparison", "GroupPattern", "QueryAst", "SelectQuery",
    "TriplePattern", "Var", "evaluate", "evaluate_naive", "run_query", "parse_query",
    "QUERY_PREFIXES", "ResultTable",
]
