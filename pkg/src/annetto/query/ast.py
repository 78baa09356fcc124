"""Syntax tree for the supported SPARQL SELECT subset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..terms import Iri, Literal


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


PatternTerm = Union[Var, Iri, Literal]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: Union[Var, Iri]
    object: PatternTerm
    path: str | None = None  # "+" for one-or-more

    def variables(self) -> list[Var]:
        return [t for t in (self.subject, self.predicate, self.object) if isinstance(t, Var)]


@dataclass(frozen=True)
class Aggregate:
    func: str  # only "count"
    arg: Var | None  # None means COUNT(*)
    distinct: bool = False


Operand = Union[Var, Iri, Literal, Aggregate]


@dataclass(frozen=True)
class Comparison:
    op: str  # one of = != < > <= >=
    left: Operand
    right: Operand

    def variables(self) -> list[Var]:
        return [x for x in (self.left, self.right) if isinstance(x, Var)]


@dataclass(frozen=True)
class AggregateBinding:
    aggregate: Aggregate
    alias: Var


Projection = Union[Var, AggregateBinding]


@dataclass
class GroupPattern:
    triples: list[TriplePattern] = field(default_factory=list)
    filters: list[Comparison] = field(default_factory=list)
    subselects: list[SelectQuery] = field(default_factory=list)

    def variables(self) -> list[Var]:
        """Variables bound by this group (triples and subselect projections)."""
        seen: dict[Var, None] = {}
        for tp in self.triples:
            for v in tp.variables():
                seen[v] = None
        for sub in self.subselects:
            for v in sub.output_vars():
                seen[v] = None
        return list(seen)


@dataclass
class SelectQuery:
    projection: list[Projection] | None  # None means SELECT *
    where: GroupPattern
    distinct: bool = False
    group_by: list[Var] | None = None
    having: list[Comparison] = field(default_factory=list)

    def output_vars(self) -> list[Var]:
        if self.projection is None:
            return self.where.variables()
        return [p if isinstance(p, Var) else p.alias for p in self.projection]

    @property
    def aggregates(self) -> list[AggregateBinding]:
        return [p for p in self.projection or () if isinstance(p, AggregateBinding)]

    @property
    def is_grouped(self) -> bool:
        return self.group_by is not None or bool(self.aggregates) or bool(self.having)


QueryAst = SelectQuery
