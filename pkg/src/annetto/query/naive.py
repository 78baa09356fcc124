"""Brute-force reference evaluator, used as a test oracle.

Shares nothing with :mod:`.evaluator` beyond the AST: entailment is a
fixed-point over direct parents, paths are a fixed-point transitive closure,
and each group pattern is solved by trying every assignment of graph terms
to its variables. Only feasible on graphs of a few dozen triples.
"""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING

from ..terms import RDF_TYPE, XSD_INTEGER, Iri, Literal, Term, Triple
from .ast import Aggregate, Comparison, GroupPattern, SelectQuery, Var
from .results import ResultTable

if TYPE_CHECKING:
    from ..builder import KB


def _entailed(kb: KB) -> set[Triple]:
    parents = {c: set(d.parents) for c, d in kb.schema.classes.items()}
    out: set[Triple] = set()
    for t in kb.graph.match():
        if t.predicate == RDF_TYPE and isinstance(t.object, Iri):
            types = {t.object}
            while True:
                more = set()
                for c in types:
                    more |= parents.get(c, set())
                if more <= types:
                    break
                types |= more
            for c in types:
                out.add(Triple(t.subject, RDF_TYPE, c))
        else:
            out.add(t)
    return out


def _closure(edges: set[tuple[Term, Term]]) -> set[tuple[Term, Term]]:
    reach = set(edges)
    while True:
        step = {(a, d) for (a, b) in reach for (c, d) in edges if b == c}
        if step <= reach:
            return reach
        reach |= step


def _cmp(op: str, a: Term | None, b: Term | None) -> bool:
    if a is None or b is None:
        return False
    comparable = False
    if isinstance(a, Literal) and isinstance(b, Literal):
        numeric = {XSD_INTEGER, "http://www.w3.org/2001/XMLSchema#double"}
        if a.datatype in numeric and b.datatype in numeric:
            comparable = True
        elif a.datatype == b.datatype:
            comparable = True
    if comparable:
        x, y = a.value, b.value  # type: ignore[union-attr]
        ops = {
            "=": lambda: x == y, "!=": lambda: x != y, "<": lambda: x < y,
            ">": lambda: x > y, "<=": lambda: x <= y, ">=": lambda: x >= y,
        }
        try:
            return bool(ops[op]())
        except TypeError:
            return False
    if op == "=":
        return a == b
    if op == "!=":
        return not a == b
    return False


class _Naive:
    def __init__(self, kb: KB) -> None:
        self.triples = _entailed(kb)
        domain: dict[Term, None] = {}
        for s, p, o in sorted(self.triples, key=repr):
            domain[s] = domain[p] = domain[o] = None
        self.domain = list(domain)
        self.paths: dict[Iri, set[tuple[Term, Term]]] = {}

    def path(self, p: Iri) -> set[tuple[Term, Term]]:
        if p not in self.paths:
            self.paths[p] = _closure({(s, o) for s, q, o in self.triples if q == p})
        return self.paths[p]

    def group(self, g: GroupPattern) -> list[dict[Var, Term]]:
        variables: list[Var] = []
        for tp in g.triples:
            for v in tp.variables():
                if v not in variables:
                    variables.append(v)
        solutions = []
        for values in itertools.product(self.domain, repeat=len(variables)):
            sol = dict(zip(variables, values))

            def sub(x):
                return sol[x] if isinstance(x, Var) else x

            ok = True
            for tp in g.triples:
                s, p, o = sub(tp.subject), sub(tp.predicate), sub(tp.object)
                if tp.path == "+":
                    hit = (s, o) in self.path(p)
                else:
                    hit = (s, p, o) in self.triples
                if not hit:
                    ok = False
                    break
            if ok:
                solutions.append(sol)
        for q in g.subselects:
            inner = self.select(q)
            joined = []
            for a in solutions:
                for b in inner:
                    if all(a[v] == b[v] for v in a if v in b):
                        joined.append({**a, **b})
            solutions = joined
        for f in g.filters:
            solutions = [s for s in solutions if self.passes(f, s)]
        return solutions

    @staticmethod
    def passes(f: Comparison, sol: dict[Var, Term]) -> bool:
        def val(x):
            return sol.get(x) if isinstance(x, Var) else x
        return _cmp(f.op, val(f.left), val(f.right))

    @staticmethod
    def count(agg: Aggregate, members: list[dict[Var, Term]]) -> Literal:
        if agg.arg is None:
            items = [sorted(m.items(), key=lambda kv: kv[0].name) for m in members]
        else:
            items = [m[agg.arg] for m in members if agg.arg in m]
        if agg.distinct:
            unique: list = []
            for it in items:
                if it not in unique:
                    unique.append(it)
            items = unique
        return Literal(len(items), XSD_INTEGER)

    def select(self, q: SelectQuery) -> list[dict[Var, Term]]:
        solutions = self.group(q.where)
        out_vars = q.output_vars()
        rows = []
        if q.is_grouped:
            keys = q.group_by or []
            groups: list[tuple[list[Term], list[dict[Var, Term]]]] = []
            for s in solutions:
                key = [s[k] for k in keys]
                for gk, members in groups:
                    if gk == key:
                        members.append(s)
                        break
                else:
                    groups.append((key, [s]))
            for key, members in groups:
                row = dict(zip(keys, key))
                for b in q.aggregates:
                    row[b.alias] = self.count(b.aggregate, members)

                def val(x, row=row, members=members):
                    if isinstance(x, Aggregate):
                        return self.count(x, members)
                    return row.get(x) if isinstance(x, Var) else x

                if all(_cmp(h.op, val(h.left), val(h.right)) for h in q.having):
                    rows.append({v: row[v] for v in out_vars})
        else:
            rows = [{v: s[v] for v in out_vars} for s in solutions]
        if q.distinct:
            unique = []
            for r in rows:
                if r not in unique:
                    unique.append(r)
            rows = unique
        return rows


def evaluate_naive(ast: SelectQuery, kb: KB) -> ResultTable:
    """Same contract as :func:`~annetto.query.evaluate`, by exhaustive enumeration."""
    rows = _Naive(kb).select(ast)
    out_vars = ast.output_vars()
    return ResultTable([v.name for v in out_vars], [tuple(r[v] for v in out_vars) for r in rows]).sorted()
