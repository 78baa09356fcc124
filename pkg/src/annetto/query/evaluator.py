"""Index-driven evaluation of parsed SELECT queries.

Triple patterns match against the graph plus its entailed rdf:type
statements (every asserted type expands to all its superclasses). Patterns
are joined greedily, most-bound first; filters run as soon as their
variables are bound; subqueries are evaluated on their own and natural-joined
in. Final rows are sorted on the projected terms.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterator
from typing import TYPE_CHECKING

from ..graph import Graph
from ..schema import TypeIndex
from ..terms import RDF_TYPE, XSD_INTEGER, Iri, Literal, Term, Triple, term_key
from .ast import Aggregate, Comparison, GroupPattern, Operand, SelectQuery, TriplePattern, Var
from .parser import parse_query
from .results import ResultTable

if TYPE_CHECKING:
    from ..builder import KB

Solution = dict[Var, Term]


def compare(op: str, a: Term | None, b: Term | None) -> bool:
    """Filter comparison; any type error or unbound side yields False."""
    if a is None or b is None:
        return False
    if isinstance(a, Literal) and isinstance(b, Literal):
        if a.is_numeric and b.is_numeric:
            x, y = a.value, b.value
        elif a.datatype == b.datatype:
            x, y = a.value, b.value
        else:
            x = y = None
        if x is not None:
            try:
                if op == "=":
                    return x == y
                if op == "!=":
                    return x != y
                if op == "<":
                    return x < y  # type: ignore[operator]
                if op == ">":
                    return x > y  # type: ignore[operator]
                if op == "<=":
                    return x <= y  # type: ignore[operator]
                if op == ">=":
                    return x >= y  # type: ignore[operator]
            except TypeError:  # naive vs aware dateTime
                return False
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    return False


class _Context:
    def __init__(self, graph: Graph, types: TypeIndex) -> None:
        self.graph = graph
        self.types = types
        self._reach: dict[tuple[Term, Iri, bool], list[Term]] = {}

    def match(self, s: Term | None, p: Iri | None, o: Term | None) -> Iterator[Triple]:
        """Match over the graph with entailed types in place of asserted ones."""
        if s is not None and not isinstance(s, Iri):
            return
        if p is None:
            for t in self.graph.match(s, None, o):
                if t.predicate != RDF_TYPE:
                    yield t
            yield from self.match(s, RDF_TYPE, o)
            return
        if p != RDF_TYPE:
            yield from self.graph.match(s, p, o)
            return
        for t in self.graph.match(s, RDF_TYPE, o):
            if isinstance(t.object, Literal):
                yield t
        if isinstance(o, Literal):
            return
        if s is not None:
            for c in sorted(self.types.of(s)):
                if o is None or o == c:
                    yield Triple(s, RDF_TYPE, c)
        elif o is not None:
            for x in self.types.all_of(o):
                yield Triple(x, RDF_TYPE, o)
        else:
            for x, classes in self.types.types.items():
                for c in sorted(classes):
                    yield Triple(x, RDF_TYPE, c)

    def reachable(self, start: Term, p: Iri, forward: bool) -> list[Term]:
        """Nodes reachable from ``start`` over one or more ``p`` edges (BFS, cycle-safe)."""
        key = (start, p, forward)
        if key in self._reach:
            return self._reach[key]
        seen: dict[Term, None] = {}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            edges = self.match(node, p, None) if forward else self.match(None, p, node)
            for t in edges:
                nxt = t.object if forward else t.subject
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
        self._reach[key] = list(seen)
        return self._reach[key]

    def path_pairs(self, s: Term | None, p: Iri, o: Term | None) -> Iterator[tuple[Term, Term]]:
        if s is not None:
            for y in self.reachable(s, p, True):
                if o is None or y == o:
                    yield s, y
        elif o is not None:
            for x in self.reachable(o, p, False):
                yield x, o
        else:
            starts = dict.fromkeys(t.subject for t in self.match(None, p, None))
            for x in starts:
                for y in self.reachable(x, p, True):
                    yield x, y


def _resolve(term, sol: Solution) -> Term | None:
    if isinstance(term, Var):
        return sol.get(term)
    return term


def _bind(sol: Solution, pattern_terms, values) -> Solution | None:
    new = dict(sol)
    for term, value in zip(pattern_terms, values):
        if isinstance(term, Var):
            old = new.get(term)
            if old is None:
                new[term] = value
            elif old != value:
                return None
    return new


def _extend(ctx: _Context, solutions: list[Solution], tp: TriplePattern) -> list[Solution]:
    out: list[Solution] = []
    for sol in solutions:
        s = _resolve(tp.subject, sol)
        p = _resolve(tp.predicate, sol)
        o = _resolve(tp.object, sol)
        if p is not None and not isinstance(p, Iri):
            continue
        if tp.path == "+":
            assert isinstance(p, Iri)
            for x, y in ctx.path_pairs(s, p, o):
                new = _bind(sol, (tp.subject, tp.object), (x, y))
                if new is not None:
                    out.append(new)
            continue
        for t in ctx.match(s, p, o):
            new = _bind(sol, (tp.subject, tp.predicate, tp.object), t)
            if new is not None:
                out.append(new)
    return out


def _bound_count(tp: TriplePattern, bound: set[Var]) -> int:
    return sum(1 for t in (tp.subject, tp.predicate, tp.object) if not isinstance(t, Var) or t in bound)


def _operand(x: Operand, sol: Solution) -> Term | None:
    if isinstance(x, Var):
        return sol.get(x)
    assert not isinstance(x, Aggregate)
    return x


def _passes(f: Comparison, sol: Solution) -> bool:
    return compare(f.op, _operand(f.left, sol), _operand(f.right, sol))


def _join(left: list[Solution], right: list[Solution]) -> list[Solution]:
    if not left or not right:
        return []
    shared = sorted(set(left[0]) & set(right[0]))
    index: dict[tuple, list[Solution]] = {}
    for r in right:
        index.setdefault(tuple(r.get(v) for v in shared), []).append(r)
    out = []
    for l in left:
        for r in index.get(tuple(l.get(v) for v in shared), ()):
            out.append({**l, **r})
    return out


def _eval_group(ctx: _Context, g: GroupPattern) -> list[Solution]:
    solutions: list[Solution] = [{}]
    bound: set[Var] = set()
    pending = list(g.filters)
    remaining = list(g.triples)

    def run_ready_filters() -> None:
        nonlocal solutions
        for f in list(pending):
            if set(f.variables()) <= bound:
                solutions = [s for s in solutions if _passes(f, s)]
                pending.remove(f)

    run_ready_filters()
    while remaining and solutions:
        best = max(range(len(remaining)),
                   key=lambda i: (_bound_count(remaining[i], bound), remaining[i].path is None, -i))
        tp = remaining.pop(best)
        solutions = _extend(ctx, solutions, tp)
        bound.update(tp.variables())
        run_ready_filters()
    if remaining:
        return []
    for sub in g.subselects:
        if not solutions:
            break
        solutions = _join(solutions, _eval_select(ctx, sub))
        bound.update(sub.output_vars())
        run_ready_filters()
    for f in pending:
        solutions = [s for s in solutions if _passes(f, s)]
    return solutions


def _count(agg: Aggregate, rows: list[Solution]) -> Literal:
    if agg.arg is None:
        values = [tuple(sorted(r.items(), key=lambda kv: kv[0].name)) for r in rows]
    else:
        values = [r[agg.arg] for r in rows if r.get(agg.arg) is not None]
    n = len(set(values)) if agg.distinct else len(values)
    return Literal(n, XSD_INTEGER)


def _eval_select(ctx: _Context, q: SelectQuery) -> list[Solution]:
    solutions = _eval_group(ctx, q.where)
    out_vars = q.output_vars()
    if q.is_grouped:
        keys = q.group_by or []
        groups: dict[tuple, list[Solution]] = {}
        for sol in solutions:
            groups.setdefault(tuple(sol.get(k) for k in keys), []).append(sol)
        rows: list[Solution] = []
        for key, members in groups.items():
            row: Solution = {k: v for k, v in zip(keys, key) if v is not None}
            for binding in q.aggregates:
                row[binding.alias] = _count(binding.aggregate, members)

            def having_operand(x: Operand) -> Term | None:
                if isinstance(x, Aggregate):
                    return _count(x, members)
                return _operand(x, row)

            if all(compare(h.op, having_operand(h.left), having_operand(h.right)) for h in q.having):
                rows.append({v: row[v] for v in out_vars if v in row})
    else:
        rows = [{v: sol[v] for v in out_vars if v in sol} for sol in solutions]
    if q.distinct:
        unique: dict[tuple, Solution] = {}
        for r in rows:
            unique.setdefault(tuple(r.get(v) for v in out_vars), r)
        rows = list(unique.values())
    return rows


def to_table(q: SelectQuery, rows: list[Solution]) -> ResultTable:
    out_vars = q.output_vars()
    table = ResultTable([v.name for v in out_vars], [tuple(r[v] for v in out_vars) for r in rows])  # type: ignore[misc]
    return table.sorted()


def evaluate(ast: SelectQuery, kb: KB) -> ResultTable:
    """Evaluate a parsed query against ``kb``; rows are sorted (deterministic)."""
    ctx = _Context(kb.graph, TypeIndex.build(kb.schema, kb.graph))
    return to_table(ast, _eval_select(ctx, ast))


def run_query(text: str, kb: KB) -> ResultTable:
    return evaluate(parse_query(text), kb)


def sort_key(row: tuple[Term, ...]) -> tuple:
    return tuple(term_key(t) for t in row)
