"""Seeded generators for random graphs, digraphs and queries used by property tests."""

from __future__ import annotations

import random

from annetto.builder import KB
from annetto.graph import Graph
from annetto.terms import (
    ANNETTO, RDF_TYPE, XSD_BOOLEAN, XSD_DATETIME, XSD_DOUBLE, XSD_INTEGER, XSD_STRING, Iri, Literal,
    Triple, ann,
)

NS = "http://example.org/kb/"
NODES = [Iri(f"{NS}n{i}") for i in range(6)]
PREDICATES = [Iri(f"{NS}p{i}") for i in range(3)] + [ann("nextLayer")]
# a slice of the built-in hierarchy so entailment has something to do
CLASSES = [ann(c) for c in ("Layer", "HiddenLayer", "ActivationLayer", "FullyConnectedLayer",
                            "InputLayer", "Network")]
LITERALS = [Literal(1, XSD_INTEGER), Literal(2, XSD_INTEGER), Literal(1.5, XSD_DOUBLE),
            Literal("x", XSD_STRING)]


def random_literal(rng: random.Random) -> Literal:
    kind = rng.randrange(6)
    if kind == 0:
        return Literal(rng.randint(-10**6, 10**6), XSD_INTEGER)
    if kind == 1:
        return Literal(rng.choice([0.0, -0.5, 1e-7, 3.25, 1e22, rng.uniform(-1e3, 1e3)]), XSD_DOUBLE)
    if kind == 2:
        return Literal(rng.choice([True, False]), XSD_BOOLEAN)
    if kind == 3:
        return Literal(f"2020-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}T12:3{rng.randint(0, 9)}:00Z",
                       XSD_DATETIME)
    alphabet = 'ab "\\\n\té中\'#.;,:<>'
    return Literal("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8))), XSD_STRING)


def random_turtle_graph(rng: random.Random, size: int = 25) -> Graph:
    """Random graph over awkward-but-legal IRIs and every supported datatype."""
    locals_ = ["a", "b_1", "c-d", "e.f", "G9", "_h", "x" * 3]
    iris = [Iri(NS + name) for name in locals_] + [Iri("urn:uuid:1234-5678"), Iri(ANNETTO + "Layer"),
                                                   Iri("http://other.example/path#frag")]
    g = Graph()
    while len(g) < size:
        s = rng.choice(iris)
        p = RDF_TYPE if rng.random() < 0.2 else rng.choice(iris)
        o = rng.choice(iris) if rng.random() < 0.5 else random_literal(rng)
        g.insert(Triple(s, p, o))
    return g


def random_kb(rng: random.Random, size: int | None = None) -> KB:
    """Small graph with a dense vocabulary so random queries actually match."""
    size = size if size is not None else rng.randint(10, 40)
    g = Graph()
    attempts = 0
    while len(g) < size and attempts < 10 * size:
        attempts += 1
        s = rng.choice(NODES)
        r = rng.random()
        if r < 0.25:
            g.insert(Triple(s, RDF_TYPE, rng.choice(CLASSES)))
        elif r < 0.8:
            g.insert(Triple(s, rng.choice(PREDICATES), rng.choice(NODES)))
        else:
            g.insert(Triple(s, rng.choice(PREDICATES), rng.choice(LITERALS)))
    return KB(g)


def random_digraph(rng: random.Random, n: int | None = None) -> tuple[list[Iri], set[tuple[int, int]]]:
    n = n if n is not None else rng.randint(1, 30)
    density = rng.uniform(0.02, 0.2)
    edges = {(a, b) for a in range(n) for b in range(n) if rng.random() < density}
    return [Iri(f"{NS}v{i}") for i in range(n)], edges


def _fmt(t) -> str:
    if isinstance(t, Iri):
        return f"<{t.value}>"
    if t.datatype == XSD_STRING:
        return f'"{t.lexical}"'
    return t.lexical


def random_query(rng: random.Random, graph: Graph | None = None) -> str:
    """Random SELECT text: up to 4 patterns over at most 4 variables, maybe a
    filter, a transitive path, a COUNT aggregate or a grouped subquery.

    With ``graph``, some patterns are lifted from its triples so that joins
    have a fair chance of matching."""
    triples = list(graph) if graph is not None else []
    var_names = ["a", "b", "c"][: rng.choice([1, 2, 2, 3, 3])]
    used: list[str] = []

    def slot(allow_literal: bool = False, avoid: str | None = None) -> str:
        if rng.random() < 0.85:
            choices = [v for v in var_names if "?" + v != avoid] or var_names
            v = rng.choice(choices)
            if v not in used:
                used.append(v)
            return "?" + v
        if allow_literal and rng.random() < 0.3:
            return _fmt(rng.choice(LITERALS))
        return _fmt(rng.choice(NODES))

    patterns = []
    for _ in range(rng.randint(1, 4)):
        r = rng.random()
        if r < 0.25:
            patterns.append(f"{slot()} a {_fmt(rng.choice(CLASSES))} .")
        elif r < 0.4:
            first = slot()
            patterns.append(f"{first} {_fmt(rng.choice(PREDICATES))}+ {slot(avoid=first)} .")
        elif r < 0.5:
            if "p" not in used:
                used.append("p")
            first = slot()
            patterns.append(f"{first} ?p {slot(True, avoid=first)} .")
        elif triples and r < 0.75:
            t = rng.choice(triples)
            s_ = slot() if rng.random() < 0.8 else _fmt(t.subject)
            o_ = slot(avoid=s_) if rng.random() < 0.8 else _fmt(t.object)
            patterns.append(f"{s_} {_fmt(t.predicate)} {o_} .")
        else:
            first = slot()
            patterns.append(f"{first} {_fmt(rng.choice(PREDICATES))} {slot(True, avoid=first)} .")
    if not used:
        used.append("a")
        patterns.append(f"?a {_fmt(rng.choice(PREDICATES))} ?a .")

    body = " ".join(patterns)
    if rng.random() < 0.35:
        v = rng.choice(used)
        if rng.random() < 0.5 and len(used) > 1:
            w = rng.choice([u for u in used if u != v] or used)
            body += f" FILTER (?{v} != ?{w})"
        else:
            op = rng.choice(["=", "!=", "<", ">", "<=", ">="])
            pool = LITERALS + NODES[:2] if op in ("=", "!=") else LITERALS
            body += f" FILTER (?{v} {op} {_fmt(rng.choice(pool))})"

    if rng.random() < 0.15:
        # grouped subquery joined on its key
        key = rng.choice(used)
        counted = rng.choice(["?z", "*"])
        pred = _fmt(rng.choice(PREDICATES))
        sub = f"{{ SELECT ?{key} (COUNT({counted}) AS ?k) WHERE {{ ?{key} {pred} ?z . }} GROUP BY ?{key} }}"
        body += " " + sub
        used.append("k")

    r = rng.random()
    distinct = "DISTINCT " if rng.random() < 0.3 else ""
    if r < 0.25 and len(used) >= 1:
        key = rng.choice([u for u in used if u != "k"] or used)
        others = [u for u in used if u != key]
        arg = "?" + rng.choice(others) if others and rng.random() < 0.7 else "*"
        inner_distinct = "DISTINCT " if rng.random() < 0.3 and arg != "*" else ""
        having = ""
        if rng.random() < 0.4:
            having = f" HAVING (?n {rng.choice(['>', '>=', '='])} {rng.randint(0, 3)})"
        return (f"SELECT {distinct}?{key} (COUNT({inner_distinct}{arg}) AS ?n) WHERE {{ {body} }} "
                f"GROUP BY ?{key}{having}")
    if r < 0.3:
        return f"SELECT (COUNT(*) AS ?n) WHERE {{ {body} }}"
    if r < 0.45:
        return f"SELECT {distinct}* WHERE {{ {body} }}"
    proj = rng.sample(used, rng.randint(1, len(used)))
    return f"SELECT {distinct}{' '.join('?' + v for v in proj)} WHERE {{ {body} }}"
