import random

import pytest

from annetto.builder import KB
from annetto.errors import QuerySyntaxError, UnsupportedFeatureError
from annetto.examples import build_aae, build_all, build_simple_classifier
from annetto.graph import Graph
from annetto.queries import Q1, Q1_PROSE, Q2, Q3, Q4, QUERY_FILES
from annetto.query import (
    Aggregate, ResultTable, SelectQuery, TriplePattern, Var, evaluate, evaluate_naive, parse_query, run_query,
)
from annetto.terms import ANNETTO, RDF_TYPE, XSD_DOUBLE, XSD_INTEGER, Iri, Literal, Triple, ann
from _gen import NS, random_digraph, random_kb, random_query


def A(local):
    return Iri(ANNETTO + local)


@pytest.fixture(scope="module")
def examples_kb():
    return build_all()


# -- parsing ---------------------------------------------------------------

def test_parse_trivial():
    ast = parse_query("select ?x where { ?x a :Network }")
    assert ast.where.triples == [TriplePattern(Var("x"), RDF_TYPE, A("Network"))]
    assert ast.output_vars() == [Var("x")]


@pytest.mark.parametrize("text", [Q1, Q2, Q3, Q4, Q1_PROSE])
def test_reference_queries_parse(text):
    assert isinstance(parse_query(text), SelectQuery)


def test_q2_shape():
    ast = parse_query(Q2)
    assert len(ast.where.subselects) == 1
    sub = ast.where.subselects[0]
    assert sub.group_by and sub.having
    having = sub.having[0]
    assert having.op == ">" and having.right == Literal(3, XSD_INTEGER)


def test_predicate_lists_share_subject():
    ast = parse_query("select ?l where { ?l :nextLayer ?a ; :nextLayer ?b . }")
    assert [t.subject for t in ast.where.triples] == [Var("l"), Var("l")]
    assert [t.object for t in ast.where.triples] == [Var("a"), Var("b")]


def test_path_modifier_and_count_distinct():
    ast = parse_query("SELECT ?a (COUNT(DISTINCT ?b) AS ?n) WHERE { ?a :nextLayer+ ?b } GROUP BY ?a")
    assert ast.where.triples[0].path == "+"
    assert ast.aggregates[0].aggregate == Aggregate("count", Var("b"), True)


@pytest.mark.parametrize("text, feature", [
    ("CONSTRUCT { ?a ?b ?c } WHERE { ?a ?b ?c }", "CONSTRUCT"),
    ("ASK { ?a ?b ?c }", "ASK"),
    ("SELECT ?a WHERE { ?a ?b ?c } ORDER BY ?a", "ORDER"),
    ("SELECT ?a WHERE { ?a ?b ?c } LIMIT 3", "LIMIT"),
    ("SELECT ?a WHERE { ?a ?b ?c OPTIONAL { ?a ?b ?d } }", "OPTIONAL"),
    ("SELECT ?a WHERE { ?a :nextLayer* ?c }", "*"),
    ("SELECT ?a WHERE { ?a :nextLayer/:nextLayer ?c }", "/"),
])
def test_unsupported_features(text, feature):
    with pytest.raises(UnsupportedFeatureError) as info:
        parse_query(text)
    assert "unsupported" in str(info.value)


@pytest.mark.parametrize("text, line", [
    ("select ?x where { ?x a }", 1),
    ("select ?x\nwhere {\n  ?x :p ?y .\n  FILTER (?x ?y)\n}", 4),
    ("select ?x where { ?x nope:p ?y }", 1),
    ("select ?x where { ?x ?p+ ?y }", 1),
    ("select ?z where { ?x :p ?y }", 1),
    ("select ?x (count(?y) as ?x) where { ?x :p ?y } group by ?x", 1),
    ("select ?x ?y where { ?x :p ?y } group by ?x", 1),
    ("select ?x where { ?x :p ?y", 1),
])
def test_syntax_errors_have_positions(text, line):
    with pytest.raises(QuerySyntaxError) as info:
        parse_query(text)
    assert info.value.line == line
    assert f"line {line}, column" in str(info.value)


# -- goldens -----------------------------------------------------------------

def _names(table: ResultTable, col: str) -> set[str]:
    return {t.value.rsplit("/", 1)[-1] for t in table.column(col)}


def test_golden_q2(examples_kb):
    table = run_query(Q2, examples_kb)
    assert _names(table, "c") == {"AAE"} and len(table) == 1


def test_golden_q3(examples_kb):
    table = run_query(Q3, examples_kb)
    assert _names(table, "n") == {"AAE_AE"} and len(table) == 1


def test_golden_q4(examples_kb):
    table = run_query(Q4, examples_kb)
    assert table.header == ["configuration", "evaluation_score"]
    assert table.rows == [(Iri(KB().namespace + "AAE"), Literal("0.68", XSD_DOUBLE))]


def test_q1_verbatim_is_empty_and_prose_variant_finds_classifier(examples_kb):
    assert run_query(Q1, examples_kb).rows == []
    prose = run_query(Q1_PROSE, examples_kb)
    assert _names(prose, "configuration") == {"simple_classification"}
    assert all(score.value > 0.7 for score in prose.column("evaluation_score"))


def test_goldens_hold_on_single_kbs():
    assert _names(run_query(Q4, build_aae()), "configuration") == {"AAE"}
    assert _names(run_query(Q3, build_aae()), "n") == {"AAE_AE"}
    assert run_query(Q2, build_simple_classifier()).rows == []


@pytest.mark.parametrize("name", sorted(QUERY_FILES))
def test_reference_query_headers_follow_projection(name):
    kb = build_simple_classifier()
    ast = parse_query(QUERY_FILES[name])
    fast = evaluate(ast, kb)
    assert fast.header == [v.name for v in ast.output_vars()]


def test_csv_and_json_output(examples_kb):
    table = run_query(Q4, examples_kb)
    prefixes = examples_kb.graph.prefix_map
    assert table.to_csv(prefixes) == "configuration,evaluation_score\n:AAE,0.68\n"
    assert '"datatype": "http://www.w3.org/2001/XMLSchema#double"' in table.to_json(prefixes)
    assert table.to_csv(prefixes) == run_query(Q4, build_all()).to_csv(prefixes)


# -- semantics ---------------------------------------------------------------

def _kb(*triples) -> KB:
    return KB(Graph(triples))


def test_empty_graph_and_single_triple():
    q = parse_query("SELECT ?x ?y WHERE { ?x <http://t/p> ?y }")
    assert evaluate(q, KB()).rows == [] == evaluate_naive(q, KB()).rows
    kb = _kb(Triple(Iri("http://t/a"), Iri("http://t/p"), Iri("http://t/b")))
    assert evaluate(q, kb).rows == [(Iri("http://t/a"), Iri("http://t/b"))] == evaluate_naive(q, kb).rows


def test_type_patterns_use_inference():
    x = Iri("http://t/x")
    kb = _kb(Triple(x, RDF_TYPE, ann("ConcatLayer")))
    for cls in ("ConcatLayer", "AggregationLayer", "HiddenLayer", "Layer"):
        assert evaluate(parse_query(f"SELECT ?l WHERE {{ ?l a :{cls} }}"), kb).rows == [(x,)]
    assert evaluate(parse_query("SELECT ?l WHERE { ?l a :InputLayer }"), kb).rows == []


def test_group_by_over_empty_input_yields_no_rows():
    q = parse_query("SELECT ?x (COUNT(?y) AS ?n) WHERE { ?x <http://t/p> ?y } GROUP BY ?x")
    assert evaluate(q, KB()).rows == []


def test_count_and_distinct():
    a, p = Iri("http://t/a"), Iri("http://t/p")
    kb = _kb(*(Triple(a, p, Literal(i, XSD_INTEGER)) for i in range(4)), Triple(a, Iri("http://t/q"), a))
    q = parse_query("SELECT ?s (COUNT(?o) AS ?n) WHERE { ?s <http://t/p> ?o } GROUP BY ?s HAVING (?n > 3)")
    assert evaluate(q, kb).rows == [(a, Literal(4, XSD_INTEGER))]
    q = parse_query("SELECT DISTINCT ?s WHERE { ?s <http://t/p> ?o }")
    assert evaluate(q, kb).rows == [(a,)]
    q = parse_query("SELECT ?s WHERE { ?s <http://t/p> ?o }")
    assert len(evaluate(q, kb).rows) == 4  # bag semantics


def test_filters_type_errors_exclude_rows():
    a, p = Iri("http://t/a"), Iri("http://t/p")
    kb = _kb(Triple(a, p, a), Triple(a, p, Literal(5, XSD_INTEGER)), Triple(a, p, Literal(2.5, XSD_DOUBLE)))
    q = parse_query("SELECT ?o WHERE { ?s <http://t/p> ?o FILTER (?o > 2) }")
    assert evaluate(q, kb).rows == [(Literal(2.5, XSD_DOUBLE),), (Literal(5, XSD_INTEGER),)]
    q = parse_query("SELECT ?o WHERE { ?s <http://t/p> ?o FILTER (?o != 5) }")
    assert len(evaluate(q, kb).rows) == 2


def test_rows_sorted_lexicographically():
    p = Iri("http://t/p")
    kb = _kb(*(Triple(Iri(f"http://t/{c}"), p, Literal(n, XSD_INTEGER)) for c, n in [("b", 2), ("a", 10), ("a", 9)]))
    rows = evaluate(parse_query("SELECT ?s ?o WHERE { ?s <http://t/p> ?o }"), kb).rows
    assert [(r[0].value[-1], r[1].value) for r in rows] == [("a", 9), ("a", 10), ("b", 2)]


def _closure(n: int, edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
    reach = [[False] * n for _ in range(n)]
    for a, b in edges:
        reach[a][b] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return {(i, j) for i in range(n) for j in range(n) if reach[i][j]}


def _path_kb(nodes, edges) -> KB:
    return _kb(*(Triple(nodes[a], ann("nextLayer"), nodes[b]) for a, b in edges))


@pytest.mark.parametrize("seed", range(40))
def test_transitive_path_matches_floyd_warshall(seed):
    rng = random.Random(seed)
    nodes, edges = random_digraph(rng)
    if seed % 4 == 0 and len(nodes) > 2:  # force a cycle
        edges |= {(0, 1), (1, 2), (2, 0)}
    kb = _path_kb(nodes, edges)
    index = {n: i for i, n in enumerate(nodes)}
    got = evaluate(parse_query("SELECT ?x ?y WHERE { ?x :nextLayer+ ?y }"), kb)
    assert {(index[x], index[y]) for x, y in got.rows} == _closure(len(nodes), edges)
    start = nodes[0]
    got = evaluate(parse_query(f"SELECT ?y WHERE {{ <{start.value}> :nextLayer+ ?y }}"), kb)
    assert {index[y] for (y,) in got.rows} == {j for i, j in _closure(len(nodes), edges) if i == 0}


def test_path_on_self_loop_and_bound_ends():
    a, b = Iri("http://t/a"), Iri("http://t/b")
    kb = _path_kb([a, b], {(0, 0), (0, 1)})
    q = parse_query("SELECT ?y WHERE { <http://t/a> :nextLayer+ ?y }")
    assert set(evaluate(q, kb).rows) == {(a,), (b,)}
    q = parse_query("SELECT ?x WHERE { ?x :nextLayer+ <http://t/a> }")
    assert evaluate(q, kb).rows == [(a,)]
    q = parse_query("SELECT ?x WHERE { ?x :nextLayer+ ?x }")
    assert evaluate(q, kb).rows == [(a,)]


@pytest.mark.parametrize("seed", range(60))
def test_oracle_equivalence(seed):
    rng = random.Random(1000 + seed)
    kb = random_kb(rng)
    ast = parse_query(random_query(rng, kb.graph))
    assert evaluate(ast, kb) == evaluate_naive(ast, kb)


@pytest.mark.parametrize("seed", range(30))
def test_filter_never_enlarges_results(seed):
    rng = random.Random(5000 + seed)
    kb = random_kb(rng)
    nodes = sorted({t.subject for t in kb.graph}, key=lambda i: i.value) or [Iri(NS + "n0")]
    base = f"?a <{NS}p{rng.randrange(3)}> ?b . ?b ?p ?c ."
    plain = evaluate(parse_query(f"SELECT ?a ?b ?c WHERE {{ {base} }}"), kb)
    for flt in (f"FILTER (?a != <{rng.choice(nodes).value}>)", "FILTER (?c > 1)", "FILTER (?a = ?c)"):
        filtered = evaluate(parse_query(f"SELECT ?a ?b ?c WHERE {{ {base} {flt} }}"), kb)
        assert filtered.as_set() <= plain.as_set()


def test_evaluation_is_deterministic(examples_kb):
    prefixes = examples_kb.graph.prefix_map
    assert run_query(Q3, examples_kb).to_json(prefixes) == run_query(Q3, build_all()).to_json(prefixes)
