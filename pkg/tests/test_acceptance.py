"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

from annetto.builder import HAS_NETWORK, HIDDEN_LAYER, LOOP_COUNT, NETWORK
from annetto.examples import build_aae, build_all, build_gan, build_simple_classifier, example_kbs
from annetto.graph import graph_equal
from annetto.queries import Q1, Q1_PROSE, Q2, Q3, Q4
from annetto.query import evaluate, evaluate_naive, parse_query, run_query
from annetto.terms import XSD_DOUBLE, Literal, Triple, ann
from annetto.turtle import parse_turtle, serialize_turtle
from annetto.validator import validate

sys.path.insert(0, str(Path(__file__).parent))
from _gen import random_digraph, random_kb, random_query, random_turtle_graph  # noqa: E402
from _mutations import MUTATIONS, mutated  # noqa: E402


def _local(term) -> str:
    return term.value.rsplit("/", 1)[-1]


def crit_q2():
    rows = run_query(Q2, build_all()).rows
    return {_local(r[0]) for r in rows} == {"AAE"} and len(rows) == 1, f"rows={[_local(r[0]) for r in rows]}"


def crit_q3():
    rows = run_query(Q3, build_all()).rows
    return {_local(r[0]) for r in rows} == {"AAE_AE"} and len(rows) == 1, f"rows={[_local(r[0]) for r in rows]}"


def crit_q4():
    rows = run_query(Q4, build_all()).rows
    ok = len(rows) == 1 and _local(rows[0][0]) == "AAE" and rows[0][1] == Literal("0.68", XSD_DOUBLE)
    return ok, f"rows={[(_local(a), b.lexical) for a, b in rows]}"


def crit_q1():
    kb = build_all()
    verbatim = run_query(Q1, kb).rows
    prose = run_query(Q1_PROSE, kb).rows
    ok = (verbatim == [] and {_local(r[0]) for r in prose} == {"simple_classification"}
          and all(r[1].value > 0.7 for r in prose))
    return ok, f"verbatim={len(verbatim)} rows, prose={[(_local(a), b.lexical) for a, b in prose]}"


def crit_structure():
    gan, aae, simple = build_gan(), build_aae(), build_simple_classifier()
    gan_nets = [n for n in gan.graph.objects(gan.iri("GAN"), HAS_NETWORK) if gan.is_a(n, NETWORK)]
    aae_nets = [n for n in aae.graph.objects(aae.iri("AAE"), HAS_NETWORK) if aae.is_a(n, NETWORK)]
    hidden = [x for x in simple.type_index().all_of(HIDDEN_LAYER)]
    loop = gan.graph.value(gan.iri("gan_trainloop"), LOOP_COUNT)
    ok = len(gan_nets) == 3 and len(aae_nets) == 7 and len(hidden) == 3 and loop is not None and loop.value == 5
    return ok, f"gan={len(gan_nets)} aae={len(aae_nets)} hidden={len(hidden)} loop_count={loop.lexical if loop else None}"


def crit_mutations():
    clean = all(validate(kb).ok for kb in example_kbs().values())
    missed = [rule for rule in MUTATIONS if rule not in validate(mutated(rule)).rule_ids()]
    return clean and not missed and len(MUTATIONS) == 15, f"clean={clean} missed={missed}"


def crit_oracle(n: int = 150):
    rng = random.Random(20240601)
    mismatches = nonempty = 0
    for _ in range(n):
        kb = random_kb(rng)
        assert len(kb.graph) <= 40
        ast = parse_query(random_query(rng, kb.graph))
        fast, slow = evaluate(ast, kb), evaluate_naive(ast, kb)
        mismatches += fast != slow
        nonempty += bool(fast.rows)
    return mismatches == 0, f"instances={n} mismatches={mismatches} non-empty={nonempty}"


def crit_turtle(n: int = 200):
    rng = random.Random(77)
    bad = 0
    for _ in range(n):
        g = random_turtle_graph(rng, rng.randint(0, 40))
        text = serialize_turtle(g)
        bad += not graph_equal(parse_turtle(text), g) or serialize_turtle(g) != text
    for kb in example_kbs().values():
        text = serialize_turtle(kb.graph)
        bad += not graph_equal(parse_turtle(text), kb.graph)
    again = [serialize_turtle(kb.graph) for kb in example_kbs().values()]
    stable = again == [serialize_turtle(kb.graph) for kb in example_kbs().values()]
    return bad == 0 and stable, f"random={n} failures={bad} byte_stable={stable}"


def _reach(n, edges):
    out = set()
    for s in range(n):
        seen, stack = set(), [b for a, b in edges if a == s]
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(b for a, b in edges if a == x)
        out |= {(s, t) for t in seen}
    return out


def crit_paths(n: int = 60):
    from annetto.builder import KB
    from annetto.graph import Graph
    rng = random.Random(4242)
    wrong = cyclic = 0
    query = parse_query("SELECT ?x ?y WHERE { ?x :nextLayer+ ?y }")
    for _ in range(n):
        nodes, edges = random_digraph(rng, rng.randint(1, 30))
        kb = KB(Graph(Triple(nodes[a], ann("nextLayer"), nodes[b]) for a, b in edges))
        index = {x: i for i, x in enumerate(nodes)}
        want = _reach(len(nodes), edges)
        cyclic += any((i, i) in want for i in range(len(nodes)))
        got = {(index[x], index[y]) for x, y in evaluate(query, kb).rows}
        wrong += got != want
    return wrong == 0 and cyclic > 0, f"graphs={n} cyclic={cyclic} wrong={wrong}"


def crit_cli():
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "annetto", *args], capture_output=True, text=True)

    with tempfile.TemporaryDirectory() as tmp:
        d = Path(tmp)
        codes = {"examples": cli("examples", str(d)).returncode}
        codes["valid"] = cli("validate", str(d / "gan.ttl")).returncode
        text = (d / "gan.ttl").read_text(encoding="utf-8")
        (d / "bad.ttl").write_text(text.replace("    :previousLayer :GAN_Generator_hidden_1 ;\n", ""), encoding="utf-8")
        mutated_run = cli("validate", str(d / "bad.ttl"))
        codes["mutated"] = mutated_run.returncode
        (d / "bad.rq").write_text("select ?x where { ?x a }")
        codes["bad_query"] = cli("query", str(d / "gan.ttl"), "--query", str(d / "bad.rq")).returncode
        codes["construct"] = cli("query", str(d / "gan.ttl"), "-e", "CONSTRUCT {?a ?b ?c} WHERE {?a ?b ?c}").returncode
        codes["missing"] = cli("validate", str(d / "missing.ttl")).returncode
        q4 = cli("query", str(d / "aae.ttl"), "--query", str(d / "q4.rq")).stdout
    want = {"examples": 0, "valid": 0, "mutated": 1, "bad_query": 2, "construct": 2, "missing": 3}
    ok = codes == want and mutated_run.stdout.startswith("R6\t") and q4 == "configuration,evaluation_score\n:AAE,0.68\n"
    return ok, " ".join(f"{k}={v}" for k, v in codes.items())


CRITERIA = [
    (1, "golden query 2 returns {AAE}", crit_q2, 1.0),
    (2, "golden query 3 returns {AAE_AE}", crit_q3, 1.0),
    (3, "golden query 4 returns (AAE, 0.68)", crit_q4, 1.0),
    (4, "query 1 verbatim empty, prose variant {simple_classification}", crit_q1, 1.0),
    (5, "structure counts 3/7 networks, 3 hidden layers, loop_count 5", crit_structure, 5.0),
    (6, "validator mutation suite R1-R15", crit_mutations, 5.0),
    (7, "evaluate == evaluate_naive on random instances", crit_oracle, 60.0),
    (8, "Turtle round trip and byte stability", crit_turtle, 10.0),
    (9, "nextLayer+ matches transitive closure incl. cycles", crit_paths, 10.0),
    (10, "CLI exit codes 0/1/2/3", crit_cli, 30.0),
]


def check(fn, limit):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then fail
        ok, detail = False, f"error: {exc!r}"
    elapsed = time.perf_counter() - start
    if elapsed > limit:
        ok, detail = False, f"{detail}; too slow ({elapsed:.2f}s > {limit}s)"
    return ok, detail, elapsed


def line(number, title, ok, detail, elapsed) -> str:
    return f"{'PASS' if ok else 'FAIL'} [{number:>2}] {title} ({elapsed:.2f}s) {detail}"


@pytest.mark.parametrize("number, title, fn, limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    ok, detail, elapsed = check(fn, limit)
    with capsys.disabled():
        print("\n" + line(number, title, ok, detail, elapsed), end="")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn, limit in CRITERIA:
        ok, detail, elapsed = check(fn, limit)
        failed += not ok
        print(line(number, title, ok, detail, elapsed))
    sys.exit(1 if failed else 0)
