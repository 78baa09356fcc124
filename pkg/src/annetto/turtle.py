"""Read and write the Turtle subset used for knowledge-base files.

Supported: ``@prefix``/``PREFIX`` directives, subject groups with ``;``
predicate lists and ``,`` object lists, the keyword ``a``, IRIs in ``<>`` or
prefixed form, string/integer/double/boolean literals and ``"..."^^type``
typed literals, ``#`` comments. Blank nodes, collections, language tags and
triple-quoted strings are rejected as unsupported.

Serialization is canonical: prefix lines sorted by name, subjects sorted by expanded IRI, ``a`` first and
then predicates by IRI, objects by value. Output uses LF line endings.
"""

from __future__ import annotations

from collections.abc import Mapping

from ._lexer import Token, escape, tokenize, unescape
from .errors import TermError, TurtleSyntaxError, UnsupportedFeatureError
from .graph import Graph
from .terms import (
    RDF_TYPE, XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    Iri, Literal, Term, Triple, compact, default_prefixes, term_key,
)

_PREFIX = r"[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"
_LOCAL = r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"

_RULES = [
    ("WS", r"\s+"),
    ("COMMENT", r"#[^\n]*"),
    ("LONG_STRING", r'"""|' + r"'''"),
    ("STRING", r'"(?:[^"\\\n\r]|\\.)*"|' + r"'(?:[^'\\\n\r]|\\.)*'"),
    ("UNTERMINATED", r'"[^\n]*|' + r"'[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\s]*>"),
    ("AT_PREFIX", r"@prefix\b"),
    ("AT_OTHER", r"@[A-Za-z][A-Za-z0-9\-]*"),
    ("DTYPE", r"\^\^"),
    ("BLANK", r"_:[A-Za-z0-9_.\-]*"),
    ("PNAME", rf"(?:{_PREFIX})?:(?:{_LOCAL})?"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
    ("WORD", r"[A-Za-z][A-Za-z0-9_]*"),
    ("PUNCT", r"[.;,]"),
    ("BRACKET", r"[\[\]()]"),
    ("BRACE", r"[{}]"),
]


def _error(message: str, line: int, column: int, token: str | None = None) -> TurtleSyntaxError:
    return TurtleSyntaxError(message, line, column, token)


class _Parser:
    def __init__(self, text: str, prefixes: Mapping[str, str]) -> None:
        self.tokens = tokenize(text, _RULES, _error)
        self.pos = 0
        self.defaults = dict(prefixes)
        self.declared: dict[str, str] = {}
        self.graph = Graph(prefixes={})

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, t: Token | None = None) -> TurtleSyntaxError:
        t = t or self.tok
        return _error(message, t.line, t.column, t.text or "<end of input>")

    def unsupported(self, feature: str, t: Token | None = None) -> UnsupportedFeatureError:
        t = t or self.tok
        return UnsupportedFeatureError(feature, t.line, t.column, t.text)

    def check_unsupported(self, t: Token) -> None:
        if t.kind == "LONG_STRING":
            raise self.unsupported("multiline string", t)
        if t.kind == "UNTERMINATED":
            raise self.fail("unterminated string", t)
        if t.kind == "BLANK":
            raise self.unsupported("blank node", t)
        if t.kind == "BRACKET":
            raise self.unsupported("blank node" if t.text in "[]" else "collection", t)
        if t.kind == "BRACE":
            raise self.unsupported("formula/graph block", t)
        if t.kind == "AT_OTHER":
            raise self.unsupported("@base" if t.text == "@base" else f"directive {t.text}", t)

    def expect_punct(self, ch: str) -> None:
        t = self.tok
        self.check_unsupported(t)
        if t.kind != "PUNCT" or t.text != ch:
            raise self.fail(f"expected {ch!r}")
        self.advance()

    def parse(self) -> Graph:
        while self.tok.kind != "EOF":
            t = self.tok
            if t.kind == "AT_PREFIX":
                self.advance()
                self.prefix_decl()
                self.expect_punct(".")
            elif t.kind == "WORD" and t.text.upper() == "PREFIX":
                self.advance()
                self.prefix_decl()
            elif t.kind == "WORD" and t.text.upper() == "BASE":
                raise self.unsupported("BASE")
            else:
                self.triples()
                self.expect_punct(".")
        self.graph.prefix_map = dict(self.declared)
        return self.graph

    def prefix_decl(self) -> None:
        t = self.tok
        if t.kind != "PNAME" or not t.text.endswith(":"):
            raise self.fail("expected a prefix name such as 'ex:'")
        self.advance()
        iri_tok = self.tok
        if iri_tok.kind != "IRIREF":
            raise self.fail("expected <namespace IRI>")
        self.advance()
        self.declared[t.text[:-1]] = iri_tok.text[1:-1]

    def iri(self, t: Token) -> Iri:
        try:
            if t.kind == "IRIREF":
                return Iri(t.text[1:-1])
            prefix, _, local = t.text.partition(":")
            ns = self.declared.get(prefix, self.defaults.get(prefix))
            if ns is None:
                raise self.fail(f"undeclared prefix {prefix + ':'!r}", t)
            return Iri(ns + local)
        except TermError as exc:
            raise self.fail(str(exc), t) from None

    def subject(self) -> Iri:
        t = self.tok
        self.check_unsupported(t)
        if t.kind not in ("IRIREF", "PNAME"):
            raise self.fail("expected a subject IRI")
        self.advance()
        return self.iri(t)

    def verb(self) -> Iri:
        t = self.tok
        self.check_unsupported(t)
        if t.kind == "WORD" and t.text == "a":
            self.advance()
            return RDF_TYPE
        if t.kind not in ("IRIREF", "PNAME"):
            raise self.fail("expected a predicate")
        self.advance()
        return self.iri(t)

    def object(self) -> Term:
        t = self.tok
        self.check_unsupported(t)
        if t.kind in ("IRIREF", "PNAME"):
            self.advance()
            return self.iri(t)
        try:
            if t.kind == "STRING":
                self.advance()
                try:
                    body = unescape(t.text[1:-1])
                except ValueError as exc:
                    raise self.fail(str(exc), t) from None
                if self.tok.kind == "DTYPE":
                    self.advance()
                    dt_tok = self.tok
                    if dt_tok.kind not in ("IRIREF", "PNAME"):
                        raise self.fail("expected a datatype IRI")
                    self.advance()
                    datatype = self.iri(dt_tok)
                    try:
                        return Literal(body, datatype.value)
                    except TermError as exc:
                        raise self.fail(str(exc), t) from None
                if self.tok.kind == "AT_OTHER":
                    raise self.unsupported("language tag")
                return Literal(body, XSD_STRING)
            if t.kind == "INTEGER":
                self.advance()
                return Literal(t.text, XSD_INTEGER)
            if t.kind in ("DECIMAL", "DOUBLE"):
                self.advance()
                return Literal(t.text, XSD_DOUBLE)
            if t.kind == "WORD" and t.text in ("true", "false"):
                self.advance()
                return Literal(t.text, XSD_BOOLEAN)
        except TermError as exc:
            raise self.fail(str(exc), t) from None
        raise self.fail("expected an object")

    def triples(self) -> None:
        s = self.subject()
        while True:
            p = self.verb()
            while True:
                self.graph.insert(Triple(s, p, self.object()))
                if self.tok.kind == "PUNCT" and self.tok.text == ",":
                    self.advance()
                    continue
                break
            if self.tok.kind == "PUNCT" and self.tok.text == ";":
                while self.tok.kind == "PUNCT" and self.tok.text == ";":
                    self.advance()
                if self.tok.kind == "PUNCT" and self.tok.text == ".":
                    return
                continue
            return


def parse_turtle(text: str, prefixes: Mapping[str, str] | None = None) -> Graph:
    """Parse Turtle ``text`` into a new :class:`Graph`.

    ``prefixes`` resolves prefixed names the document does not declare
    (defaults to the standard map, where ``:`` is the instance namespace).
    The resulting graph's ``prefix_map`` holds the document's own directives.
    """
    return _Parser(text, default_prefixes() if prefixes is None else prefixes).parse()


def format_term(term: Term, prefixes: Mapping[str, str]) -> str:
    """Turtle spelling of a single term."""
    if isinstance(term, Iri):
        return compact(term, dict(prefixes))
    if term.datatype == XSD_STRING:
        return f'"{escape(term.lexical)}"'
    if term.datatype in (XSD_INTEGER, XSD_BOOLEAN):
        return term.lexical
    return f'"{escape(term.lexical)}"^^{compact(Iri(term.datatype), dict(prefixes))}'


def _predicate_key(p: Iri) -> tuple[int, str]:
    return (0, "") if p == RDF_TYPE else (1, p.value)


def serialize_turtle(graph: Graph, prefixes: Mapping[str, str] | None = None) -> str:
    """Deterministic Turtle text for ``graph`` (byte-stable for a given triple set)."""
    if prefixes is None:
        prefixes = graph.prefix_map or default_prefixes()
    prefixes = dict(prefixes)
    lines = [f"@prefix {prefix}: <{ns}> ." for prefix, ns in sorted(prefixes.items())]
    by_subject: dict[Iri, dict[Iri, list[Term]]] = {}
    for s, p, o in graph.match():
        by_subject.setdefault(s, {}).setdefault(p, []).append(o)
    for s in sorted(by_subject, key=lambda i: i.value):
        preds = by_subject[s]
        chunks = []
        for p in sorted(preds, key=_predicate_key):
            verb = "a" if p == RDF_TYPE else format_term(p, prefixes)
            objs = ", ".join(format_term(o, prefixes) for o in sorted(preds[p], key=term_key))
            chunks.append(f"{verb} {objs}")
        lines.append("")
        lines.append(f"{format_term(s, prefixes)} " + " ;\n    ".join(chunks) + " .")
    return "\n".join(lines) + "\n"


def read_turtle(path: str, prefixes: Mapping[str, str] | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_turtle(fh.read(), prefixes)


def write_turtle(graph: Graph, path: str, prefixes: Mapping[str, str] | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_turtle(graph, prefixes))
