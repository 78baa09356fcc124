"""Recursive-descent parser for the SPARQL SELECT subset.

Accepted: ``PREFIX`` declarations; ``SELECT [DISTINCT]`` with variables,
``*`` or ``(COUNT([DISTINCT] ?v|*) AS ?alias)``; a WHERE group containing
triple patterns (``;``/``,`` abbreviations, ``a``, ``iri+`` paths),
``FILTER (x op y)``, nested ``{ SELECT ... }`` subqueries and nested groups;
``GROUP BY`` and ``HAVING``. Anything else recognisable as SPARQL raises
:class:`UnsupportedFeatureError`.
"""

from __future__ import annotations

from collections.abc import Mapping

from .._lexer import Token, tokenize, unescape
from ..errors import QuerySyntaxError, TermError, UnsupportedFeatureError
from ..terms import (
    ANNETTO, OWL, RDF, RDF_TYPE, RDFS, XSD, XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    Iri, Literal,
)
from .ast import (
    Aggregate, AggregateBinding, Comparison, GroupPattern, Operand, PatternTerm, Projection,
    SelectQuery, TriplePattern, Var,
)

QUERY_PREFIXES = {"": ANNETTO, "annetto": ANNETTO, "rdf": RDF, "rdfs": RDFS, "owl": OWL, "xsd": XSD}

_PREFIX = r"[A-Za-z](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"
_LOCAL = r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"

_RULES = [
    ("WS", r"\s+"),
    ("COMMENT", r"#[^\n]*"),
    ("LONG_STRING", r'"""|' + r"'''"),
    ("STRING", r'"(?:[^"\\\n\r]|\\.)*"|' + r"'(?:[^'\\\n\r]|\\.)*'"),
    ("UNTERMINATED", r'"[^\n]*|' + r"'[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\s]*>"),
    ("VAR", r"[?$][A-Za-z0-9_]+"),
    ("DTYPE", r"\^\^"),
    ("LANGTAG", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("BLANK", r"_:[A-Za-z0-9_.\-]*"),
    ("PNAME", rf"(?:{_PREFIX})?:(?:{_LOCAL})?"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
    ("OP", r"!=|<=|>=|&&|\|\||[=<>!]"),
    ("PUNCT", r"[{}()\[\].;,*+/^|]"),
    ("WORD", r"[A-Za-z_][A-Za-z0-9_]*"),
]

_UNSUPPORTED_WORDS = {
    "CONSTRUCT", "ASK", "DESCRIBE", "OPTIONAL", "UNION", "MINUS", "ORDER", "LIMIT", "OFFSET",
    "BIND", "VALUES", "SERVICE", "GRAPH", "FROM", "NAMED", "REDUCED", "BASE", "SUM", "AVG", "MIN",
    "MAX", "SAMPLE", "GROUP_CONCAT", "EXISTS", "NOT", "REGEX", "STR", "LANG", "LANGMATCHES",
    "BOUND", "IF", "COALESCE", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP", "CREATE", "WITH",
    "USING", "SILENT", "IN",
}
_COMPARISON_OPS = {"=", "!=", "<", ">", "<=", ">="}


def _error(message: str, line: int, column: int, token: str | None = None) -> QuerySyntaxError:
    return QuerySyntaxError(message, line, column, token)


class _Parser:
    def __init__(self, text: str, prefixes: Mapping[str, str]) -> None:
        self.tokens = tokenize(text, _RULES, _error)
        self.pos = 0
        self.prefixes = dict(prefixes)

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, t: Token | None = None) -> QuerySyntaxError:
        t = t or self.tok
        return _error(message, t.line, t.column, t.text or "<end of input>")

    def unsupported(self, feature: str, t: Token | None = None) -> UnsupportedFeatureError:
        t = t or self.tok
        return UnsupportedFeatureError(feature, t.line, t.column, t.text)

    def is_word(self, *words: str) -> bool:
        t = self.tok
        return t.kind == "WORD" and t.text.upper() in words

    def is_punct(self, ch: str) -> bool:
        return self.tok.kind == "PUNCT" and self.tok.text == ch

    def expect_word(self, word: str) -> None:
        self.screen()
        if not self.is_word(word):
            raise self.fail(f"expected {word}")
        self.advance()

    def expect_punct(self, ch: str) -> None:
        self.screen()
        if not self.is_punct(ch):
            raise self.fail(f"expected {ch!r}")
        self.advance()

    def screen(self) -> None:
        """Raise the specific unsupported-feature error for the current token, if any."""
        t = self.tok
        if t.kind == "WORD":
            word = t.text.upper()
            if word in _UNSUPPORTED_WORDS:
                feature = {"ORDER": "ORDER BY", "GROUP_CONCAT": "GROUP_CONCAT"}.get(word, word)
                raise self.unsupported(feature)
        elif t.kind == "LONG_STRING":
            raise self.unsupported("multiline string")
        elif t.kind == "UNTERMINATED":
            raise self.fail("unterminated string")
        elif t.kind == "BLANK" or (t.kind == "PUNCT" and t.text in "[]"):
            raise self.unsupported("blank node")
        elif t.kind == "LANGTAG":
            raise self.unsupported("language tag")
        elif t.kind == "OP" and t.text in ("&&", "||", "!"):
            raise self.unsupported(f"boolean operator {t.text}")

    # -- grammar ---------------------------------------------------------

    def parse(self) -> SelectQuery:
        while True:
            self.screen()
            if not self.is_word("PREFIX"):
                break
            self.advance()
            t = self.tok
            if t.kind != "PNAME" or not t.text.endswith(":"):
                raise self.fail("expected a prefix name such as 'ex:'")
            self.advance()
            iri = self.tok
            if iri.kind != "IRIREF":
                raise self.fail("expected <namespace IRI>")
            self.advance()
            self.prefixes[t.text[:-1]] = iri.text[1:-1]
        query = self.select()
        self.screen()
        if self.tok.kind != "EOF":
            raise self.fail("unexpected content after query")
        return query

    def select(self) -> SelectQuery:
        start = self.tok
        self.expect_word("SELECT")
        distinct = False
        if self.is_word("DISTINCT"):
            self.advance()
            distinct = True
        projection: list[Projection] | None = []
        if self.is_punct("*"):
            self.advance()
            projection = None
        else:
            assert projection is not None
            while True:
                self.screen()
                if self.tok.kind == "VAR":
                    projection.append(Var(self.advance().text[1:]))
                elif self.is_punct("("):
                    self.advance()
                    agg = self.aggregate()
                    self.expect_word("AS")
                    if self.tok.kind != "VAR":
                        raise self.fail("expected alias variable")
                    alias = Var(self.advance().text[1:])
                    self.expect_punct(")")
                    projection.append(AggregateBinding(agg, alias))
                else:
                    break
            if not projection:
                raise self.fail("expected projected variables or '*'")
        if self.is_word("WHERE"):
            self.advance()
        where = self.group()
        group_by: list[Var] | None = None
        having: list[Comparison] = []
        self.screen()
        if self.is_word("GROUP"):
            self.advance()
            self.expect_word("BY")
            group_by = []
            while self.tok.kind == "VAR":
                group_by.append(Var(self.advance().text[1:]))
            if not group_by:
                self.screen()
                raise self.fail("expected GROUP BY variables")
        self.screen()
        if self.is_word("HAVING"):
            self.advance()
            having.append(self.constraint(allow_aggregates=True))
            while self.is_punct("("):
                having.append(self.constraint(allow_aggregates=True))
        query = SelectQuery(projection, where, distinct, group_by, having)
        _check_scope(query, start)
        return query

    def aggregate(self) -> Aggregate:
        self.screen()
        if not self.is_word("COUNT"):
            raise self.fail("expected an aggregate such as COUNT")
        self.advance()
        self.expect_punct("(")
        distinct = False
        if self.is_word("DISTINCT"):
            self.advance()
            distinct = True
        if self.is_punct("*"):
            self.advance()
            arg = None
        elif self.tok.kind == "VAR":
            arg = Var(self.advance().text[1:])
        else:
            raise self.fail("expected a variable or '*' in COUNT")
        self.expect_punct(")")
        return Aggregate("count", arg, distinct)

    def group(self) -> GroupPattern:
        self.expect_punct("{")
        g = GroupPattern()
        while True:
            self.screen()
            t = self.tok
            if self.is_punct("}"):
                self.advance()
                return g
            if t.kind == "EOF":
                raise self.fail("unterminated group, expected '}'")
            if self.is_punct("."):
                self.advance()
            elif self.is_punct("{"):
                if self.tokens[self.pos + 1].kind == "WORD" and self.tokens[self.pos + 1].text.upper() == "SELECT":
                    self.advance()
                    g.subselects.append(self.select())
                    self.expect_punct("}")
                else:
                    inner = self.group()
                    g.subselects.append(SelectQuery(None, inner))
            elif self.is_word("FILTER"):
                self.advance()
                g.filters.append(self.constraint(allow_aggregates=False))
            else:
                self.triples_same_subject(g)

    def triples_same_subject(self, g: GroupPattern) -> None:
        subject = self.term("a subject")
        while True:
            pred, path = self.verb()
            while True:
                obj = self.term("an object")
                g.triples.append(TriplePattern(subject, pred, obj, path))
                if self.is_punct(","):
                    self.advance()
                    continue
                break
            if self.is_punct(";"):
                while self.is_punct(";"):
                    self.advance()
                self.screen()
                if self.is_punct(".") or self.is_punct("}") or self.is_punct("{") or self.is_word("FILTER"):
                    return
                continue
            return

    def verb(self) -> tuple[Var | Iri, str | None]:
        self.screen()
        t = self.tok
        pred: Var | Iri
        if t.kind == "VAR":
            self.advance()
            pred = Var(t.text[1:])
        elif t.kind == "WORD" and t.text == "a":
            self.advance()
            pred = RDF_TYPE
        elif t.kind in ("IRIREF", "PNAME"):
            self.advance()
            pred = self.iri(t)
        elif self.is_punct("^") or self.is_punct("("):
            raise self.unsupported("property path")
        else:
            raise self.fail("expected a predicate")
        path = None
        if self.tok.kind == "PUNCT" and self.tok.text in "+*/|^":
            mod = self.tok
            if mod.text != "+":
                raise self.unsupported(f"property path {mod.text!r}", mod)
            if isinstance(pred, Var):
                raise self.fail("path modifier '+' needs an IRI predicate", mod)
            self.advance()
            path = "+"
        return pred, path

    def iri(self, t: Token) -> Iri:
        try:
            if t.kind == "IRIREF":
                return Iri(t.text[1:-1])
            prefix, _, local = t.text.partition(":")
            if prefix not in self.prefixes:
                raise self.fail(f"undeclared prefix {prefix + ':'!r}", t)
            return Iri(self.prefixes[prefix] + local)
        except TermError as exc:
            raise self.fail(str(exc), t) from None

    def term(self, role: str) -> PatternTerm:
        self.screen()
        t = self.tok
        if t.kind == "VAR":
            self.advance()
            return Var(t.text[1:])
        if t.kind in ("IRIREF", "PNAME"):
            self.advance()
            return self.iri(t)
        lit = self.literal()
        if lit is not None:
            return lit
        raise self.fail(f"expected {role}")

    def literal(self) -> Literal | None:
        t = self.tok
        try:
            if t.kind == "STRING":
                self.advance()
                try:
                    body = unescape(t.text[1:-1])
                except ValueError as exc:
                    raise self.fail(str(exc), t) from None
                if self.tok.kind == "DTYPE":
                    self.advance()
                    dt = self.tok
                    if dt.kind not in ("IRIREF", "PNAME"):
                        raise self.fail("expected a datatype IRI")
                    self.advance()
                    return Literal(body, self.iri(dt).value)
                self.screen()
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
        return None

    def operand(self, allow_aggregates: bool) -> Operand:
        self.screen()
        t = self.tok
        if t.kind == "VAR":
            self.advance()
            return Var(t.text[1:])
        if t.kind in ("IRIREF", "PNAME"):
            self.advance()
            return self.iri(t)
        if self.is_word("COUNT"):
            if not allow_aggregates:
                raise self.fail("aggregates are only allowed in SELECT and HAVING")
            return self.aggregate()
        lit = self.literal()
        if lit is not None:
            return lit
        if t.kind == "WORD":
            raise self.unsupported(f"function {t.text}")
        raise self.fail("expected a variable, IRI or literal")

    def constraint(self, allow_aggregates: bool) -> Comparison:
        self.expect_punct("(")
        if self.is_punct("("):
            inner = self.constraint(allow_aggregates)
            self.expect_punct(")")
            return inner
        left = self.operand(allow_aggregates)
        self.screen()
        op = self.tok
        if op.kind != "OP" or op.text not in _COMPARISON_OPS:
            raise self.fail("expected a comparison operator")
        self.advance()
        right = self.operand(allow_aggregates)
        self.expect_punct(")")
        return Comparison(op.text, left, right)


def _check_scope(q: SelectQuery, at: Token) -> None:
    def fail(message: str) -> QuerySyntaxError:
        return QuerySyntaxError(message, at.line, at.column, at.text)

    visible = set(q.where.variables())
    aliases: set[Var] = set()
    for agg in q.aggregates:
        if agg.alias in visible or agg.alias in aliases:
            raise fail(f"aggregate alias {agg.alias} is not a fresh variable")
        if agg.aggregate.arg is not None and agg.aggregate.arg not in visible:
            raise fail(f"aggregated variable {agg.aggregate.arg} is not bound in WHERE")
        aliases.add(agg.alias)
    for v in q.group_by or ():
        if v not in visible:
            raise fail(f"GROUP BY variable {v} is not bound in WHERE")
    if q.projection is None:
        if q.is_grouped:
            raise fail("SELECT * cannot be combined with grouping")
        return
    plain = [p for p in q.projection if isinstance(p, Var)]
    if len(set(q.output_vars())) != len(q.output_vars()):
        raise fail("duplicate projected variable")
    for v in plain:
        if v not in visible:
            raise fail(f"projected variable {v} is not bound in WHERE")
        if q.is_grouped and v not in (q.group_by or ()):
            raise fail(f"projected variable {v} is neither grouped nor aggregated")
    for cond in q.having:
        for v in cond.variables():
            if v not in aliases and v not in (q.group_by or ()):
                raise fail(f"HAVING variable {v} is neither grouped nor an aggregate alias")
        for side in (cond.left, cond.right):
            if isinstance(side, Aggregate) and side.arg is not None and side.arg not in visible:
                raise fail(f"aggregated variable {side.arg} is not bound in WHERE")


def parse_query(text: str, prefixes: Mapping[str, str] | None = None) -> SelectQuery:
    """Parse query ``text``; ``:`` defaults to the ANNETT-O namespace."""
    return _Parser(text, QUERY_PREFIXES if prefixes is None else prefixes).parse()
