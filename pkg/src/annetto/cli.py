"""Command-line front end: ``annetto validate | query | examples | describe``.

Exit codes: 0 success, 1 validation violations, 2 usage or parse error
(Turtle, query, unsupported construct), 3 I/O error. Results go to
standard output; diagnostics and warnings go to standard error.

Query output formats:

* ``csv``: header of projected variable names (no ``?``), then one line per
  row. IRIs are compacted (``:AAE``), literals printed in canonical lexical form.
* ``json``: ``{"header": [...], "rows": [[cell, ...], ...]}`` where each cell
  is ``{"type": "iri", "value", "display"}`` or
  ``{"type": "literal", "value", "datatype", "display"}``.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from .builder import KB
from .errors import AnnettoError, SchemaError, SyntaxErrorWithPosition, TermError
from .examples import export_examples
from .graph import Graph
from .queries import QUERY_FILES
from .query import evaluate, parse_query
from .schema import builtin_schema, extend_from_graph
from .terms import RDF_TYPE, default_prefixes, expand, term_key
from .turtle import format_term, parse_turtle
from .validator import validate

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_IO = 3


class _Fail(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise _Fail(EXIT_USAGE, f"{path}: not valid UTF-8 ({e.reason})") from e
    except OSError as e:
        raise _Fail(EXIT_IO, f"{path}: {e.strerror or e}") from e


def _load(paths: Sequence[str]) -> KB:
    """Parse and merge Turtle files; schema additions in the files are honoured."""
    graph = Graph()
    prefixes: dict[str, str] = {}
    for path in paths:
        try:
            g = parse_turtle(_read(path))
        except SyntaxErrorWithPosition as e:
            raise _Fail(EXIT_USAGE, f"{path}: {e}") from e
        prefixes.update(g.prefix_map)
        graph = graph.union(g)
    graph.prefix_map = {**default_prefixes(), **prefixes}
    try:
        schema = extend_from_graph(builtin_schema(), graph)
    except SchemaError as e:
        raise _Fail(EXIT_USAGE, f"schema: {e}") from e
    return KB(graph, schema)


def cmd_validate(args: argparse.Namespace) -> int:
    kb = _load([args.file])
    report = validate(kb, strict_feedforward=args.strict_feedforward)
    prefixes = kb.graph.prefix_map
    if args.format == "json":
        sys.stdout.write(report.to_json(prefixes))
    else:
        sys.stdout.write(report.to_text(prefixes))
        for line in report.to_text(prefixes, warnings=True).splitlines():
            print(f"warning: {line}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_query(args: argparse.Namespace) -> int:
    text = args.expr if args.expr is not None else _read(args.query)
    try:
        ast = parse_query(text)
    except SyntaxErrorWithPosition as e:
        raise _Fail(EXIT_USAGE, f"{args.query or 'query'}: {e}") from e
    kb = _load(args.files)
    table = evaluate(ast, kb)
    prefixes = kb.graph.prefix_map
    sys.stdout.write(table.to_json(prefixes) if args.format == "json" else table.to_csv(prefixes))
    return EXIT_OK


def cmd_examples(args: argparse.Namespace) -> int:
    out = Path(args.dir)
    try:
        written = export_examples(out)
        for name, text in QUERY_FILES.items():
            path = out / name
            path.write_text(text, encoding="utf-8", newline="\n")
            written.append(path)
    except OSError as e:
        raise _Fail(EXIT_IO, f"{args.dir}: {e.strerror or e}") from e
    for path in written:
        print(path)
    return EXIT_OK


def cmd_describe(args: argparse.Namespace) -> int:
    kb = _load([args.file])
    prefixes = kb.graph.prefix_map
    try:
        iri = expand(args.iri, prefixes)
    except TermError as e:
        raise _Fail(EXIT_USAGE, f"bad IRI {args.iri!r}: {e}") from e
    shown = format_term(iri, prefixes)
    as_subject = sorted(kb.graph.match(iri, None, None), key=_triple_key)
    as_object = sorted(kb.graph.match(None, None, iri), key=_triple_key)
    if not as_subject and not as_object:
        print(f"no statements about {shown}")
        return EXIT_OK
    types = sorted(kb.type_index().of(iri), key=lambda c: c.value)

    def line(t) -> str:
        return " ".join(format_term(x, prefixes) for x in t) + " ."

    print(f"# {shown}")
    print("types:")
    for c in types:
        print(f"  {format_term(c, prefixes)}")
    print("as subject:")
    for t in as_subject:
        print(f"  {line(t)}")
    print("as object:")
    for t in as_object:
        print(f"  {line(t)}")
    return EXIT_OK


def _triple_key(t) -> tuple:
    return (t.predicate != RDF_TYPE,) + tuple(term_key(x) for x in t)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="annetto", description="Validate, query and export ANNETT-O knowledge bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a Turtle knowledge base against the structural rules")
    p.add_argument("file")
    p.add_argument("--strict-feedforward", action="store_true", help="also reject nextLayer cycles")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a SELECT query over one or more Turtle files (merged)")
    p.add_argument("files", nargs="+", metavar="FILE")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--query", metavar="PATH", help=".rq file holding the query")
    src.add_argument("-e", "--expr", metavar="TEXT", help="query text given inline")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("examples", help="write the example KBs and reference queries into DIR")
    p.add_argument("dir")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("describe", help="list everything a KB states about one IRI")
    p.add_argument("file")
    p.add_argument("iri", help="prefixed name (:GAN), <full-iri> or absolute IRI")
    p.set_defaults(func=cmd_describe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except _Fail as e:
        print(f"annetto: {e}", file=sys.stderr)
        return e.code
    except AnnettoError as e:
        print(f"annetto: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
