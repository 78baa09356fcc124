"""Result tables and their CSV / JSON renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from ..terms import XSD_STRING, Iri, Literal, Term, compact, term_key


def display(term: Term | None, prefixes: dict[str, str]) -> str:
    """Compact text for a cell: ``:AAE`` for IRIs, the canonical lexical form for literals."""
    if term is None:
        return ""
    if isinstance(term, Iri):
        return compact(term, prefixes)
    return term.lexical


@dataclass
class ResultTable:
    header: list[str]
    rows: list[tuple[Term, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list[Term]:
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def as_set(self) -> set[tuple[Term, ...]]:
        return set(self.rows)

    def sorted(self) -> ResultTable:
        return ResultTable(list(self.header), sorted(self.rows, key=lambda r: tuple(term_key(t) for t in r)))

    def to_csv(self, prefixes: dict[str, str]) -> str:
        """Header of variable names (no ``?``), one line per row, RFC 4180 quoting."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([display(t, prefixes) for t in row])
        return buf.getvalue()

    def to_json(self, prefixes: dict[str, str]) -> str:
        """``{"header": [...], "rows": [[cell, ...], ...]}``.

        Each cell is ``{"type": "iri", "value": <full IRI>, "display": <compact>}``
        or ``{"type": "literal", "value": <lexical>, "datatype": <IRI>, "display": <lexical>}``.
        """
        def cell(t: Term) -> dict[str, str]:
            if isinstance(t, Iri):
                return {"type": "iri", "value": t.value, "display": compact(t, prefixes)}
            assert isinstance(t, Literal)
            return {"type": "literal", "value": t.lexical, "datatype": t.datatype or XSD_STRING,
                    "display": t.lexical}

        doc = {"header": self.header, "rows": [[cell(t) for t in row] for row in self.rows]}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
