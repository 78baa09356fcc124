"""RDF terms: IRIs, typed literals and triples, plus namespace helpers."""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import NamedTuple, Union

from .errors import TermError

ANNETTO = "http://w3id.org/annett-o/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DOUBLE = XSD + "double"
XSD_DATETIME = XSD + "dateTime"
XSD_BOOLEAN = XSD + "boolean"
DATATYPES = (XSD_STRING, XSD_INTEGER, XSD_DOUBLE, XSD_DATETIME, XSD_BOOLEAN)

_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_FORBIDDEN = re.compile(r'[\s<>"{}|^`\\]')


def instance_namespace() -> str:
    """Namespace for knowledge-base individuals; ``ANNETTO_PREFIX`` overrides it."""
    return os.environ.get("ANNETTO_PREFIX") or ANNETTO


def default_prefixes() -> dict[str, str]:
    return {
        "": instance_namespace(),
        "annetto": ANNETTO,
        "rdf": RDF,
        "rdfs": RDFS,
        "owl": OWL,
        "xsd": XSD,
    }


@dataclass(frozen=True, slots=True, order=True)
class Iri:
    """An absolute IRI, always held in expanded form."""

    value: str

    def __post_init__(self) -> None:
        if not isinstance(self.value, str) or not self.value:
            raise TermError("IRI must be a non-empty string")
        if _FORBIDDEN.search(self.value):
            raise TermError(f"IRI contains whitespace or a forbidden character: {self.value!r}")
        if not _SCHEME.match(self.value):
            raise TermError(f"IRI is not absolute: {self.value!r}")

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"


def _parse_datetime(text: str) -> datetime:
    candidate = text[:-1] + "+00:00" if text.endswith("Z") else text
    try:
        value = datetime.fromisoformat(candidate)
    except ValueError:
        raise TermError(f"not an ISO-8601 dateTime: {text!r}") from None
    if "T" not in text:
        raise TermError(f"dateTime needs a time part: {text!r}")
    return value


class Literal:
    """A typed literal. Equality is on (datatype, parsed value), so doubles
    ``"0.68"`` and ``"0.680"`` are the same term."""

    __slots__ = ("lexical", "datatype", "value")

    lexical: str
    datatype: str
    value: object

    def __init__(self, lexical: object, datatype: str = XSD_STRING) -> None:
        if datatype not in DATATYPES:
            raise TermError(f"unsupported datatype: {datatype}")
        if datatype == XSD_STRING:
            if not isinstance(lexical, str):
                raise TermError("string literal needs text")
            value: object = lexical
            canonical = lexical
        elif datatype == XSD_INTEGER:
            if isinstance(lexical, bool) or not isinstance(lexical, (int, str)):
                raise TermError(f"not an integer: {lexical!r}")
            try:
                value = int(lexical.strip()) if isinstance(lexical, str) else lexical
            except ValueError:
                raise TermError(f"not an integer: {lexical!r}") from None
            if isinstance(lexical, str) and not re.fullmatch(r"\s*[+-]?\d+\s*", lexical):
                raise TermError(f"not an integer: {lexical!r}")
            canonical = str(value)
        elif datatype == XSD_DOUBLE:
            if isinstance(lexical, bool):
                raise TermError(f"not a double: {lexical!r}")
            try:
                value = float(lexical)
            except (TypeError, ValueError):
                raise TermError(f"not a double: {lexical!r}") from None
            if not math.isfinite(value):
                raise TermError(f"double must be finite: {lexical!r}")
            if value == 0.0:
                value = 0.0  # fold -0.0
            canonical = repr(value)
        elif datatype == XSD_BOOLEAN:
            if isinstance(lexical, bool):
                value = lexical
            elif lexical in ("true", "1"):
                value = True
            elif lexical in ("false", "0"):
                value = False
            else:
                raise TermError(f"not a boolean: {lexical!r}")
            canonical = "true" if value else "false"
        else:
            if isinstance(lexical, datetime):
                value = lexical
                canonical = lexical.isoformat()
            elif isinstance(lexical, str):
                value = _parse_datetime(lexical)
                canonical = lexical
            else:
                raise TermError(f"not a dateTime: {lexical!r}")
        object.__setattr__(self, "lexical", canonical)
        object.__setattr__(self, "datatype", datatype)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Literal is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Literal):
            return NotImplemented
        return self.datatype == other.datatype and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.datatype, self.value))

    def __repr__(self) -> str:
        short = self.datatype[len(XSD):]
        return f"Literal({self.lexical!r}, xsd:{short})"

    @property
    def is_numeric(self) -> bool:
        return self.datatype in (XSD_INTEGER, XSD_DOUBLE)

    def sort_value(self) -> object:
        if self.datatype == XSD_DATETIME:
            dt = self.value
            assert isinstance(dt, datetime)
            if dt.tzinfo is not None:
                return "1" + dt.astimezone(timezone.utc).replace(tzinfo=None).isoformat()
            return "0" + dt.isoformat()
        return self.value


Term = Union[Iri, Literal]


class Triple(NamedTuple):
    subject: Iri
    predicate: Iri
    object: Term


def check_triple(t: Triple) -> Triple:
    """Reject anything that is not (Iri, Iri, Iri|Literal)."""
    if not isinstance(t, tuple) or len(t) != 3:
        raise TermError(f"not a triple: {t!r}")
    s, p, o = t
    if not isinstance(s, Iri):
        raise TermError(f"subject must be an IRI, got {s!r}")
    if not isinstance(p, Iri):
        raise TermError(f"predicate must be an IRI, got {p!r}")
    if not isinstance(o, (Iri, Literal)):
        raise TermError(f"object must be an IRI or literal, got {o!r}")
    return t if isinstance(t, Triple) else Triple(s, p, o)


def term_key(term: Term) -> tuple:
    """Total order over terms: IRIs first (by text), then literals by
    datatype and value."""
    if isinstance(term, Iri):
        return (0, term.value)
    return (1, term.datatype, term.sort_value())


RDF_TYPE = Iri(RDF + "type")


def ann(local: str) -> Iri:
    """IRI of an ANNETT-O vocabulary term."""
    return Iri(ANNETTO + local)


_LOCAL = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?")


def expand(name: str, prefixes: dict[str, str]) -> Iri:
    """Resolve ``prefix:local``, ``<iri>`` or an absolute IRI."""
    if name.startswith("<") and name.endswith(">"):
        return Iri(name[1:-1])
    prefix, sep, local = name.partition(":")
    if sep and prefix in prefixes and (local == "" or _LOCAL.fullmatch(local)):
        return Iri(prefixes[prefix] + local)
    return Iri(name)


def compact(iri: Iri, prefixes: dict[str, str]) -> str:
    """Shortest ``prefix:local`` form for ``iri``, or ``<iri>`` if none applies."""
    best: tuple[int, str] | None = None
    for prefix, ns in prefixes.items():
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if local == "" or _LOCAL.fullmatch(local):
                # longest namespace wins; on ties the first declared prefix
                if best is None or len(ns) > best[0]:
                    best = (len(ns), f"{prefix}:{local}")
    return best[1] if best else f"<{iri.value}>"
