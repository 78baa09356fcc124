from datetime import datetime, timezone

import pytest

from annetto.errors import TermError
from annetto.terms import (
    ANNETTO, XSD_BOOLEAN, XSD_DATETIME, XSD_DOUBLE, XSD_INTEGER, XSD_STRING, Iri, Literal, Triple,
    ann, check_triple, compact, default_prefixes, expand, instance_namespace, term_key,
)


@pytest.mark.parametrize("bad", ["", "no-scheme", "http://a b", "http://x/<y>", 'urn:"q"'])
def test_iri_rejects_malformed(bad):
    with pytest.raises(TermError):
        Iri(bad)


def test_iri_accepts_absolute_forms():
    for ok in ("http://w3id.org/annett-o/AAE", "urn:uuid:1-2", "mailto:a@b.c"):
        assert Iri(ok).value == ok


@pytest.mark.parametrize("a, b", [
    (Literal("0.68", XSD_DOUBLE), Literal(0.68, XSD_DOUBLE)),
    (Literal("6.8E-1", XSD_DOUBLE), Literal("0.68", XSD_DOUBLE)),
    (Literal("+05", XSD_INTEGER), Literal(5, XSD_INTEGER)),
    (Literal("true", XSD_BOOLEAN), Literal("1", XSD_BOOLEAN)),
])
def test_literal_equality_is_on_canonical_value(a, b):
    assert a == b and hash(a) == hash(b)
    assert a.lexical == b.lexical


def test_double_lexical_is_shortest_repr():
    assert Literal("0.680000", XSD_DOUBLE).lexical == "0.68"
    assert Literal(-120, XSD_DOUBLE).lexical == "-120.0"


def test_integer_and_double_are_distinct_terms():
    assert Literal(1, XSD_INTEGER) != Literal(1.0, XSD_DOUBLE)


@pytest.mark.parametrize("lex, dt", [
    ("abc", XSD_INTEGER), ("1.5", XSD_INTEGER), ("nan", XSD_DOUBLE), ("inf", XSD_DOUBLE),
    ("x", XSD_DOUBLE), ("yes", XSD_BOOLEAN), ("2020-01-01", XSD_DATETIME), ("a", "http://x/unknown"),
])
def test_literal_rejects_bad_lexical_forms(lex, dt):
    with pytest.raises(TermError):
        Literal(lex, dt)


def test_datetime_literal_with_zulu():
    lit = Literal("2018-05-01T10:00:00Z", XSD_DATETIME)
    assert lit.value == datetime(2018, 5, 1, 10, tzinfo=timezone.utc)


def test_literal_is_immutable():
    lit = Literal("x", XSD_STRING)
    with pytest.raises(AttributeError):
        lit.lexical = "y"


def test_term_key_puts_iris_first_and_orders_numbers_by_value():
    terms = [Literal(10, XSD_INTEGER), Iri("http://b"), Literal(9, XSD_INTEGER), Iri("http://a")]
    ordered = sorted(terms, key=term_key)
    assert ordered == [Iri("http://a"), Iri("http://b"), Literal(9, XSD_INTEGER), Literal(10, XSD_INTEGER)]


def test_check_triple():
    s = Iri("http://s")
    assert check_triple((s, s, Literal("o"))) == Triple(s, s, Literal("o"))
    with pytest.raises(TermError):
        check_triple((Literal("x"), s, s))
    with pytest.raises(TermError):
        check_triple((s, "p", s))


def test_expand_and_compact_round_trip():
    prefixes = default_prefixes()
    iri = expand(":AAE", prefixes)
    assert iri == Iri(instance_namespace() + "AAE")
    assert compact(iri, prefixes) == ":AAE"
    assert compact(Iri("http://nowhere/x y".replace(" ", "")), prefixes) == "<http://nowhere/xy>"
    assert expand("<http://full/iri>", prefixes) == Iri("http://full/iri")


def test_instance_namespace_env_override(monkeypatch):
    monkeypatch.setenv("ANNETTO_PREFIX", "http://example.org/mine/")
    assert instance_namespace() == "http://example.org/mine/"
    assert default_prefixes()[""] == "http://example.org/mine/"
    assert ann("Layer").value == ANNETTO + "Layer"
