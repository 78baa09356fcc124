import json

import pytest

from annetto.builder import (
    CLASSIFICATION, CONCAT_LAYER, FULLY_CONNECTED_LAYER, INPUT_LAYER, KB, OUTPUT_LAYER, RELU,
)
from annetto.examples import build_gan, build_simple_classifier
from annetto.graph import Graph
from annetto.schema import extend_from_graph
from annetto.terms import RDF_TYPE, RDFS, Iri, Literal, Triple, ann
from annetto.validator import RULE_IDS, validate
from _mutations import MUTATIONS, mutated


def test_every_rule_has_a_mutation():
    assert set(MUTATIONS) == set(RULE_IDS) == {f"R{i}" for i in range(1, 16)}


@pytest.mark.parametrize("rule", sorted(MUTATIONS, key=lambda r: int(r[1:])))
def test_single_triple_mutation_is_caught(rule):
    report = validate(mutated(rule))
    assert rule in report.rule_ids(), report.to_text()
    assert not report.ok


def test_missing_previous_layer_gives_exactly_one_r6():
    report = validate(mutated("R6"))
    assert [v.rule_id for v in report.violations] == ["R6"]
    assert report.violations[0].subject.value.endswith("GAN_Generator_hidden_1")


def test_validate_is_pure():
    kb = build_gan()
    before = list(kb.graph)
    validate(kb, strict_feedforward=True)
    assert list(kb.graph) == before


def test_report_is_deterministic():
    a = validate(mutated("R4")).to_text()
    b = validate(mutated("R4")).to_text()
    assert a == b and a.count("\t") >= 2


def test_subclass_aware_counting():
    # a ConcatLayer is an AggregationLayer, so fan-in is allowed through inference
    kb = KB()
    net = kb.add_network(kb.add_configuration("c"), "n", CLASSIFICATION)
    i = kb.add_layer(net, "i", INPUT_LAYER)
    cat = kb.add_layer(net, "cat", CONCAT_LAYER)
    o = kb.add_layer(net, "o", OUTPUT_LAYER)
    kb.connect(i, cat)
    kb.connect(cat, o)
    extra = kb.add_layer(net, "x", FULLY_CONNECTED_LAYER, RELU)
    kb.connect(extra, cat)
    assert "R4" not in validate(kb).rule_ids()


def test_schema_extension_makes_new_layer_kinds_checked():
    kb = build_simple_classifier()
    conv = ann("ConvLayer")
    layer = kb.iri("simple_classification_net_hidden_1")
    kb.graph.remove(Triple(layer, RDF_TYPE, FULLY_CONNECTED_LAYER))
    kb.graph.insert(Triple(layer, RDF_TYPE, conv))
    kb.graph.remove(Triple(layer, ann("hasActivationFunction"), kb.iri("simple_classification_net_hidden_1_activation")))
    # unknown class: the node is not known to be a layer, so R15 does not apply
    assert "R15" not in validate(kb).rule_ids()
    schema = extend_from_graph(kb.schema, Graph([Triple(conv, Iri(RDFS + "subClassOf"), ann("ActivationLayer"))]))
    assert validate(KB(kb.graph, schema)).rule_ids() == {"R15"}


def test_strict_feedforward_flags_cycles():
    kb = KB()
    net = kb.add_network(kb.add_configuration("c"), "n")
    a = kb.add_layer(net, "a", ann("SeparationLayer"))
    b = kb.add_layer(net, "b", ann("ConcatLayer"))
    kb.connect(a, b)
    kb.connect(b, a)
    assert validate(kb).ok
    strict = validate(kb, strict_feedforward=True)
    assert strict.rule_ids() == {"R8"} and "cycle" in strict.violations[0].message


def test_untrained_network_without_objective_is_only_a_warning():
    kb = KB()
    net = kb.add_network(kb.add_configuration("c"), "n")
    kb.chain(kb.add_layer(net, "i", INPUT_LAYER), kb.add_layer(net, "o", OUTPUT_LAYER))
    report = validate(kb)
    assert report.ok
    assert [w.rule_id for w in report.warnings] == ["R2"]


def test_eval_score_must_be_double():
    kb = build_simple_classifier()
    ev = kb.iri("simple_classification_evaluation")
    (t,) = kb.graph.match(ev, ann("eval_score"), None)
    kb.graph.remove(t)
    kb.graph.insert(Triple(ev, ann("eval_score"), Literal("0.9")))
    assert "R13" in validate(kb).rule_ids()


def test_json_report_shape():
    doc = json.loads(validate(mutated("R6")).to_json())
    assert doc["valid"] is False
    assert doc["violations"][0].keys() >= {"rule", "subject", "message"}
    assert doc["checked_rules"] == list(RULE_IDS)


def test_empty_kb_is_valid():
    assert validate(KB()).ok
