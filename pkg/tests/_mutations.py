"""One single-triple mutation per validator rule, applied to a valid example KB."""

from __future__ import annotations

from collections.abc import Callable

from annetto.builder import KB
from annetto.examples import build_aae, build_gan, build_simple_classifier
from annetto.terms import Triple, ann


def _remove(s: str, p: str, o: str) -> Callable[[KB], None]:
    def apply(kb: KB) -> None:
        t = Triple(kb.iri(s), ann(p), kb.iri(o))
        assert kb.graph.remove(t), f"fixture triple missing: {t}"
    return apply


def _remove_literal(s: str, p: str) -> Callable[[KB], None]:
    def apply(kb: KB) -> None:
        (t,) = kb.graph.match(kb.iri(s), ann(p), None)
        kb.graph.remove(t)
    return apply


def _add(s: str, p: str, o: str) -> Callable[[KB], None]:
    def apply(kb: KB) -> None:
        assert kb.graph.insert(Triple(kb.iri(s), ann(p), kb.iri(o)))
    return apply


BUILDERS = {"simple": build_simple_classifier, "gan": build_gan, "aae": build_aae}

# rule id -> (example, mutation, description)
MUTATIONS: dict[str, tuple[str, Callable[[KB], None], str]] = {
    "R1": ("gan", _remove("GAN", "hasNetwork", "GAN_GAN"), "network detached from its configuration"),
    "R2": ("gan", _remove("GAN_Discriminator", "hasObjectiveFunction", "gan_objective"), "trained network without objective"),
    "R3": ("gan", _remove("GAN_Generator", "hasLayer", "GAN_Generator_hidden_1"), "orphan layer"),
    "R4": ("simple", _add("simple_classification_net_hidden_1", "nextLayer", "simple_classification_net_hidden_3"),
           "fan-out from a fully connected layer"),
    "R5": ("simple", _add("simple_classification_net_output", "nextLayer", "simple_classification_net_hidden_1"),
           "output layer feeding forward"),
    "R6": ("gan", _remove("GAN_Generator_hidden_2", "previousLayer", "GAN_Generator_hidden_1"), "missing previousLayer"),
    "R7": ("gan", _remove("GAN_GAN_generator_1", "sameLayerAs", "GAN_Generator_hidden_1"), "one-way sameLayerAs"),
    "R8": ("gan", _add("GAN_Generator_hidden_3", "nextLayer", "GAN_Discriminator_hidden_1"), "cross-network link"),
    "R9": ("gan", _remove("GAN_Strategy", "hasTrainingSession", "gan_session"), "strategy without session"),
    "R10": ("simple", _remove("simple_classification_session", "hasTrainingStep", "simple_classification_step"),
            "session without steps"),
    "R11": ("simple", _add("simple_classification_session", "nextTrainingSession", "simple_classification_session"),
            "cyclic session chain"),
    "R12": ("gan", _remove_literal("gan_trainloop", "loop_count"), "loop without count or condition"),
    "R13": ("aae", _remove_literal("aae_evaluation", "eval_score"), "evaluation without score"),
    "R14": ("aae", _remove("aae_ae_input_pipe", "pipeLayer", "AAE_AE_input"), "pipe without layer"),
    "R15": ("simple", _remove("simple_classification_net_hidden_2", "hasActivationFunction",
                              "simple_classification_net_hidden_2_activation"), "activation layer without function"),
}


def mutated(rule: str) -> KB:
    example, apply, _ = MUTATIONS[rule]
    kb = BUILDERS[example]()
    before = len(kb.graph)
    apply(kb)
    assert abs(len(kb.graph) - before) == 1
    return kb
