"""The three worked knowledge bases: a simple classifier, a GAN and a clustering AAE.

Values the use-cases do not pin down are module constants. Layer names
follow ``<network>_<role>[_<index>]``; training-step names follow the
pseudocode comments of the original training procedures.
"""

from __future__ import annotations

import os
from pathlib import Path

from .builder import (
    ACCURACY, ADVERSARIAL, CLASSIFICATION, CLUSTERING, CONCAT_LAYER, COST_FUNCTION, DISCRIMINATION,
    FULLY_CONNECTED_LAYER, GENERATION, INPUT_LAYER, KB, LABELSET, METRIC, OUTPUT_LAYER, RELU,
    SEPARATION_LAYER, SOFTMAX, TRAINING_FORWARD_ONLY, TRAINING_SINGLE,
)
from .terms import Iri
from .turtle import serialize_turtle

SIMPLE_EVAL_SCORE = 0.93
GAN_PARZEN_SCORE = -120.0
AAE_ACCURACY = 0.68
GAN_DISCRIMINATOR_UPDATES = 5

EXAMPLE_FILES = ("simple.ttl", "gan.ttl", "aae.ttl")


def _stack(kb: KB, network: Iri, layers: list[tuple[str, Iri, Iri | None]]) -> dict[str, Iri]:
    """Create layers named ``<network>_<role>`` and chain them in order."""
    prefix = network.value[len(kb.namespace):]
    made = {role: kb.add_layer(network, f"{prefix}_{role}", cls, act) for role, cls, act in layers}
    kb.chain(*made.values())
    return made


def _share(kb: KB, a: dict[str, Iri], b: dict[str, Iri], pairs: list[tuple[str, str]]) -> None:
    for ra, rb in pairs:
        kb.same_layer(a[ra], b[rb])


def build_simple_classifier(namespace: str | None = None) -> KB:
    """Single network: input, three fully connected layers (ReLU, ReLU, SoftMax), output."""
    kb = KB(namespace=namespace)
    config = kb.add_configuration("simple_classification")
    net = kb.add_network(config, "simple_classification_net", CLASSIFICATION)
    layers = _stack(kb, net, [
        ("input", INPUT_LAYER, None),
        ("hidden_1", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_2", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_3", FULLY_CONNECTED_LAYER, SOFTMAX),
        ("output", OUTPUT_LAYER, None),
    ])
    cost = kb.add_function("simple_classification_cost", COST_FUNCTION,
                           math=r"-\sum_i y_i \log \hat{y}_i")
    kb.set_objective(net, cost)

    strategy = kb.add_training(config, "simple_classification_Strategy")
    session = kb.add_session(strategy, "simple_classification_session")
    optimizer = kb.add_optimizer("simple_classification_optimizer")
    kb.add_step(session, "simple_classification_step", TRAINING_SINGLE, net, optimizer=optimizer,
                updates=[layers["hidden_1"], layers["hidden_2"], layers["hidden_3"]])

    train = kb.add_dataset("simple_classification_train_data")
    test = kb.add_dataset("simple_classification_eval_data")
    labels = kb.add_dataset("simple_classification_labels", LABELSET)
    kb.add_pipe("simple_classification_train_pipe", train, layers["input"])
    kb.add_pipe("simple_classification_eval_pipe", test, layers["input"])
    kb.add_pipe("simple_classification_label_pipe", labels, layers["output"])

    accuracy = kb.add_function("simple_classification_accuracy", ACCURACY)
    kb.add_evaluation("simple_classification_evaluation", net, config, strategy, accuracy, test,
                      SIMPLE_EVAL_SCORE)
    return kb


def build_gan(namespace: str | None = None) -> KB:
    """Generator, Discriminator and the composite GAN network sharing their layers."""
    kb = KB(namespace=namespace)
    config = kb.add_configuration("GAN")
    gen = kb.add_network(config, "GAN_Generator", GENERATION)
    dis = kb.add_network(config, "GAN_Discriminator", DISCRIMINATION)
    gan = kb.add_network(config, "GAN_GAN", ADVERSARIAL)

    g = _stack(kb, gen, [
        ("input", INPUT_LAYER, None),
        ("hidden_1", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_2", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_3", FULLY_CONNECTED_LAYER, RELU),
        ("output", OUTPUT_LAYER, None),
    ])
    d = _stack(kb, dis, [
        ("input", INPUT_LAYER, None),
        ("hidden_1", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_2", FULLY_CONNECTED_LAYER, RELU),
        ("hidden_3", FULLY_CONNECTED_LAYER, SOFTMAX),
        ("output", OUTPUT_LAYER, None),
    ])
    c = _stack(kb, gan, [
        ("input", INPUT_LAYER, None),
        ("generator_1", FULLY_CONNECTED_LAYER, RELU),
        ("generator_2", FULLY_CONNECTED_LAYER, RELU),
        ("generator_3", FULLY_CONNECTED_LAYER, RELU),
        ("discriminator_1", FULLY_CONNECTED_LAYER, RELU),
        ("discriminator_2", FULLY_CONNECTED_LAYER, RELU),
        ("discriminator_3", FULLY_CONNECTED_LAYER, SOFTMAX),
        ("output", OUTPUT_LAYER, None),
    ])
    _share(kb, c, g, [("input", "input"), ("generator_1", "hidden_1"),
                      ("generator_2", "hidden_2"), ("generator_3", "hidden_3")])
    _share(kb, c, d, [("discriminator_1", "hidden_1"), ("discriminator_2", "hidden_2"),
                      ("discriminator_3", "hidden_3"), ("output", "output")])

    # one objective function, applied to each network against its own labels
    objective = kb.add_function("gan_objective", COST_FUNCTION,
                                math=r"-y \log D(x) - (1 - y) \log (1 - D(x))")
    for net in (gen, dis, gan):
        kb.set_objective(net, objective)
    real = kb.add_dataset("gan_real_labels", LABELSET)
    fake = kb.add_dataset("gan_fake_labels", LABELSET)
    kb.add_pipe("gan_discriminator_real_label_pipe", real, d["output"])
    kb.add_pipe("gan_discriminator_fake_label_pipe", fake, d["output"])
    kb.add_pipe("gan_gan_label_pipe", real, c["output"])

    mnist = kb.add_dataset("gan_train_data")
    noise = kb.add_dataset("gan_random_noise")
    gen_output = kb.add_dataset("gan_gen_output", transient=True)
    test = kb.add_dataset("gan_test_data")
    kb.add_pipe("gan_discriminator_data_pipe", mnist, d["input"])
    kb.add_pipe("gan_discriminator_generated_pipe", gen_output, d["input"])
    kb.add_pipe("gan_generator_noise_pipe", noise, g["input"])
    kb.add_pipe("gan_generator_output_pipe", gen_output, g["output"])
    kb.add_pipe("gan_gan_noise_pipe", noise, c["input"])

    strategy = kb.add_training(config, "GAN_Strategy")
    session = kb.add_session(strategy, "gan_session")
    optimizer = kb.add_optimizer("gan_optimizer")
    dis_layers = [d["hidden_1"], d["hidden_2"], d["hidden_3"]]
    s1 = kb.add_step(session, "gan_discriminate_mnist", TRAINING_SINGLE, dis,
                     optimizer=optimizer, updates=dis_layers)
    s2 = kb.add_step(session, "gan_gen_fpass", TRAINING_FORWARD_ONLY, gen, after=s1, produces=gen_output)
    s3 = kb.add_step(session, "gan_discriminate_generatorout", TRAINING_SINGLE, dis, after=s2,
                     optimizer=optimizer, updates=dis_layers)
    loop = kb.add_loop(session, "gan_trainloop", GAN_DISCRIMINATOR_UPDATES, [s1, s2, s3])
    kb.add_step(session, "gan_generatorstep", TRAINING_SINGLE, gan, after=loop, optimizer=optimizer,
                updates=[c["generator_1"], c["generator_2"], c["generator_3"]])

    parzen = kb.add_function("gan_parzen_loglikelihood", METRIC)
    kb.add_evaluation("gan_evaluation", gen, config, strategy, parzen, test, GAN_PARZEN_SCORE)
    kb.add_trained_model("gan_trained_model")
    return kb


def build_aae(namespace: str | None = None) -> KB:
    """Clustering adversarial autoencoder described by seven networks."""
    kb = KB(namespace=namespace)
    config = kb.add_configuration("AAE")
    ae = kb.add_network(config, "AAE_AE")
    style_gen = kb.add_network(config, "AAE_StyleGenerator", GENERATION)
    label_gen = kb.add_network(config, "AAE_LabelGenerator", CLUSTERING)
    style_dis = kb.add_network(config, "AAE_StyleDiscriminator", DISCRIMINATION)
    label_dis = kb.add_network(config, "AAE_LabelDiscriminator", DISCRIMINATION)
    style_gan = kb.add_network(config, "AAE_StyleGAN", ADVERSARIAL)
    label_gan = kb.add_network(config, "AAE_LabelGAN", ADVERSARIAL)

    # Autoencoder: the encoder splits into style and label branches, each ending
    # in a ReLU layer that feeds the decoder's concatenation.
    prefix = "AAE_AE"
    A = {
        "input": kb.add_layer(ae, f"{prefix}_input", INPUT_LAYER),
        "encoder_1": kb.add_layer(ae, f"{prefix}_encoder_1", FULLY_CONNECTED_LAYER, RELU),
        "encoder_2": kb.add_layer(ae, f"{prefix}_encoder_2", FULLY_CONNECTED_LAYER, RELU),
        "split": kb.add_layer(ae, f"{prefix}_split", SEPARATION_LAYER),
        "style_code": kb.add_layer(ae, f"{prefix}_style_code", FULLY_CONNECTED_LAYER, RELU),
        "label_code": kb.add_layer(ae, f"{prefix}_label_code", FULLY_CONNECTED_LAYER, SOFTMAX),
        "label_projection": kb.add_layer(ae, f"{prefix}_label_projection", FULLY_CONNECTED_LAYER, RELU),
        "concat": kb.add_layer(ae, f"{prefix}_concat", CONCAT_LAYER),
        "decoder_1": kb.add_layer(ae, f"{prefix}_decoder_1", FULLY_CONNECTED_LAYER, RELU),
        "decoder_2": kb.add_layer(ae, f"{prefix}_decoder_2", FULLY_CONNECTED_LAYER, RELU),
        "output": kb.add_layer(ae, f"{prefix}_output", OUTPUT_LAYER),
    }
    kb.chain(A["input"], A["encoder_1"], A["encoder_2"], A["split"])
    kb.chain(A["split"], A["style_code"], A["concat"])
    kb.chain(A["split"], A["label_code"], A["label_projection"], A["concat"])
    kb.chain(A["concat"], A["decoder_1"], A["decoder_2"], A["output"])

    def encoder(net: Iri, code: str, act: Iri) -> dict[str, Iri]:
        layers = _stack(kb, net, [
            ("input", INPUT_LAYER, None),
            ("encoder_1", FULLY_CONNECTED_LAYER, RELU),
            ("encoder_2", FULLY_CONNECTED_LAYER, RELU),
            (code, FULLY_CONNECTED_LAYER, act),
            ("output", OUTPUT_LAYER, None),
        ])
        _share(kb, layers, A, [("input", "input"), ("encoder_1", "encoder_1"),
                               ("encoder_2", "encoder_2"), (code, code)])
        return layers

    def discriminator(net: Iri) -> dict[str, Iri]:
        return _stack(kb, net, [
            ("input", INPUT_LAYER, None),
            ("hidden_1", FULLY_CONNECTED_LAYER, RELU),
            ("hidden_2", FULLY_CONNECTED_LAYER, RELU),
            ("hidden_3", FULLY_CONNECTED_LAYER, SOFTMAX),
            ("output", OUTPUT_LAYER, None),
        ])

    def adversarial(net: Iri, code: str, act: Iri, enc: dict[str, Iri], dis: dict[str, Iri]) -> dict[str, Iri]:
        layers = _stack(kb, net, [
            ("input", INPUT_LAYER, None),
            ("encoder_1", FULLY_CONNECTED_LAYER, RELU),
            ("encoder_2", FULLY_CONNECTED_LAYER, RELU),
            (code, FULLY_CONNECTED_LAYER, act),
            ("discriminator_1", FULLY_CONNECTED_LAYER, RELU),
            ("discriminator_2", FULLY_CONNECTED_LAYER, RELU),
            ("discriminator_3", FULLY_CONNECTED_LAYER, SOFTMAX),
            ("output", OUTPUT_LAYER, None),
        ])
        _share(kb, layers, enc, [("input", "input"), ("encoder_1", "encoder_1"),
                                 ("encoder_2", "encoder_2"), (code, code)])
        _share(kb, layers, dis, [("discriminator_1", "hidden_1"), ("discriminator_2", "hidden_2"),
                                 ("discriminator_3", "hidden_3"), ("output", "output")])
        return layers

    SG = encoder(style_gen, "style_code", RELU)
    LG = encoder(label_gen, "label_code", SOFTMAX)
    SD = discriminator(style_dis)
    LD = discriminator(label_dis)
    SGAN = adversarial(style_gan, "style_code", RELU, SG, SD)
    LGAN = adversarial(label_gan, "label_code", SOFTMAX, LG, LD)

    reconstruction = kb.add_function("aae_reconstruction_cost", COST_FUNCTION,
                                     math=r"\lVert x - \hat{x} \rVert^2")
    adversarial_cost = kb.add_function("aae_adversarial_cost", COST_FUNCTION,
                                       math=r"-y \log D(z) - (1 - y) \log (1 - D(z))")
    kb.set_objective(ae, reconstruction)
    for net in (style_gen, label_gen, style_dis, label_dis, style_gan, label_gan):
        kb.set_objective(net, adversarial_cost)

    train = kb.add_dataset("aae_train_data")
    gaussian = kb.add_dataset("aae_gaussian")
    categorical = kb.add_dataset("aae_categorical")
    style_out = kb.add_dataset("aae_style", transient=True)
    label_out = kb.add_dataset("aae_label", transient=True)
    real = kb.add_dataset("aae_real_labels", LABELSET)
    fake = kb.add_dataset("aae_fake_labels", LABELSET)
    pipes = [
        ("aae_ae_input_pipe", train, A["input"]),
        ("aae_ae_target_pipe", train, A["output"]),
        ("aae_stylegen_input_pipe", train, SG["input"]),
        ("aae_stylegen_output_pipe", style_out, SG["output"]),
        ("aae_labelgen_input_pipe", train, LG["input"]),
        ("aae_labelgen_output_pipe", label_out, LG["output"]),
        ("aae_styledis_gaussian_pipe", gaussian, SD["input"]),
        ("aae_styledis_style_pipe", style_out, SD["input"]),
        ("aae_styledis_real_label_pipe", real, SD["output"]),
        ("aae_styledis_fake_label_pipe", fake, SD["output"]),
        ("aae_labeldis_categorical_pipe", categorical, LD["input"]),
        ("aae_labeldis_label_pipe", label_out, LD["input"]),
        ("aae_labeldis_real_label_pipe", real, LD["output"]),
        ("aae_labeldis_fake_label_pipe", fake, LD["output"]),
        ("aae_stylegan_input_pipe", train, SGAN["input"]),
        ("aae_stylegan_label_pipe", real, SGAN["output"]),
        ("aae_labelgan_input_pipe", train, LGAN["input"]),
        ("aae_labelgan_label_pipe", real, LGAN["output"]),
    ]
    for name, ds, layer in pipes:
        kb.add_pipe(name, ds, layer)

    strategy = kb.add_training(config, "AAE_Strategy")
    session = kb.add_session(strategy, "aae_session")
    optimizer = kb.add_optimizer("aae_optimizer")
    ae_weights = [A[r] for r in ("encoder_1", "encoder_2", "style_code", "label_code",
                                 "label_projection", "decoder_1", "decoder_2")]
    sd_weights = [SD["hidden_1"], SD["hidden_2"], SD["hidden_3"]]
    ld_weights = [LD["hidden_1"], LD["hidden_2"], LD["hidden_3"]]
    steps = [
        ("aae_autoencoder_step", TRAINING_SINGLE, ae, ae_weights, None),
        ("aae_style_forward", TRAINING_FORWARD_ONLY, style_gen, [], style_out),
        ("aae_label_forward", TRAINING_FORWARD_ONLY, label_gen, [], label_out),
        ("aae_styledis_noise_step", TRAINING_SINGLE, style_dis, sd_weights, None),
        ("aae_labeldis_noise_step", TRAINING_SINGLE, label_dis, ld_weights, None),
        ("aae_styledis_encodings_step", TRAINING_SINGLE, style_dis, sd_weights, None),
        ("aae_labeldis_encodings_step", TRAINING_SINGLE, label_dis, ld_weights, None),
        ("aae_stylegen_step", TRAINING_SINGLE, style_gan,
         [SGAN["encoder_1"], SGAN["encoder_2"], SGAN["style_code"]], None),
        ("aae_labelgen_step", TRAINING_SINGLE, label_gan,
         [LGAN["encoder_1"], LGAN["encoder_2"], LGAN["label_code"]], None),
    ]
    previous = None
    for name, cls, net, updates, produces in steps:
        previous = kb.add_step(
            session, name, cls, net, after=previous,
            optimizer=None if cls == TRAINING_FORWARD_ONLY else optimizer,
            updates=updates, produces=produces,
        )

    accuracy = kb.add_function("aae_accuracy", ACCURACY)
    kb.add_evaluation("aae_evaluation", label_gen, config, strategy, accuracy, train, AAE_ACCURACY)
    return kb


def example_kbs(namespace: str | None = None) -> dict[str, KB]:
    """File name -> knowledge base, in a fixed order."""
    return {
        "simple.ttl": build_simple_classifier(namespace),
        "gan.ttl": build_gan(namespace),
        "aae.ttl": build_aae(namespace),
    }


def build_all(namespace: str | None = None) -> KB:
    """Union of the three example knowledge bases."""
    first, *rest = example_kbs(namespace).values()
    return first.merged(*rest)


def export_examples(directory: str | os.PathLike[str], namespace: str | None = None) -> list[Path]:
    """Write simple.ttl, gan.ttl and aae.ttl into ``directory`` (created if needed)."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, kb in example_kbs(namespace).items():
        path = out / name
        path.write_text(serialize_turtle(kb.graph), encoding="utf-8", newline="\n")
        written.append(path)
    return written
