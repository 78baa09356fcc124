"""Typed construction API for ANNETT-O knowledge bases.

Every ``add_*`` method mints an individual in the KB's instance namespace,
types it, and wires it to its parents, refusing inputs that would break the
ontology's structural rules. A KB assembled only through these methods
validates cleanly.
"""

from __future__ import annotations

from collections.abc import Sequence
from datetime import datetime

from .errors import BuildError
from .graph import Graph
from .schema import SchemaModel, TypeIndex, builtin_schema, types_with_inference
from .terms import (
    RDF_TYPE, XSD_BOOLEAN, XSD_DATETIME, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    Iri, Literal, Term, Triple, ann, default_prefixes, instance_namespace,
)

# Classes
ANN_CONFIGURATION = ann("ANNConfiguration")
NETWORK = ann("Network")
LAYER = ann("Layer")
HIDDEN_LAYER = ann("HiddenLayer")
INOUT_LAYER = ann("InOutLayer")
ACTIVATION_LAYER = ann("ActivationLayer")
AGGREGATION_LAYER = ann("AggregationLayer")
SEPARATION_LAYER = ann("SeparationLayer")
MODIFICATION_LAYER = ann("ModificationLayer")
FULLY_CONNECTED_LAYER = ann("FullyConnectedLayer")
CONCAT_LAYER = ann("ConcatLayer")
INPUT_LAYER = ann("InputLayer")
OUTPUT_LAYER = ann("OutputLayer")
TRAINING_STRATEGY = ann("TrainingStrategy")
TRAINING_SESSION = ann("TrainingSession")
TRAINING_STEP = ann("TrainingStep")
TRAINING_LOOP = ann("TrainingLoop")
TRAINING_SINGLE = ann("TrainingSingle")
TRAINING_FORWARD_ONLY = ann("TrainingSingleForwardOnly")
TRAINING_OPTIMIZER = ann("TrainingOptimizer")
NETWORK_EVALUATION = ann("NetworkEvaluation")
FUNCTION = ann("Function")
ACTIVATION_FUNCTION = ann("ActivationFunction")
RELU = ann("Relu")
SOFTMAX = ann("Softmax")
OBJECTIVE_FUNCTION = ann("ObjectiveFunction")
COST_FUNCTION = ann("CostFunction")
METRIC = ann("Metric")
ACCURACY = ann("Accuracy")
DATASET = ann("Dataset")
LABELSET = ann("Labelset")
DATASET_PIPE = ann("DatasetPipe")
TRAINED_MODEL = ann("TrainedModel")
TASK_CHARACTERIZATION = ann("TaskCharacterization")
CLUSTERING = ann("Clustering")
CLASSIFICATION = ann("Classification")
GENERATION = ann("Generation")
DISCRIMINATION = ann("Discrimination")
ADVERSARIAL = ann("Adversarial")
DATA_CHARACTERIZATION = ann("DataCharacterization")

# Properties
HAS_NETWORK = ann("hasNetwork")
HAS_LAYER = ann("hasLayer")
NEXT_LAYER = ann("nextLayer")
PREVIOUS_LAYER = ann("previousLayer")
SAME_LAYER_AS = ann("sameLayerAs")
HAS_ACTIVATION_FUNCTION = ann("hasActivationFunction")
HAS_TRAINING_STRATEGY = ann("hasTrainingStrategy")
HAS_TRAINING_SESSION = ann("hasTrainingSession")
NEXT_TRAINING_SESSION = ann("nextTrainingSession")
HAS_TRAINING_STEP = ann("hasTrainingStep")
NEXT_TRAINING_STEP = ann("nextTrainingStep")
HAS_TASK_TYPE = ann("hasTaskType")
UPDATES_LAYER = ann("updatesLayer")
EVALUATES_NETWORK = ann("evaluatesNetwork")
BASED_ON_TRAINING_STRATEGY = ann("basedOnTrainingStrategy")
HAS_EVALUATION_METRIC = ann("hasEvaluationMetric")
EVALUATES_ON_DATASET = ann("evaluatesOnDataset")
EVALUATES_CONFIGURATION = ann("evaluatesConfiguration")
PIPE_LAYER = ann("pipeLayer")
PIPE_DATASET = ann("pipeDataset")
HAS_OBJECTIVE_FUNCTION = ann("hasObjectiveFunction")
HAS_TRAINING_OPTIMIZER = ann("hasTrainingOptimizer")
TRAINS_NETWORK = ann("trainsNetwork")
HAS_LOOP_STEP = ann("hasLoopStep")
PRODUCES_DATASET = ann("producesDataset")
HAS_DATA_CHARACTERIZATION = ann("hasDataCharacterization")
EVAL_SCORE = ann("eval_score")
EVAL_DATE = ann("eval_date")
FUNCTION_MATH = ann("function_math")
LOOP_COUNT = ann("loop_count")
LOOP_CONDITION = ann("loop_condition")
IS_TRANSIENT = ann("is_transient")


class KB:
    """A graph paired with the schema used to interpret it."""

    def __init__(self, graph: Graph | None = None, schema: SchemaModel | None = None,
                 namespace: str | None = None) -> None:
        self.graph = graph if graph is not None else Graph()
        self.schema = schema if schema is not None else builtin_schema()
        self.namespace = namespace or instance_namespace()
        if graph is None:
            self.graph.prefix_map = {**default_prefixes(), "": self.namespace}

    def __repr__(self) -> str:
        return f"<KB {len(self.graph)} triples>"

    def iri(self, name: str) -> Iri:
        return Iri(self.namespace + name)

    def types(self, individual: Iri) -> set[Iri]:
        return types_with_inference(self, individual)

    def is_a(self, individual: Iri, cls: Iri) -> bool:
        return cls in self.types(individual)

    def type_index(self) -> TypeIndex:
        return TypeIndex.build(self.schema, self.graph)

    def merged(self, *others: KB) -> KB:
        """A new KB holding the union of this KB's triples and the others'."""
        g = self.graph.copy()
        for other in others:
            g = g.union(other.graph)
        return KB(g, self.schema, self.namespace)

    # -- low level -------------------------------------------------------

    def _add(self, s: Iri, p: Iri, o: Term) -> None:
        self.graph.insert(Triple(s, p, o))

    def _check_class(self, cls: Iri, base: Iri, what: str) -> None:
        if not self.schema.has_class(cls):
            raise BuildError(f"unknown {what} class {cls}")
        if not self.schema.is_subclass(cls, base):
            raise BuildError(f"{cls} is not a subclass of {base}")

    def _require(self, individual: Iri, cls: Iri, role: str) -> None:
        if not self.is_a(individual, cls):
            raise BuildError(f"{role} {individual} is not a {cls.value.rsplit('/', 1)[-1]}")

    def _mint(self, name: str, cls: Iri) -> Iri:
        if not name:
            raise BuildError("individual name must be non-empty")
        iri = self.iri(name)
        if self.graph.mentions(iri):
            raise BuildError(f"name already in use: {name}")
        self._add(iri, RDF_TYPE, cls)
        return iri

    def _ensure_free(self, *names: str) -> None:
        for name in names:
            if self.graph.mentions(self.iri(name)):
                raise BuildError(f"name already in use: {name}")

    def _network_of(self, layer: Iri) -> list[Iri]:
        return self.graph.subjects(HAS_LAYER, layer)

    # -- topology --------------------------------------------------------

    def add_configuration(self, name: str) -> Iri:
        return self._mint(name, ANN_CONFIGURATION)

    def add_network(self, config: Iri, name: str, task: Iri | None = None) -> Iri:
        """Add a Network to ``config``; ``task`` is a TaskCharacterization subclass."""
        self._require(config, ANN_CONFIGURATION, "configuration")
        if task is not None:
            self._check_class(task, TASK_CHARACTERIZATION, "task")
            self._ensure_free(name, f"{name}_task")
        net = self._mint(name, NETWORK)
        self._add(config, HAS_NETWORK, net)
        if task is not None:
            self._add(net, HAS_TASK_TYPE, self._mint(f"{name}_task", task))
        return net

    def attach_network(self, config: Iri, network: Iri) -> None:
        """Also list an existing network under another configuration."""
        self._require(config, ANN_CONFIGURATION, "configuration")
        self._require(network, NETWORK, "network")
        self._add(config, HAS_NETWORK, network)

    def add_layer(self, network: Iri, name: str, layer_class: Iri, activation: Iri | None = None) -> Iri:
        """Add a layer owned by ``network``; ``activation`` is an ActivationFunction subclass."""
        self._require(network, NETWORK, "network")
        self._check_class(layer_class, LAYER, "layer")
        if activation is not None:
            self._check_class(activation, ACTIVATION_FUNCTION, "activation function")
        existing = self.iri(name)
        owners = self._network_of(existing)
        if owners:
            raise BuildError(f"layer {name} already belongs to network {owners[0]}")
        if activation is not None:
            self._ensure_free(name, f"{name}_activation")
        layer = self._mint(name, layer_class)
        self._add(network, HAS_LAYER, layer)
        if activation is not None:
            self._add(layer, HAS_ACTIVATION_FUNCTION, self._mint(f"{name}_activation", activation))
        return layer

    def connect(self, src: Iri, dst: Iri) -> None:
        """Link ``src -> dst`` with nextLayer and the mirrored previousLayer."""
        self._require(src, LAYER, "layer")
        self._require(dst, LAYER, "layer")
        if src == dst:
            raise BuildError(f"cannot connect {src} to itself")
        src_nets, dst_nets = set(self._network_of(src)), set(self._network_of(dst))
        if not src_nets or src_nets != dst_nets:
            raise BuildError(f"{src} and {dst} are not layers of the same network")
        if Triple(src, NEXT_LAYER, dst) in self.graph:
            raise BuildError(f"{src} is already connected to {dst}")
        if self.is_a(dst, INPUT_LAYER):
            raise BuildError(f"input layer {dst} cannot have layers connecting into it")
        if self.is_a(src, OUTPUT_LAYER):
            raise BuildError(f"output layer {src} cannot connect to a following layer")
        if self.graph.objects(src, NEXT_LAYER) and not self.is_a(src, SEPARATION_LAYER):
            raise BuildError(f"{src} already has a following layer and is not a SeparationLayer")
        if self.graph.objects(dst, PREVIOUS_LAYER) and not self.is_a(dst, AGGREGATION_LAYER):
            raise BuildError(f"{dst} already has a preceding layer and is not an AggregationLayer")
        self._add(src, NEXT_LAYER, dst)
        self._add(dst, PREVIOUS_LAYER, src)

    def chain(self, *layers: Iri) -> None:
        for a, b in zip(layers, layers[1:]):
            self.connect(a, b)

    def same_layer(self, a: Iri, b: Iri) -> None:
        """Declare two layers of different networks physically shared."""
        if a == b:
            raise BuildError("a layer cannot be sameLayerAs itself")
        self._require(a, LAYER, "layer")
        self._require(b, LAYER, "layer")
        nets_a, nets_b = set(self._network_of(a)), set(self._network_of(b))
        if not nets_a or not nets_b:
            raise BuildError("both layers must belong to a network")
        if nets_a & nets_b:
            raise BuildError(f"{a} and {b} are in the same network")
        self._add(a, SAME_LAYER_AS, b)
        self._add(b, SAME_LAYER_AS, a)

    # -- functions -------------------------------------------------------

    def add_function(self, name: str, function_class: Iri, math: str | None = None) -> Iri:
        self._check_class(function_class, FUNCTION, "function")
        fn = self._mint(name, function_class)
        if math is not None:
            self._add(fn, FUNCTION_MATH, Literal(math, XSD_STRING))
        return fn

    def set_objective(self, network: Iri, function: Iri) -> None:
        """Attach the network's single objective function (may be shared between networks)."""
        self._require(network, NETWORK, "network")
        self._require(function, OBJECTIVE_FUNCTION, "objective")
        current = self.graph.objects(network, HAS_OBJECTIVE_FUNCTION)
        if current and current != [function]:
            raise BuildError(f"network {network} already has objective {current[0]}")
        self._add(network, HAS_OBJECTIVE_FUNCTION, function)

    def add_optimizer(self, name: str) -> Iri:
        return self._mint(name, TRAINING_OPTIMIZER)

    # -- training --------------------------------------------------------

    def add_training(self, config: Iri, strategy_name: str) -> Iri:
        self._require(config, ANN_CONFIGURATION, "configuration")
        strategy = self._mint(strategy_name, TRAINING_STRATEGY)
        self._add(config, HAS_TRAINING_STRATEGY, strategy)
        return strategy

    def link_training(self, config: Iri, strategy: Iri) -> None:
        """Share an existing strategy with another configuration."""
        self._require(config, ANN_CONFIGURATION, "configuration")
        self._require(strategy, TRAINING_STRATEGY, "strategy")
        self._add(config, HAS_TRAINING_STRATEGY, strategy)

    def add_session(self, strategy: Iri, name: str, after: Iri | None = None) -> Iri:
        self._require(strategy, TRAINING_STRATEGY, "strategy")
        if after is not None:
            if Triple(strategy, HAS_TRAINING_SESSION, after) not in self.graph:
                raise BuildError(f"session {after} does not belong to {strategy}")
            if self.graph.objects(after, NEXT_TRAINING_SESSION):
                raise BuildError(f"session {after} already has a nextTrainingSession")
        session = self._mint(name, TRAINING_SESSION)
        self._add(strategy, HAS_TRAINING_SESSION, session)
        if after is not None:
            self._add(after, NEXT_TRAINING_SESSION, session)
        return session

    def _link_after(self, session: Iri, after: Iri, step: Iri) -> None:
        if self.graph.objects(after, NEXT_TRAINING_STEP):
            raise BuildError(f"step {after} already has a nextTrainingStep")
        self._add(after, NEXT_TRAINING_STEP, step)

    def _check_after(self, session: Iri, after: Iri | None) -> None:
        if after is None:
            return
        if Triple(session, HAS_TRAINING_STEP, after) not in self.graph:
            raise BuildError(f"step {after} does not belong to {session}")
        if self.graph.objects(after, NEXT_TRAINING_STEP):
            raise BuildError(f"step {after} already has a nextTrainingStep")

    def add_step(
        self,
        session: Iri,
        name: str,
        step_class: Iri = TRAINING_SINGLE,
        network: Iri | None = None,
        after: Iri | None = None,
        *,
        optimizer: Iri | None = None,
        updates: Sequence[Iri] = (),
        produces: Iri | None = None,
    ) -> Iri:
        """Add a step to ``session``, optionally chained after ``after``.

        ``network`` is the network the step trains (or runs forward-only),
        ``updates`` the layers whose weights it changes, ``produces`` the
        dataset a forward-only pass creates.
        """
        self._require(session, TRAINING_SESSION, "session")
        self._check_class(step_class, TRAINING_STEP, "step")
        if network is not None:
            self._require(network, NETWORK, "network")
        if optimizer is not None:
            self._require(optimizer, TRAINING_OPTIMIZER, "optimizer")
        if produces is not None:
            self._require(produces, DATASET, "dataset")
        for layer in updates:
            self._require(layer, LAYER, "updated layer")
        self._check_after(session, after)
        step = self._mint(name, step_class)
        self._add(session, HAS_TRAINING_STEP, step)
        if network is not None:
            self._add(step, TRAINS_NETWORK, network)
        if optimizer is not None:
            self._add(step, HAS_TRAINING_OPTIMIZER, optimizer)
        if produces is not None:
            self._add(step, PRODUCES_DATASET, produces)
        for layer in updates:
            self._add(step, UPDATES_LAYER, layer)
        if after is not None:
            self._link_after(session, after, step)
        return step

    def add_loop(
        self,
        session: Iri,
        name: str,
        count: int | None,
        inner: Sequence[Iri],
        after: Iri | None = None,
        *,
        condition: str | None = None,
    ) -> Iri:
        """Wrap already-added steps of ``session`` into a repeated loop.

        ``inner`` is the loop body in execution order; its steps are chained
        with nextTrainingStep if they are not already.
        """
        self._require(session, TRAINING_SESSION, "session")
        if count is None and condition is None:
            raise BuildError("a loop needs a repetition count or a condition")
        if count is not None and (isinstance(count, bool) or not isinstance(count, int) or count < 1):
            raise BuildError(f"loop count must be a positive integer, got {count!r}")
        if not inner:
            raise BuildError("a loop needs at least one inner step")
        if len(set(inner)) != len(inner):
            raise BuildError("inner steps must be distinct")
        for step in inner:
            if Triple(session, HAS_TRAINING_STEP, step) not in self.graph:
                raise BuildError(f"step {step} does not belong to {session}")
            if self.graph.subjects(HAS_LOOP_STEP, step):
                raise BuildError(f"step {step} is already inside a loop")
        for a, b in zip(inner, inner[1:]):
            nxt = self.graph.objects(a, NEXT_TRAINING_STEP)
            if nxt and nxt != [b]:
                raise BuildError(f"step {a} is already followed by {nxt[0]}")
            prev = self.graph.subjects(NEXT_TRAINING_STEP, b)
            if prev and prev != [a]:
                raise BuildError(f"step {b} is already preceded by {prev[0]}")
        if self.graph.subjects(NEXT_TRAINING_STEP, inner[0]) or self.graph.objects(inner[-1], NEXT_TRAINING_STEP):
            raise BuildError("loop body is already linked to steps outside the loop")
        self._check_after(session, after)
        loop = self._mint(name, TRAINING_LOOP)
        self._add(session, HAS_TRAINING_STEP, loop)
        if count is not None:
            self._add(loop, LOOP_COUNT, Literal(count, XSD_INTEGER))
        if condition is not None:
            self._add(loop, LOOP_CONDITION, Literal(condition, XSD_STRING))
        for step in inner:
            self._add(loop, HAS_LOOP_STEP, step)
        for a, b in zip(inner, inner[1:]):
            self._add(a, NEXT_TRAINING_STEP, b)
        if after is not None:
            self._link_after(session, after, loop)
        return loop

    # -- data ------------------------------------------------------------

    def add_dataset(self, name: str, dataset_class: Iri = DATASET, characterization: Iri | None = None,
                    *, transient: bool = False) -> Iri:
        self._check_class(dataset_class, DATASET, "dataset")
        if characterization is not None:
            self._check_class(characterization, DATA_CHARACTERIZATION, "data characterization")
            self._ensure_free(name, f"{name}_characterization")
        ds = self._mint(name, dataset_class)
        if characterization is not None:
            self._add(ds, HAS_DATA_CHARACTERIZATION, self._mint(f"{name}_characterization", characterization))
        if transient:
            self._add(ds, IS_TRANSIENT, Literal(True, XSD_BOOLEAN))
        return ds

    def add_pipe(self, name: str, dataset: Iri, layer: Iri) -> Iri:
        """Connect ``dataset`` to an input or output layer."""
        self._require(dataset, DATASET, "dataset")
        self._require(layer, INOUT_LAYER, "pipe endpoint")
        pipe = self._mint(name, DATASET_PIPE)
        self._add(pipe, PIPE_LAYER, layer)
        self._add(pipe, PIPE_DATASET, dataset)
        return pipe

    def add_trained_model(self, name: str) -> Iri:
        return self._mint(name, TRAINED_MODEL)

    # -- evaluation ------------------------------------------------------

    def add_evaluation(
        self,
        name: str,
        network: Iri,
        config: Iri,
        strategy: Iri,
        metric: Iri,
        dataset: Iri,
        score: float,
        date: datetime | str | None = None,
    ) -> Iri:
        self._require(network, NETWORK, "network")
        self._require(config, ANN_CONFIGURATION, "configuration")
        self._require(strategy, TRAINING_STRATEGY, "strategy")
        self._require(metric, METRIC, "metric")
        self._require(dataset, DATASET, "dataset")
        score_lit = Literal(score, XSD_DOUBLE)
        date_lit = Literal(date, XSD_DATETIME) if date is not None else None
        ev = self._mint(name, NETWORK_EVALUATION)
        self._add(ev, EVALUATES_NETWORK, network)
        self._add(ev, EVALUATES_CONFIGURATION, config)
        self._add(ev, BASED_ON_TRAINING_STRATEGY, strategy)
        self._add(ev, HAS_EVALUATION_METRIC, metric)
        self._add(ev, EVALUATES_ON_DATASET, dataset)
        self._add(ev, EVAL_SCORE, score_lit)
        if date_lit is not None:
            self._add(ev, EVAL_DATE, date_lit)
        return ev
