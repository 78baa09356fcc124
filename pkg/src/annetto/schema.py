"""The ANNETT-O vocabulary: ontology classes, properties and subclass inference."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import TYPE_CHECKING, Literal as Kind

from .errors import SchemaError, UnknownTermError
from .graph import Graph
from .terms import (
    OWL, RDF_TYPE, RDFS, XSD_BOOLEAN, XSD_DATETIME, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    Iri, Triple, ann,
)

if TYPE_CHECKING:
    from .builder import KB

SUBCLASS_OF = Iri(RDFS + "subClassOf")
RDFS_CLASS = Iri(RDFS + "Class")
RDFS_DOMAIN = Iri(RDFS + "domain")
RDFS_RANGE = Iri(RDFS + "range")
OWL_CLASS = Iri(OWL + "Class")
OWL_THING = Iri(OWL + "Thing")
OWL_OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")
OWL_DATATYPE_PROPERTY = Iri(OWL + "DatatypeProperty")
OWL_SYMMETRIC_PROPERTY = Iri(OWL + "SymmetricProperty")
OWL_INVERSE_OF = Iri(OWL + "inverseOf")


@dataclass(frozen=True)
class OntClassDef:
    iri: Iri
    parents: frozenset[Iri] = frozenset()


@dataclass(frozen=True)
class PropertyDef:
    iri: Iri
    kind: Kind["object", "data"]
    inverse_of: Iri | None = None
    symmetric: bool = False
    domain_hint: Iri | None = None
    range_hint: Iri | None = None


# (class, parents); roots have no parent
_CLASSES: list[tuple[str, tuple[str, ...]]] = [
    ("ANNConfiguration", ()),
    ("Network", ()),
    ("Layer", ()),
    ("HiddenLayer", ("Layer",)),
    ("InOutLayer", ("Layer",)),
    ("ActivationLayer", ("HiddenLayer",)),
    ("AggregationLayer", ("HiddenLayer",)),
    ("SeparationLayer", ("HiddenLayer",)),
    ("ModificationLayer", ("HiddenLayer",)),
    ("FullyConnectedLayer", ("ActivationLayer",)),
    ("ConcatLayer", ("AggregationLayer",)),
    ("InputLayer", ("InOutLayer",)),
    ("OutputLayer", ("InOutLayer",)),
    ("TrainingStrategy", ()),
    ("TrainingSession", ()),
    ("TrainingStep", ()),
    ("TrainingLoop", ("TrainingStep",)),
    ("TrainingSingle", ("TrainingStep",)),
    ("TrainingSingleForwardOnly", ("TrainingStep",)),
    ("TrainingOptimizer", ()),
    ("NetworkEvaluation", ()),
    ("Function", ()),
    ("ActivationFunction", ("Function",)),
    ("Relu", ("ActivationFunction",)),
    ("Softmax", ("ActivationFunction",)),
    ("ObjectiveFunction", ("Function",)),
    ("CostFunction", ("ObjectiveFunction",)),
    ("Metric", ("Function",)),
    ("Accuracy", ("Metric",)),
    ("Dataset", ()),
    ("Labelset", ("Dataset",)),
    ("DatasetPipe", ()),
    ("TrainedModel", ()),
    ("TaskCharacterization", ()),
    ("Clustering", ("TaskCharacterization",)),
    ("Classification", ("TaskCharacterization",)),
    ("Generation", ("TaskCharacterization",)),
    ("Discrimination", ("TaskCharacterization",)),
    ("Adversarial", ("TaskCharacterization",)),
    ("DataCharacterization", ()),
]

# name, domain, range, inverse, symmetric
_OBJECT_PROPERTIES: list[tuple[str, str | None, str | None, str | None, bool]] = [
    ("hasNetwork", "ANNConfiguration", "Network", None, False),
    ("hasLayer", "Network", "Layer", None, False),
    ("nextLayer", "Layer", "Layer", "previousLayer", False),
    ("previousLayer", "Layer", "Layer", "nextLayer", False),
    ("sameLayerAs", "Layer", "Layer", None, True),
    ("hasActivationFunction", "Layer", "ActivationFunction", None, False),
    ("hasTrainingStrategy", "ANNConfiguration", "TrainingStrategy", None, False),
    ("hasTrainingSession", "TrainingStrategy", "TrainingSession", None, False),
    ("nextTrainingSession", "TrainingSession", "TrainingSession", None, False),
    ("hasTrainingStep", "TrainingSession", "TrainingStep", None, False),
    ("nextTrainingStep", "TrainingStep", "TrainingStep", None, False),
    ("hasTaskType", "Network", "TaskCharacterization", None, False),
    ("updatesLayer", "TrainingStep", "Layer", None, False),
    ("evaluatesNetwork", "NetworkEvaluation", "Network", None, False),
    ("basedOnTrainingStrategy", "NetworkEvaluation", "TrainingStrategy", None, False),
    ("hasEvaluationMetric", "NetworkEvaluation", "Metric", None, False),
    ("evaluatesOnDataset", "NetworkEvaluation", "Dataset", None, False),
    ("evaluatesConfiguration", "NetworkEvaluation", "ANNConfiguration", None, False),
    ("pipeLayer", "DatasetPipe", "InOutLayer", None, False),
    ("pipeDataset", "DatasetPipe", "Dataset", None, False),
    ("hasObjectiveFunction", "Network", "ObjectiveFunction", None, False),
    ("hasTrainingOptimizer", "TrainingStep", "TrainingOptimizer", None, False),
    ("trainsNetwork", "TrainingStep", "Network", None, False),
    ("hasLoopStep", "TrainingLoop", "TrainingStep", None, False),
    ("producesDataset", "TrainingStep", "Dataset", None, False),
    ("hasDataCharacterization", "Dataset", "DataCharacterization", None, False),
]

_DATA_PROPERTIES: list[tuple[str, str, str]] = [
    ("eval_score", "NetworkEvaluation", XSD_DOUBLE),
    ("eval_date", "NetworkEvaluation", XSD_DATETIME),
    ("function_math", "Function", XSD_STRING),
    ("loop_count", "TrainingLoop", XSD_INTEGER),
    ("loop_condition", "TrainingLoop", XSD_STRING),
    ("is_transient", "Dataset", XSD_BOOLEAN),
]


class SchemaModel:
    """Immutable class hierarchy plus property table.

    The reflexive-transitive ancestor set of every class is computed once at
    construction, so ``is_subclass`` is a set lookup.
    """

    def __init__(self, classes: Mapping[Iri, OntClassDef], properties: Mapping[Iri, PropertyDef]) -> None:
        self._classes = MappingProxyType(dict(classes))
        self._properties = MappingProxyType(dict(properties))
        for cdef in self._classes.values():
            for parent in cdef.parents:
                if parent not in self._classes:
                    raise SchemaError(f"{cdef.iri} has undefined parent {parent}")
        for pdef in self._properties.values():
            if pdef.symmetric and pdef.inverse_of is not None and pdef.inverse_of != pdef.iri:
                raise SchemaError(f"symmetric property {pdef.iri} cannot have a distinct inverse")
            if pdef.inverse_of is not None:
                other = self._properties.get(pdef.inverse_of)
                if other is None or other.inverse_of != pdef.iri:
                    raise SchemaError(f"inverse of {pdef.iri} is not mutual")
        self._ancestors = _closure(self._classes)

    @property
    def classes(self) -> Mapping[Iri, OntClassDef]:
        return self._classes

    @property
    def properties(self) -> Mapping[Iri, PropertyDef]:
        return self._properties

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SchemaModel):
            return NotImplemented
        return dict(self._classes) == dict(other._classes) and dict(self._properties) == dict(other._properties)

    __hash__ = None  # type: ignore[assignment]

    def has_class(self, iri: Iri) -> bool:
        return iri in self._classes

    def ancestors(self, iri: Iri) -> frozenset[Iri]:
        try:
            return self._ancestors[iri]
        except KeyError:
            raise UnknownTermError(iri) from None

    def is_subclass(self, sub: Iri, sup: Iri) -> bool:
        if sup not in self._classes:
            raise UnknownTermError(sup)
        return sup in self.ancestors(sub)

    def descendants(self, iri: Iri) -> frozenset[Iri]:
        if iri not in self._classes:
            raise UnknownTermError(iri)
        return frozenset(c for c, anc in self._ancestors.items() if iri in anc)

    def inverse_of(self, prop: Iri) -> Iri | None:
        pdef = self._properties.get(prop)
        if pdef is None:
            return None
        if pdef.symmetric:
            return prop
        return pdef.inverse_of

    def extend_from_graph(self, g: Graph) -> SchemaModel:
        return extend_from_graph(self, g)

    def to_graph(self) -> Graph:
        """Render the model with RDFS/OWL vocabulary (inverse of ``extend_from_graph``)."""
        g = Graph()
        for cdef in self._classes.values():
            g.insert(Triple(cdef.iri, RDF_TYPE, OWL_CLASS))
            for parent in cdef.parents:
                g.insert(Triple(cdef.iri, SUBCLASS_OF, parent))
        for pdef in self._properties.values():
            kind = OWL_OBJECT_PROPERTY if pdef.kind == "object" else OWL_DATATYPE_PROPERTY
            g.insert(Triple(pdef.iri, RDF_TYPE, kind))
            if pdef.symmetric:
                g.insert(Triple(pdef.iri, RDF_TYPE, OWL_SYMMETRIC_PROPERTY))
            if pdef.inverse_of is not None:
                g.insert(Triple(pdef.iri, OWL_INVERSE_OF, pdef.inverse_of))
            if pdef.domain_hint is not None:
                g.insert(Triple(pdef.iri, RDFS_DOMAIN, pdef.domain_hint))
            if pdef.range_hint is not None:
                g.insert(Triple(pdef.iri, RDFS_RANGE, pdef.range_hint))
        return g


def _find_cycle(parents: Mapping[Iri, Iterable[Iri]]) -> list[Iri] | None:
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {c: WHITE for c in parents}
    for start in sorted(parents):
        if colour[start] != WHITE:
            continue
        path: list[Iri] = []
        stack: list[tuple[Iri, list[Iri]]] = [(start, sorted(parents[start]))]
        colour[start] = GREY
        path.append(start)
        while stack:
            node, todo = stack[-1]
            if not todo:
                colour[node] = BLACK
                stack.pop()
                path.pop()
                continue
            nxt = todo.pop(0)
            state = colour.get(nxt, BLACK)
            if state == GREY:
                return path[path.index(nxt):] + [nxt]
            if state == WHITE:
                colour[nxt] = GREY
                path.append(nxt)
                stack.append((nxt, sorted(parents.get(nxt, ()))))
    return None


def _closure(classes: Mapping[Iri, OntClassDef]) -> dict[Iri, frozenset[Iri]]:
    cycle = _find_cycle({c: d.parents for c, d in classes.items()})
    if cycle:
        raise SchemaError("subclass cycle: " + " -> ".join(c.value for c in cycle))
    done: dict[Iri, frozenset[Iri]] = {}

    def visit(c: Iri) -> frozenset[Iri]:
        if c not in done:
            acc = {c}
            for parent in classes[c].parents:
                acc |= visit(parent)
            done[c] = frozenset(acc)
        return done[c]

    for c in classes:
        visit(c)
    return done


def _build_builtin() -> SchemaModel:
    classes = {
        ann(name): OntClassDef(ann(name), frozenset(ann(p) for p in parents))
        for name, parents in _CLASSES
    }
    props: dict[Iri, PropertyDef] = {}
    for name, dom, rng, inv, sym in _OBJECT_PROPERTIES:
        props[ann(name)] = PropertyDef(
            ann(name), "object",
            inverse_of=ann(inv) if inv else None,
            symmetric=sym,
            domain_hint=ann(dom) if dom else None,
            range_hint=ann(rng) if rng else None,
        )
    for name, dom, datatype in _DATA_PROPERTIES:
        props[ann(name)] = PropertyDef(ann(name), "data", domain_hint=ann(dom), range_hint=Iri(datatype))
    return SchemaModel(classes, props)


_BUILTIN = _build_builtin()


def builtin_schema() -> SchemaModel:
    """The built-in ANNETT-O roster (immutable, so one shared instance)."""
    return _BUILTIN


def extend_from_graph(schema: SchemaModel, g: Graph) -> SchemaModel:
    """Union ``schema`` with the class and property definitions found in ``g``.

    Recognises rdfs:subClassOf, owl:Class/rdfs:Class, owl:ObjectProperty,
    owl:DatatypeProperty, owl:SymmetricProperty, owl:inverseOf, rdfs:domain
    and rdfs:range. Existing definitions keep every parent and attribute they
    already had; new statements can only add to them.
    """
    parents: dict[Iri, set[Iri]] = {c: set(d.parents) for c, d in schema.classes.items()}

    def declare(c: Iri) -> None:
        if c != OWL_THING:
            parents.setdefault(c, set())

    for kind in (OWL_CLASS, RDFS_CLASS):
        for t in g.match(None, RDF_TYPE, kind):
            declare(t.subject)
    for t in g.match(None, SUBCLASS_OF, None):
        if not isinstance(t.object, Iri):
            raise SchemaError(f"subClassOf object must be an IRI: {t}")
        declare(t.subject)
        if t.object != OWL_THING:
            declare(t.object)
            if t.object != t.subject:
                parents[t.subject].add(t.object)

    cycle = _find_cycle(parents)
    if cycle:
        raise SchemaError("subclass cycle: " + " -> ".join(c.value for c in cycle))

    props = dict(schema.properties)

    def prop(iri: Iri, kind: str) -> PropertyDef:
        if iri not in props:
            props[iri] = PropertyDef(iri, kind)  # type: ignore[arg-type]
        return props[iri]

    for t in g.match(None, RDF_TYPE, OWL_OBJECT_PROPERTY):
        prop(t.subject, "object")
    for t in g.match(None, RDF_TYPE, OWL_DATATYPE_PROPERTY):
        prop(t.subject, "data")
    for t in g.match(None, RDF_TYPE, OWL_SYMMETRIC_PROPERTY):
        pdef = prop(t.subject, "object")
        if pdef.inverse_of is None:
            props[t.subject] = replace(pdef, symmetric=True)
    for t in g.match(None, OWL_INVERSE_OF, None):
        if not isinstance(t.object, Iri):
            raise SchemaError(f"inverseOf object must be an IRI: {t}")
        a, b = prop(t.subject, "object"), prop(t.object, "object")
        if a.inverse_of is None and b.inverse_of is None and not a.symmetric and not b.symmetric:
            props[a.iri] = replace(a, inverse_of=b.iri)
            props[b.iri] = replace(props[b.iri], inverse_of=a.iri)
    for pred, attr in ((RDFS_DOMAIN, "domain_hint"), (RDFS_RANGE, "range_hint")):
        for t in g.match(None, pred, None):
            if t.subject in props and isinstance(t.object, Iri) and getattr(props[t.subject], attr) is None:
                props[t.subject] = replace(props[t.subject], **{attr: t.object})

    classes = {c: OntClassDef(c, frozenset(ps)) for c, ps in parents.items()}
    return SchemaModel(classes, props)


def types_with_inference(kb: KB, individual: Iri) -> set[Iri]:
    """Asserted rdf:type values of ``individual`` plus all their superclasses.

    Types the schema does not know are kept as asserted, without parents.
    """
    return _inferred(kb.schema, kb.graph, individual)


def _inferred(schema: SchemaModel, graph: Graph, individual: Iri) -> set[Iri]:
    result: set[Iri] = set()
    for t in graph.objects(individual, RDF_TYPE):
        if not isinstance(t, Iri):
            continue
        if schema.has_class(t):
            result |= schema.ancestors(t)
        else:
            result.add(t)
    return result


@dataclass
class TypeIndex:
    """Entailed rdf:type statements of a graph, indexed both ways."""

    types: dict[Iri, frozenset[Iri]] = field(default_factory=dict)
    instances: dict[Iri, list[Iri]] = field(default_factory=dict)

    @classmethod
    def build(cls, schema: SchemaModel, graph: Graph) -> TypeIndex:
        index = cls()
        seen: set[Iri] = set()
        for t in graph.match(None, RDF_TYPE, None):
            if t.subject in seen:
                continue
            seen.add(t.subject)
            inferred = frozenset(_inferred(schema, graph, t.subject))
            index.types[t.subject] = inferred
            for c in sorted(inferred):
                index.instances.setdefault(c, []).append(t.subject)
        return index

    def of(self, individual: Iri) -> frozenset[Iri]:
        return self.types.get(individual, frozenset())

    def has(self, individual: Iri, cls: Iri) -> bool:
        return cls in self.types.get(individual, ())

    def all_of(self, cls: Iri) -> list[Iri]:
        return self.instances.get(cls, [])


def materialize(schema: SchemaModel, graph: Graph) -> int:
    """Insert the missing mirror of every inverse or symmetric statement.

    Returns the number of triples added.
    """
    added = 0
    for pdef in schema.properties.values():
        mirror = schema.inverse_of(pdef.iri)
        if mirror is None:
            continue
        for t in list(graph.match(None, pdef.iri, None)):
            if isinstance(t.object, Iri):
                added += graph.insert(Triple(t.object, mirror, t.subject))
    return added
