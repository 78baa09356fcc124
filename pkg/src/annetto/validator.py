"""Structural constraint checks for ANNETT-O knowledge bases.

Rule table (each rule is checked independently, so one defect may be
reported under several rules):

=====  ===============================================================
R1     a Network belongs to at least one ANNConfiguration
R2     a trained Network has exactly one objective function
R3     a Layer belongs to exactly one Network
R4     fan-out > 1 only for SeparationLayer, fan-in > 1 only for
       AggregationLayer (and their subclasses)
R5     nothing connects into an InputLayer or out of an OutputLayer
R6     every nextLayer has its mirrored previousLayer and vice versa
R7     sameLayerAs is symmetric, irreflexive and crosses networks
R8     both ends of a nextLayer are in the same Network
R9     a TrainingStrategy has at least one TrainingSession
R10    a TrainingSession has at least one TrainingStep
R11    session chains: out/in-degree <= 1, acyclic
R12    step chains linear and acyclic per session/loop; loops carry
       loop_count >= 1 or loop_condition
R13    a NetworkEvaluation has evaluatesNetwork, one double eval_score
       and a Metric
R14    a DatasetPipe joins one InOutLayer and one Dataset
R15    an ActivationLayer has an ActivationFunction
=====  ===============================================================

Warnings (never affecting validity) are emitted under R2 for untrained
networks without exactly one objective, and under R10 for single steps
that do not name exactly one network.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field

from .builder import (
    ACTIVATION_FUNCTION, ACTIVATION_LAYER, AGGREGATION_LAYER, ANN_CONFIGURATION, DATASET,
    DATASET_PIPE, EVAL_SCORE, EVALUATES_NETWORK, HAS_ACTIVATION_FUNCTION, HAS_EVALUATION_METRIC,
    HAS_LAYER, HAS_LOOP_STEP, HAS_NETWORK, HAS_OBJECTIVE_FUNCTION, HAS_TRAINING_SESSION,
    HAS_TRAINING_STEP, INOUT_LAYER, INPUT_LAYER, KB, LAYER, LOOP_CONDITION, LOOP_COUNT, METRIC,
    NETWORK, NETWORK_EVALUATION, NEXT_LAYER, NEXT_TRAINING_SESSION, NEXT_TRAINING_STEP,
    OUTPUT_LAYER, PIPE_DATASET, PIPE_LAYER, PREVIOUS_LAYER, SAME_LAYER_AS, SEPARATION_LAYER,
    TRAINING_FORWARD_ONLY, TRAINING_LOOP, TRAINING_SESSION, TRAINING_STEP, TRAINING_STRATEGY,
    TRAINS_NETWORK,
)
from .schema import TypeIndex
from .terms import XSD_DOUBLE, XSD_INTEGER, Iri, Literal, Term, Triple, compact

RULE_IDS = tuple(f"R{i}" for i in range(1, 16))


@dataclass(frozen=True, order=True)
class Violation:
    rule_id: str
    subject: Iri
    message: str
    severity: str = "error"

    def to_dict(self, prefixes: dict[str, str] | None = None) -> dict[str, str]:
        subject = compact(self.subject, prefixes) if prefixes else self.subject.value
        return {"rule": self.rule_id, "subject": subject, "message": self.message, "severity": self.severity}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)
    checked_rule_ids: list[str] = field(default_factory=lambda: list(RULE_IDS))

    @property
    def ok(self) -> bool:
        return not self.violations

    def rule_ids(self) -> set[str]:
        return {v.rule_id for v in self.violations}

    def by_rule(self, rule_id: str) -> list[Violation]:
        return [v for v in self.violations if v.rule_id == rule_id]

    def to_text(self, prefixes: dict[str, str] | None = None, *, warnings: bool = False) -> str:
        rows = self.warnings if warnings else self.violations
        lines = []
        for v in rows:
            subject = compact(v.subject, prefixes) if prefixes else v.subject.value
            lines.append(f"{v.rule_id}\t{subject}\t{v.message}")
        return "".join(line + "\n" for line in lines)

    def to_json(self, prefixes: dict[str, str] | None = None) -> str:
        doc = {
            "valid": self.ok,
            "checked_rules": self.checked_rule_ids,
            "violations": [v.to_dict(prefixes) for v in self.violations],
            "warnings": [v.to_dict(prefixes) for v in self.warnings],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _name(iri: Term) -> str:
    if isinstance(iri, Iri):
        return iri.value.rsplit("/", 1)[-1].rsplit("#", 1)[-1]
    return repr(iri)


class _Checker:
    def __init__(self, kb: KB, strict_feedforward: bool) -> None:
        self.g = kb.graph
        self.types = TypeIndex.build(kb.schema, kb.graph)
        self.strict = strict_feedforward
        self.found: set[Violation] = set()
        self.warned: set[Violation] = set()

    def add(self, rule: str, subject: Iri, message: str) -> None:
        self.found.add(Violation(rule, subject, message))

    def warn(self, rule: str, subject: Iri, message: str) -> None:
        self.warned.add(Violation(rule, subject, message, "warning"))

    def of(self, cls: Iri) -> list[Iri]:
        return self.types.all_of(cls)

    def is_a(self, x: Term, cls: Iri) -> bool:
        return isinstance(x, Iri) and self.types.has(x, cls)

    def iri_objects(self, s: Iri, p: Iri) -> list[Iri]:
        return [o for o in self.g.objects(s, p) if isinstance(o, Iri)]

    def networks_of(self, layer: Iri) -> set[Iri]:
        return {n for n in self.g.subjects(HAS_LAYER, layer) if self.is_a(n, NETWORK)}

    # -- topology --------------------------------------------------------

    def r1(self) -> None:
        for net in self.of(NETWORK):
            if not any(self.is_a(c, ANN_CONFIGURATION) for c in self.g.subjects(HAS_NETWORK, net)):
                self.add("R1", net, "network is not part of any ANNConfiguration")

    def r2(self) -> None:
        trained: set[Iri] = set()
        for t in self.g.match(None, TRAINS_NETWORK, None):
            if self.is_a(t.subject, TRAINING_STEP) and not self.is_a(t.subject, TRAINING_FORWARD_ONLY):
                if isinstance(t.object, Iri):
                    trained.add(t.object)
        for net in self.of(NETWORK):
            n = len(self.g.objects(net, HAS_OBJECTIVE_FUNCTION))
            if n == 1:
                continue
            msg = f"network has {n} objective functions, expected exactly one"
            if net in trained:
                self.add("R2", net, msg)
            else:
                self.warn("R2", net, msg + " (network is not trained by any step)")

    def r3(self) -> None:
        for layer in self.of(LAYER):
            n = len(self.networks_of(layer))
            if n != 1:
                self.add("R3", layer, f"layer belongs to {n} networks, expected exactly one")

    def r4(self) -> None:
        for layer in self.of(LAYER):
            nxt = self.g.objects(layer, NEXT_LAYER)
            if len(nxt) > 1 and not self.is_a(layer, SEPARATION_LAYER):
                self.add("R4", layer, f"{len(nxt)} following layers but not a SeparationLayer")
            prev = self.g.objects(layer, PREVIOUS_LAYER)
            if len(prev) > 1 and not self.is_a(layer, AGGREGATION_LAYER):
                self.add("R4", layer, f"{len(prev)} preceding layers but not an AggregationLayer")

    def r5(self) -> None:
        for layer in self.of(INPUT_LAYER):
            if self.g.objects(layer, PREVIOUS_LAYER) or self.g.subjects(NEXT_LAYER, layer):
                self.add("R5", layer, "input layer has a layer connecting into it")
        for layer in self.of(OUTPUT_LAYER):
            if self.g.objects(layer, NEXT_LAYER) or self.g.subjects(PREVIOUS_LAYER, layer):
                self.add("R5", layer, "output layer connects to a following layer")

    def r6(self) -> None:
        for s, _, o in self.g.match(None, NEXT_LAYER, None):
            if not isinstance(o, Iri) or Triple(o, PREVIOUS_LAYER, s) not in self.g:
                self.add("R6", s, f"nextLayer {_name(o)} has no mirrored previousLayer")
        for s, _, o in self.g.match(None, PREVIOUS_LAYER, None):
            if not isinstance(o, Iri) or Triple(o, NEXT_LAYER, s) not in self.g:
                self.add("R6", s, f"previousLayer {_name(o)} has no mirrored nextLayer")

    def r7(self) -> None:
        for s, _, o in self.g.match(None, SAME_LAYER_AS, None):
            if not isinstance(o, Iri):
                self.add("R7", s, "sameLayerAs points to a literal")
                continue
            if s == o:
                self.add("R7", s, "layer is sameLayerAs itself")
                continue
            if Triple(o, SAME_LAYER_AS, s) not in self.g:
                self.add("R7", s, f"sameLayerAs {_name(o)} is not mirrored")
            if self.networks_of(s) & self.networks_of(o):
                self.add("R7", s, f"sameLayerAs {_name(o)} links layers of the same network")

    def r8(self) -> None:
        for s, _, o in self.g.match(None, NEXT_LAYER, None):
            if not isinstance(o, Iri):
                continue
            a, b = self.networks_of(s), self.networks_of(o)
            if a and b and not a & b:
                self.add("R8", s, f"nextLayer {_name(o)} crosses into another network")
        if self.strict:
            self._feedforward()

    def _feedforward(self) -> None:
        # strict mode only: a nextLayer cycle inside one network
        for net in self.of(NETWORK):
            layers = set(self.iri_objects(net, HAS_LAYER))
            cycle = _find_cycle(layers, lambda x: [y for y in self.iri_objects(x, NEXT_LAYER) if y in layers])
            if cycle:
                path = " -> ".join(_name(x) for x in cycle)
                self.add("R8", net, f"nextLayer cycle in feedforward mode: {path}")

    # -- training --------------------------------------------------------

    def r9(self) -> None:
        for st in self.of(TRAINING_STRATEGY):
            if not any(self.is_a(s, TRAINING_SESSION) for s in self.g.objects(st, HAS_TRAINING_SESSION)):
                self.add("R9", st, "training strategy has no TrainingSession")

    def r10(self) -> None:
        for sess in self.of(TRAINING_SESSION):
            if not any(self.is_a(s, TRAINING_STEP) for s in self.g.objects(sess, HAS_TRAINING_STEP)):
                self.add("R10", sess, "training session has no TrainingStep")
        for step in self.of(TRAINING_STEP):
            if self.is_a(step, TRAINING_LOOP):
                continue
            n = len(self.g.objects(step, TRAINS_NETWORK))
            if n != 1:
                self.warn("R10", step, f"step references {n} networks, expected exactly one")

    def r11(self) -> None:
        sessions = self.of(TRAINING_SESSION)
        for sess in sessions:
            out = self.g.objects(sess, NEXT_TRAINING_SESSION)
            if len(out) > 1:
                self.add("R11", sess, f"{len(out)} nextTrainingSession links, at most one allowed")
            inc = self.g.subjects(NEXT_TRAINING_SESSION, sess)
            if len(inc) > 1:
                self.add("R11", sess, f"preceded by {len(inc)} sessions, at most one allowed")
        cycle_members = _cycle_members(sessions, lambda x: self.iri_objects(x, NEXT_TRAINING_SESSION))
        for sess in cycle_members:
            self.add("R11", sess, "session chain is cyclic")

    def r12(self) -> None:
        steps = self.of(TRAINING_STEP)
        scope: dict[Iri, tuple[str, Iri | None]] = {}
        loops_of: dict[Iri, list[Iri]] = {}
        for loop in self.of(TRAINING_LOOP):
            for inner in self.iri_objects(loop, HAS_LOOP_STEP):
                loops_of.setdefault(inner, []).append(loop)
        for step in steps:
            owners = loops_of.get(step, [])
            if len(owners) > 1:
                self.add("R12", step, f"step is inside {len(owners)} loops")
            scope[step] = ("loop", owners[0]) if owners else ("session", None)

        for step in steps:
            out = self.g.objects(step, NEXT_TRAINING_STEP)
            if len(out) > 1:
                self.add("R12", step, f"{len(out)} nextTrainingStep links, chain is not linear")
            inc = self.g.subjects(NEXT_TRAINING_STEP, step)
            if len(inc) > 1:
                self.add("R12", step, f"preceded by {len(inc)} steps, chain is not linear")
            for nxt in out:
                if not isinstance(nxt, Iri) or nxt not in scope:
                    self.add("R12", step, f"nextTrainingStep {_name(nxt)} is not a TrainingStep")
                    continue
                if scope[nxt] != scope[step]:
                    self.add("R12", step, f"nextTrainingStep {_name(nxt)} leaves its loop/session level")
                elif not set(self.g.subjects(HAS_TRAINING_STEP, step)) & set(self.g.subjects(HAS_TRAINING_STEP, nxt)):
                    self.add("R12", step, f"nextTrainingStep {_name(nxt)} belongs to another session")
        for step in _cycle_members(steps, lambda x: self.iri_objects(x, NEXT_TRAINING_STEP)):
            self.add("R12", step, "step chain is cyclic")

        # each top-level chain of a session must be one sequence
        for sess in self.of(TRAINING_SESSION):
            top = [s for s in self.iri_objects(sess, HAS_TRAINING_STEP)
                   if s in scope and scope[s][0] == "session"]
            self._single_chain(sess, top, "session")
        for loop in self.of(TRAINING_LOOP):
            self._single_chain(loop, [s for s in self.iri_objects(loop, HAS_LOOP_STEP) if s in scope], "loop")
            counts = [o for o in self.g.objects(loop, LOOP_COUNT)
                      if isinstance(o, Literal) and o.datatype == XSD_INTEGER]
            has_condition = bool(self.g.objects(loop, LOOP_CONDITION))
            if not has_condition and not any(c.value >= 1 for c in counts):  # type: ignore[operator]
                self.add("R12", loop, "loop has neither loop_count >= 1 nor loop_condition")

    def _single_chain(self, owner: Iri, members: list[Iri], what: str) -> None:
        if not members:
            return
        member_set = set(members)
        heads = [m for m in members if not any(p in member_set for p in self.g.subjects(NEXT_TRAINING_STEP, m))]
        if len(heads) > 1:
            names = ", ".join(sorted(_name(h) for h in heads))
            self.add("R12", owner, f"{what} steps form {len(heads)} separate chains ({names})")

    # -- evaluation and auxiliaries --------------------------------------

    def r13(self) -> None:
        for ev in self.of(NETWORK_EVALUATION):
            if not any(self.is_a(n, NETWORK) for n in self.g.objects(ev, EVALUATES_NETWORK)):
                self.add("R13", ev, "evaluation has no evaluatesNetwork pointing to a Network")
            scores = self.g.objects(ev, EVAL_SCORE)
            doubles = [s for s in scores if isinstance(s, Literal) and s.datatype == XSD_DOUBLE]
            if len(scores) != 1 or len(doubles) != 1:
                self.add("R13", ev, f"evaluation needs exactly one xsd:double eval_score, found {len(scores)}")
            if not any(self.is_a(m, METRIC) for m in self.g.objects(ev, HAS_EVALUATION_METRIC)):
                self.add("R13", ev, "evaluation has no Metric")

    def r14(self) -> None:
        for pipe in self.of(DATASET_PIPE):
            layers = self.g.objects(pipe, PIPE_LAYER)
            if len(layers) != 1 or not self.is_a(layers[0], INOUT_LAYER):
                self.add("R14", pipe, "pipe must have exactly one pipeLayer that is an InOutLayer")
            data = self.g.objects(pipe, PIPE_DATASET)
            if len(data) != 1 or not self.is_a(data[0], DATASET):
                self.add("R14", pipe, "pipe must have exactly one pipeDataset that is a Dataset")

    def r15(self) -> None:
        for layer in self.of(ACTIVATION_LAYER):
            fns = self.g.objects(layer, HAS_ACTIVATION_FUNCTION)
            if not any(self.is_a(f, ACTIVATION_FUNCTION) for f in fns):
                self.add("R15", layer, "activation layer has no ActivationFunction")

    def run(self) -> ValidationReport:
        for rule in RULE_IDS:
            getattr(self, rule.lower())()
        return ValidationReport(
            violations=sorted(self.found, key=_order),
            warnings=sorted(self.warned, key=_order),
        )


def _order(v: Violation) -> tuple:
    return (int(v.rule_id[1:]), v.subject.value, v.message)


def _find_cycle(nodes: Iterable[Iri], succ) -> list[Iri] | None:
    colour: dict[Iri, int] = {}
    for start in sorted(nodes):
        if start in colour:
            continue
        path = [start]
        colour[start] = 1
        stack = [iter(sorted(succ(start)))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                colour[path.pop()] = 2
                stack.pop()
                continue
            state = colour.get(nxt)
            if state == 1:
                return path[path.index(nxt):] + [nxt]
            if state is None:
                colour[nxt] = 1
                path.append(nxt)
                stack.append(iter(sorted(succ(nxt))))
    return None


def _cycle_members(nodes: Iterable[Iri], succ) -> list[Iri]:
    """Nodes lying on some directed cycle (self-loops included)."""
    nodes = list(nodes)
    members = []
    for n in nodes:
        seen: set[Iri] = set()
        frontier = list(succ(n))
        while frontier:
            x = frontier.pop()
            if x == n:
                members.append(n)
                break
            if x in seen:
                continue
            seen.add(x)
            frontier.extend(succ(x))
    return members


def validate(kb: KB, *, strict_feedforward: bool = False) -> ValidationReport:
    """Check ``kb`` against rules R1-R15; the graph is only read.

    With ``strict_feedforward`` a nextLayer cycle inside a network is
    reported under R8 (cycles are otherwise allowed, for recurrent nets).
    """
    return _Checker(kb, strict_feedforward).run()
