"""In-memory triple store with subject, predicate and object indexes."""

from __future__ import annotations

from collections.abc import Iterable, Iterator

from .terms import Iri, Term, Triple, check_triple, default_prefixes

# index[a][b] is an insertion-ordered dict used as a set of c
_Index = dict[Term, dict[Term, dict[Term, None]]]


def _add(index: _Index, a: Term, b: Term, c: Term) -> None:
    index.setdefault(a, {}).setdefault(b, {})[c] = None


def _drop(index: _Index, a: Term, b: Term, c: Term) -> None:
    inner = index[a]
    leaf = inner[b]
    del leaf[c]
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]


class Graph:
    """A set of triples.

    Three nested indexes (SPO, POS, OSP) make every pattern with at least one
    bound position a direct lookup. Iteration order follows insertion order,
    so ``match`` is deterministic for a given graph state.
    """

    def __init__(self, triples: Iterable[Triple] = (), prefixes: dict[str, str] | None = None) -> None:
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        self._size = 0
        self.prefix_map: dict[str, str] = dict(default_prefixes() if prefixes is None else prefixes)
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[Triple]:
        return self.match()

    def __contains__(self, t: object) -> bool:
        if not isinstance(t, tuple) or len(t) != 3:
            return False
        s, p, o = t
        try:
            return o in self._spo[s][p]
        except (KeyError, TypeError):
            return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return graph_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<Graph with {self._size} triples>"

    def contains(self, t: Triple) -> bool:
        return t in self

    def insert(self, t: Triple) -> bool:
        """Add ``t``; returns True if the graph grew."""
        s, p, o = check_triple(t)
        if t in self:
            return False
        _add(self._spo, s, p, o)
        _add(self._pos, p, o, s)
        _add(self._osp, o, s, p)
        self._size += 1
        return True

    add = insert

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.insert(t) for t in triples)

    def remove(self, t: Triple) -> bool:
        """Delete ``t`` if present; returns True if something was removed."""
        if t not in self:
            return False
        s, p, o = t
        _drop(self._spo, s, p, o)
        _drop(self._pos, p, o, s)
        _drop(self._osp, o, s, p)
        self._size -= 1
        return True

    def match(self, s: Iri | None = None, p: Iri | None = None, o: Term | None = None) -> Iterator[Triple]:
        """Yield the triples agreeing with every bound (non-None) position."""
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            if p is not None:
                objs = by_p.get(p)
                if not objs:
                    return
                if o is not None:
                    if o in objs:
                        yield Triple(s, p, o)
                    return
                for obj in objs:
                    yield Triple(s, p, obj)
                return
            if o is not None:
                preds = self._osp.get(o, {}).get(s)
                for pred in preds or ():
                    yield Triple(s, pred, o)
                return
            for pred, objs in by_p.items():
                for obj in objs:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            if o is not None:
                for subj in by_o.get(o, ()):
                    yield Triple(subj, p, o)
                return
            for obj, subjs in by_o.items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        for subj, by_p in self._spo.items():
            for pred, objs in by_p.items():
                for obj in objs:
                    yield Triple(subj, pred, obj)

    # convenience accessors used throughout the validator and builder

    def objects(self, s: Iri, p: Iri) -> list[Term]:
        return list(self._spo.get(s, {}).get(p, ()))

    def subjects(self, p: Iri, o: Term) -> list[Iri]:
        return list(self._pos.get(p, {}).get(o, ()))  # type: ignore[arg-type]

    def value(self, s: Iri, p: Iri) -> Term | None:
        objs = self._spo.get(s, {}).get(p)
        return next(iter(objs)) if objs else None

    def subject_set(self) -> list[Iri]:
        return list(self._spo)  # type: ignore[arg-type]

    def predicate_set(self) -> list[Iri]:
        return list(self._pos)  # type: ignore[arg-type]

    def mentions(self, term: Term) -> bool:
        return term in self._spo or term in self._osp or term in self._pos

    def copy(self) -> Graph:
        g = Graph(prefixes=self.prefix_map)
        g.update(self.match())
        return g

    def union(self, other: Graph) -> Graph:
        g = self.copy()
        for prefix, ns in other.prefix_map.items():
            g.prefix_map.setdefault(prefix, ns)
        g.update(other.match())
        return g

    __or__ = union


def graph_equal(a: Graph, b: Graph) -> bool:
    """Set equality of the triples; prefixes are presentation and ignored."""
    if len(a) != len(b):
        return False
    return all(t in b for t in a.match())
