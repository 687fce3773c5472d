"""The agent's belief base.

Stores ground literals indexed by (functor, arity, polarity). Annotations
never affect literal identity: re-adding a known literal merges annotation
sets and emits no event. Queries answer by unification in insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Atom,
    Compound,
    Literal,
    Substitution,
    Term,
    literal_is_ground,
    literal_to_str,
    unify,
)


class NonGroundBelief(Exception):
    pass


ADD = "+"
DEL = "-"


@dataclass(frozen=True)
class BeliefEvent:
    op: str  # '+' or '-'
    literal: Literal


def make_percept(literal: Literal, source: str) -> Literal:
    """Tag a literal with a single source annotation, replacing any present."""
    anns = {a for a in literal.annotations if not _is_source(a)}
    anns.add(Compound("source", (Atom(source),)))
    return literal.with_annotations(anns)


def _is_source(t: Term) -> bool:
    return isinstance(t, Compound) and t.functor == "source" and len(t.args) == 1


def percept_source(literal: Literal) -> str | None:
    for a in literal.annotations:
        if _is_source(a):
            return a.args[0].name if isinstance(a.args[0], Atom) else str(a.args[0])
    return None


class BeliefBase:
    """Mutable belief store; mutators return the events they caused."""

    def __init__(self, literals=()):
        # (functor, arity, polarity) -> {plain literal -> annotation set}
        self._index: dict[tuple[str, int, str], dict[Literal, frozenset]] = {}
        self._size = 0
        for l in literals:
            self.add(l)

    def __len__(self) -> int:
        return self._size

    def __iter__(self):
        for bucket in self._index.values():
            for plain, anns in bucket.items():
                yield plain.with_annotations(anns)

    def __contains__(self, literal: Literal) -> bool:
        bucket = self._index.get(self._key(literal), {})
        return literal.plain() in bucket

    @staticmethod
    def _key(l: Literal) -> tuple[str, int, str]:
        return (l.functor, l.arity, l.polarity)

    def copy(self) -> "BeliefBase":
        out = BeliefBase()
        out._index = {k: dict(v) for k, v in self._index.items()}
        out._size = self._size
        return out

    def add(self, literal: Literal) -> list[BeliefEvent]:
        if not literal_is_ground(literal):
            raise NonGroundBelief(literal_to_str(literal))
        bucket = self._index.setdefault(self._key(literal), {})
        plain = literal.plain()
        if plain in bucket:
            bucket[plain] = bucket[plain] | literal.annotations
            return []
        bucket[plain] = literal.annotations
        self._size += 1
        return [BeliefEvent(ADD, plain)]

    def remove(self, literal: Literal) -> list[BeliefEvent]:
        """Remove a ground literal, matching by identity (annotations ignored)."""
        if not literal_is_ground(literal):
            raise NonGroundBelief(literal_to_str(literal))
        bucket = self._index.get(self._key(literal))
        plain = literal.plain()
        if bucket is None or plain not in bucket:
            return []
        del bucket[plain]
        self._size -= 1
        return [BeliefEvent(DEL, plain)]

    def query(self, pattern: Literal, s: Substitution | None = None) -> list[Substitution]:
        """One substitution per stored literal unifying with the pattern."""
        bucket = self._index.get(self._key(pattern), {})
        out = []
        for stored in bucket:
            u = unify(pattern.term, stored.term, s)
            if u is not None:
                out.append(u)
        return out

    def update_from_percepts(self, percepts) -> list[BeliefEvent]:
        """Fold a percept batch in with set-union semantics (never deletes)."""
        events = []
        for p in percepts:
            events.extend(self.add(p))
        return events

    def dump_lines(self) -> list[str]:
        """Annotated literal lines, sorted lexicographically."""
        return sorted(literal_to_str(l) for l in self)
