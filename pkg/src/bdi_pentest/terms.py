"""Prolog-style terms, literals and substitutions.

Terms are immutable dataclasses; unification is pure, performs the occurs
check, and returns a fresh idempotent substitution (or None on failure).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Number:
    value: int | float


@dataclass(frozen=True)
class StringLit:
    text: str


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound terms need at least one argument; use Atom")


Term = Variable | Atom | Number | StringLit | Compound

# A substitution maps variable names to terms.
Substitution = dict[str, Term]

POSITIVE = "positive"
NEGATED = "negated"

# Comparison functors rendered infix.
COMPARISON_OPS = ("==", "!=", "<=", ">=", "<", ">", "=", "\\=")


@dataclass(frozen=True)
class Literal:
    """A positive or negated atom/compound with an annotation set."""

    term: Term
    polarity: str = POSITIVE
    annotations: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.term, (Atom, Compound)):
            raise ValueError("a literal must wrap an atom or compound term")
        if self.polarity not in (POSITIVE, NEGATED):
            raise ValueError(f"bad polarity {self.polarity!r}")

    @property
    def functor(self) -> str:
        return self.term.name if isinstance(self.term, Atom) else self.term.functor

    @property
    def arity(self) -> int:
        return 0 if isinstance(self.term, Atom) else len(self.term.args)

    def plain(self) -> "Literal":
        """The same literal with annotations stripped."""
        return Literal(self.term, self.polarity)

    def with_annotations(self, annotations) -> "Literal":
        return Literal(self.term, self.polarity, frozenset(annotations))


def variables_of(t: Term) -> set[str]:
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, Compound):
        out: set[str] = set()
        for a in t.args:
            out |= variables_of(a)
        return out
    return set()


def is_ground(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    if isinstance(t, Compound):
        return all(is_ground(a) for a in t.args)
    return True


def literal_is_ground(l: Literal) -> bool:
    return is_ground(l.term)


def substitute(s: Substitution, t: Term) -> Term:
    """Apply a substitution; unbound variables pass through unchanged.

    Bindings are followed transitively, so triangular substitutions produced
    mid-unification resolve fully. Occurs-checked substitutions are acyclic,
    which guarantees termination.
    """
    if isinstance(t, Variable):
        bound = s.get(t.name)
        if bound is None:
            return t
        return substitute(s, bound)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(substitute(s, a) for a in t.args))
    return t


def substitute_literal(s: Substitution, l: Literal) -> Literal:
    return Literal(substitute(s, l.term), l.polarity, l.annotations)


def _walk(t: Term, s: Substitution) -> Term:
    while isinstance(t, Variable) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: Substitution) -> bool:
    t = _walk(t, s)
    if isinstance(t, Variable):
        return t.name == name
    if isinstance(t, Compound):
        return any(_occurs(name, a, s) for a in t.args)
    return False


def _unify(a: Term, b: Term, s: Substitution) -> bool:
    a = _walk(a, s)
    b = _walk(b, s)
    if isinstance(a, Variable):
        if isinstance(b, Variable) and a.name == b.name:
            return True
        if _occurs(a.name, b, s):
            return False
        s[a.name] = b
        return True
    if isinstance(b, Variable):
        return _unify(b, a, s)
    if isinstance(a, Atom) and isinstance(b, Atom):
        return a.name == b.name
    if isinstance(a, Number) and isinstance(b, Number):
        return a.value == b.value
    if isinstance(a, StringLit) and isinstance(b, StringLit):
        return a.text == b.text
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return False
        return all(_unify(x, y, s) for x, y in zip(a.args, b.args))
    return False


def unify(a: Term, b: Term, s: Substitution | None = None) -> Substitution | None:
    """Most general unifier of a and b extending s, or None on mismatch."""
    work: Substitution = dict(s) if s else {}
    if not _unify(a, b, work):
        return None
    # Flatten binding chains so the result is idempotent.
    return {name: substitute(work, t) for name, t in work.items()}


def unify_literals(a: Literal, b: Literal, s: Substitution | None = None) -> Substitution | None:
    """Unify two literals, matching polarity and ignoring annotations."""
    if a.polarity != b.polarity:
        return None
    return unify(a.term, b.term, s)


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")


def term_to_str(t: Term) -> str:
    if isinstance(t, (Variable, Atom)):
        return t.name
    if isinstance(t, Number):
        return repr(t.value)
    if isinstance(t, StringLit):
        return f'"{_escape(t.text)}"'
    if t.functor in COMPARISON_OPS and len(t.args) == 2:
        return f"{term_to_str(t.args[0])} {t.functor} {term_to_str(t.args[1])}"
    return f"{t.functor}({', '.join(term_to_str(a) for a in t.args)})"


def literal_to_str(l: Literal, annotations: bool = True) -> str:
    out = term_to_str(l.term)
    if l.polarity == NEGATED:
        out = "~" + out
    if annotations and l.annotations:
        inner = ", ".join(sorted(term_to_str(a) for a in l.annotations))
        out += f"[{inner}]"
    return out
