"""Lexer, parser and pretty-printer for the agent plan DSL.

Grammar (statements end with `.`; `//` starts a line comment):

    program    := statement*
    statement  := belief | goal | plan
    belief     := literal '.'                       -- must be ground
    goal       := '!' literal '.'
    plan       := ['@' atom] trigger [':' context] ['<-' body] '.'
    trigger    := ('+' | '-') ['!' | '?'] literal
    context    := or_formula
    or_formula := and_formula ('|' and_formula)*
    and_formula:= unary ('&' unary)*
    unary      := 'not' unary | '(' or_formula ')' | 'true'
                | term cmp term | literal
    cmp        := '=' | '\\=' | '==' | '!=' | '<' | '<=' | '>' | '>='
    body       := step (';' step)*
    step       := '!' literal | '?' literal | '+' literal | '-' literal
                | '.print' '(' terms ')' | atom ['(' terms ')'] | 'true'
    literal    := ['~'] (atom | compound) ['[' terms ']']
    term       := variable | atom | number | string | dotted-quad | compound
                | term cmp term                      -- inside argument lists

Atoms start lowercase, variables uppercase or `_`. Dotted-quad tokens such
as `192.168.0.10` lex as string literals. `.print` is the only internal
action. Lowercase body atoms are environment actions; `!g` is a subgoal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (
    Atom,
    Compound,
    Literal,
    NEGATED,
    Number,
    StringLit,
    Term,
    Variable,
    is_ground,
    literal_to_str,
    term_to_str,
    variables_of,
)


class PlanSyntaxError(Exception):
    """Syntax or validation error with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class DuplicateLabelError(PlanSyntaxError):
    pass


# --- AST -------------------------------------------------------------------

BELIEF = "belief"
ACHIEVE = "achieve"
TEST = "test"

_TRIGGER_MARKS = {"": BELIEF, "!": ACHIEVE, "?": TEST}
_KIND_MARKS = {v: k for k, v in _TRIGGER_MARKS.items()}


@dataclass(frozen=True)
class TriggerEvent:
    op: str  # '+' or '-'
    kind: str  # belief | achieve | test
    literal: Literal


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class LiteralCond:
    literal: Literal


@dataclass(frozen=True)
class And:
    left: "ContextFormula"
    right: "ContextFormula"


@dataclass(frozen=True)
class Or:
    left: "ContextFormula"
    right: "ContextFormula"


@dataclass(frozen=True)
class Not:
    operand: "ContextFormula"


@dataclass(frozen=True)
class Comparison:
    lhs: Term
    op: str
    rhs: Term


ContextFormula = TrueConst | LiteralCond | And | Or | Not | Comparison


@dataclass(frozen=True)
class Action:
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class AchieveGoal:
    literal: Literal


@dataclass(frozen=True)
class TestGoal:
    literal: Literal

    __test__ = False  # not a test class despite the name


@dataclass(frozen=True)
class AddBelief:
    literal: Literal


@dataclass(frozen=True)
class RemoveBelief:
    literal: Literal


@dataclass(frozen=True)
class InternalPrint:
    args: tuple[Term, ...]


PlanStep = Action | AchieveGoal | TestGoal | AddBelief | RemoveBelief | InternalPrint


@dataclass(frozen=True)
class Plan:
    trigger: TriggerEvent
    context: ContextFormula
    body: tuple[PlanStep, ...]
    label: str | None = None
    key: str = ""  # label, or a synthetic unique id assigned by the parser
    priority: int = 0


@dataclass(frozen=True)
class AgentProgram:
    beliefs: tuple[Literal, ...] = ()
    goals: tuple[Literal, ...] = ()
    plans: tuple[Plan, ...] = ()


# --- Lexer -----------------------------------------------------------------

_SYMBOLS = ["<-", "<=", ">=", "==", "!=", "\\=", "@", "!", "?", "+", "-", ":",
            ";", ",", "(", ")", "[", "]", "&", "|", "<", ">", "=", "~"]

_KEYWORDS = {"true": "TRUE", "not": "NOT"}

COMPARISONS = ("=", "\\=", "<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    line: int
    col: int


class _Lexer:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str):
        raise PlanSyntaxError(message, self.line, self.col)

    def _advance(self, n: int):
        for ch in self.src[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def tokens(self) -> list[Token]:
        out = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.type == "EOF":
                return out

    def _next(self) -> Token:
        src = self.src
        while self.pos < len(src):
            ch = src[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "/" and src.startswith("//", self.pos):
                end = src.find("\n", self.pos)
                self._advance((end if end != -1 else len(src)) - self.pos)
            else:
                break
        line, col = self.line, self.col
        if self.pos >= len(src):
            return Token("EOF", "", line, col)
        ch = src[self.pos]
        if ch == ".":
            nxt = src[self.pos + 1] if self.pos + 1 < len(src) else ""
            if nxt.isalpha() and nxt.islower():
                self._advance(1)
                name = self._ident()
                return Token("INTERNAL", name, line, col)
            self._advance(1)
            return Token("DOT", ".", line, col)
        if ch == '"':
            return Token("STRING", self._string(), line, col)
        if ch.isdigit():
            return self._number(line, col)
        if ch.isalpha() or ch == "_":
            name = self._ident()
            if name in _KEYWORDS:
                return Token(_KEYWORDS[name], name, line, col)
            if name[0].isupper() or name[0] == "_":
                return Token("VAR", name, line, col)
            return Token("ATOM", name, line, col)
        for sym in _SYMBOLS:
            if src.startswith(sym, self.pos):
                self._advance(len(sym))
                return Token(sym, sym, line, col)
        self.error(f"unexpected character {ch!r}")

    def _ident(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum() or self.src[self.pos] == "_"):
            self._advance(1)
        return self.src[start:self.pos]

    def _string(self) -> str:
        self._advance(1)
        out = []
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch == '"':
                self._advance(1)
                return "".join(out)
            if ch == "\\":
                self._advance(1)
                if self.pos >= len(self.src):
                    break
                esc = self.src[self.pos]
                out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(esc, esc))
                self._advance(1)
            else:
                out.append(ch)
                self._advance(1)
        self.error("unterminated string literal")

    def _digits(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self._advance(1)
        return self.src[start:self.pos]

    def _peek_digit_after_dot(self) -> bool:
        return (self.src.startswith(".", self.pos)
                and self.pos + 1 < len(self.src)
                and self.src[self.pos + 1].isdigit())

    def _number(self, line: int, col: int) -> Token:
        text = self._digits()
        if self._peek_digit_after_dot():
            self._advance(1)
            text += "." + self._digits()
            if self._peek_digit_after_dot():
                # Dotted quad, e.g. 192.168.0.10: lexes as a string literal.
                while self._peek_digit_after_dot():
                    self._advance(1)
                    text += "." + self._digits()
                return Token("STRING", text, line, col)
        if self.pos < len(self.src) and self.src[self.pos] in "eE":
            save = self.pos
            self._advance(1)
            exp = "e"
            if self.pos < len(self.src) and self.src[self.pos] in "+-":
                exp += self.src[self.pos]
                self._advance(1)
            digits = self._digits()
            if digits:
                text += exp + digits
            else:  # not an exponent after all
                self.pos = save
        return Token("NUMBER", text, line, col)


# --- Parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.toks = _Lexer(source).tokens()
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, expected: str):
        tok = self.cur
        shown = tok.value or "end of input"
        raise PlanSyntaxError(f"expected {expected}, found {shown!r}", tok.line, tok.col)

    def accept(self, type_: str) -> Token | None:
        if self.cur.type == type_:
            tok = self.cur
            self.i += 1
            return tok
        return None

    def expect(self, type_: str, expected: str | None = None) -> Token:
        tok = self.accept(type_)
        if tok is None:
            self.error(expected or repr(type_))
        return tok

    # Statements

    def program(self) -> AgentProgram:
        beliefs: list[Literal] = []
        goals: list[Literal] = []
        plans: list[Plan] = []
        labels: set[str] = set()
        while self.cur.type != "EOF":
            tok = self.cur
            if tok.type in ("@", "+", "-"):
                plan = self.plan(index=len(plans))
                if plan.label is not None:
                    if plan.label in labels:
                        raise DuplicateLabelError(
                            f"duplicate plan label @{plan.label}", tok.line, tok.col)
                    labels.add(plan.label)
                plans.append(plan)
            elif tok.type == "!":
                self.i += 1
                goals.append(self.literal())
                self.expect("DOT", "'.' after goal")
            else:
                lit = self.literal()
                if not is_ground(lit.term):
                    raise PlanSyntaxError("initial beliefs must be ground", tok.line, tok.col)
                beliefs.append(lit)
                self.expect("DOT", "'.' after belief")
        return AgentProgram(tuple(beliefs), tuple(goals), tuple(plans))

    def plan(self, index: int) -> Plan:
        start = self.cur
        label = None
        if self.accept("@"):
            label = self.expect("ATOM", "plan label").value
        trigger = self.trigger()
        context: ContextFormula = TrueConst()
        if self.accept(":"):
            context = self.or_formula()
        body: tuple[PlanStep, ...] = ()
        if self.accept("<-"):
            body = self.body()
        self.expect("DOT", "'.' at end of plan")
        plan = Plan(trigger, context, body, label=label,
                    key=label if label is not None else f"plan_{index}")
        self._check_plan_variables(plan, start)
        return plan

    def _check_plan_variables(self, plan: Plan, tok: Token):
        bound = variables_of(plan.trigger.literal.term)
        bound |= _formula_variables(plan.context)
        for step in plan.body:
            used = _step_variables(step)
            free = used - bound
            if free and not isinstance(step, (TestGoal, InternalPrint)):
                name = sorted(free)[0]
                raise PlanSyntaxError(
                    f"variable {name} is not bound by the trigger, context or "
                    "an earlier body step", tok.line, tok.col)
            bound |= used  # test goals (and prints of bound-later vars) bind

    def trigger(self) -> TriggerEvent:
        op = self.cur.type
        if op not in ("+", "-"):
            self.error("'+' or '-' trigger")
        self.i += 1
        kind = BELIEF
        if self.accept("!"):
            kind = ACHIEVE
        elif self.accept("?"):
            kind = TEST
        return TriggerEvent(op, kind, self.literal())

    # Context formulas

    def or_formula(self) -> ContextFormula:
        node = self.and_formula()
        while self.accept("|"):
            node = Or(node, self.and_formula())
        return node

    def and_formula(self) -> ContextFormula:
        node = self.unary_formula()
        while self.accept("&"):
            node = And(node, self.unary_formula())
        return node

    def unary_formula(self) -> ContextFormula:
        if self.accept("NOT"):
            return Not(self.unary_formula())
        if self.accept("("):
            node = self.or_formula()
            self.expect(")", "')'")
            return node
        if self.accept("TRUE"):
            return TrueConst()
        if self.cur.type == "~":
            return LiteralCond(self.literal())
        # A comparison between arbitrary terms, or a plain literal.
        term = self.term(infix=False)
        if self.cur.type in COMPARISONS:
            op = self.cur.type
            self.i += 1
            return Comparison(term, op, self.term(infix=False))
        if not isinstance(term, (Atom, Compound)):
            self.error("a literal or comparison")
        annotations = self.annotations()
        return LiteralCond(Literal(term, annotations=annotations))

    # Plan bodies

    def body(self) -> tuple[PlanStep, ...]:
        steps: list[PlanStep] = []
        step = self.step()
        if step is not None:
            steps.append(step)
        while self.accept(";"):
            step = self.step()
            if step is not None:
                steps.append(step)
        return tuple(steps)

    def step(self) -> PlanStep | None:
        if self.accept("TRUE"):
            return None  # `true` is an empty step
        if self.accept("!"):
            return AchieveGoal(self.literal())
        if self.accept("?"):
            return TestGoal(self.literal())
        if self.accept("+"):
            return AddBelief(self.literal())
        if self.accept("-"):
            return RemoveBelief(self.literal())
        if self.cur.type == "INTERNAL":
            tok = self.cur
            self.i += 1
            if tok.value != "print":
                raise PlanSyntaxError(f"unknown internal action .{tok.value}", tok.line, tok.col)
            self.expect("(", "'('")
            args = self.term_list()
            self.expect(")", "')'")
            return InternalPrint(tuple(args))
        if self.cur.type == "ATOM":
            name = self.cur.value
            self.i += 1
            args: tuple[Term, ...] = ()
            if self.accept("("):
                args = tuple(self.term_list())
                self.expect(")", "')'")
            return Action(name, args)
        self.error("a plan body step")

    # Literals and terms

    def literal(self) -> Literal:
        polarity = NEGATED if self.accept("~") else "positive"
        term = self.term(infix=False)
        if not isinstance(term, (Atom, Compound)):
            tok = self.cur
            raise PlanSyntaxError("a literal must be an atom or compound term",
                                  tok.line, tok.col)
        annotations = self.annotations()
        if polarity == NEGATED:
            return Literal(term, NEGATED, annotations)
        return Literal(term, annotations=annotations)

    def annotations(self) -> frozenset:
        if self.cur.type != "[":
            return frozenset()
        self.i += 1
        anns = self.term_list()
        self.expect("]", "']'")
        return frozenset(anns)

    def term_list(self) -> list[Term]:
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        return out

    def term(self, infix: bool = True) -> Term:
        node = self.primary_term()
        if infix and self.cur.type in COMPARISONS:
            op = self.cur.type
            self.i += 1
            node = Compound(op, (node, self.primary_term()))
        return node

    def primary_term(self) -> Term:
        tok = self.cur
        if self.accept("VAR"):
            return Variable(tok.value)
        if self.accept("STRING"):
            return StringLit(tok.value)
        if self.accept("NUMBER"):
            return _number(tok.value)
        if self.accept("-"):
            num = self.expect("NUMBER", "a number after unary '-'")
            return _number("-" + num.value)
        if self.accept("ATOM"):
            if self.accept("("):
                args = tuple(self.term_list())
                self.expect(")", "')'")
                return Compound(tok.value, args)
            return Atom(tok.value)
        self.error("a term")


def _number(text: str) -> Number:
    if "." in text or "e" in text or "E" in text:
        return Number(float(text))
    return Number(int(text))


def _formula_variables(f: ContextFormula) -> set[str]:
    if isinstance(f, LiteralCond):
        return variables_of(f.literal.term)
    if isinstance(f, (And, Or)):
        return _formula_variables(f.left) | _formula_variables(f.right)
    if isinstance(f, Not):
        return _formula_variables(f.operand)
    if isinstance(f, Comparison):
        return variables_of(f.lhs) | variables_of(f.rhs)
    return set()


def _step_variables(step: PlanStep) -> set[str]:
    if isinstance(step, Action):
        out: set[str] = set()
        for a in step.args:
            out |= variables_of(a)
        return out
    if isinstance(step, InternalPrint):
        out = set()
        for a in step.args:
            out |= variables_of(a)
        return out
    return variables_of(step.literal.term)


def parse_program(source: str) -> AgentProgram:
    """Parse DSL source into an agent program (beliefs, goals, plans)."""
    return _Parser(source).program()


# --- Pretty-printer --------------------------------------------------------

def trigger_to_str(t: TriggerEvent) -> str:
    return f"{t.op}{_KIND_MARKS[t.kind]}{literal_to_str(t.literal)}"


def _formula_str(f: ContextFormula, parent: str = "") -> str:
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, LiteralCond):
        return literal_to_str(f.literal)
    if isinstance(f, Comparison):
        return f"{term_to_str(f.lhs)} {f.op} {term_to_str(f.rhs)}"
    if isinstance(f, Not):
        inner = _formula_str(f.operand)
        if isinstance(f.operand, (And, Or)):
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(f, And):
        left = _formula_str(f.left)
        if isinstance(f.left, Or):
            left = f"({left})"
        right = _formula_str(f.right)
        if isinstance(f.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    left = _formula_str(f.left)
    right = _formula_str(f.right)
    if isinstance(f.right, Or):
        right = f"({right})"
    return f"{left} | {right}"


def context_to_str(f: ContextFormula) -> str:
    return _formula_str(f)


def step_to_str(s: PlanStep) -> str:
    if isinstance(s, Action):
        if not s.args:
            return s.name
        return f"{s.name}({', '.join(term_to_str(a) for a in s.args)})"
    if isinstance(s, AchieveGoal):
        return "!" + literal_to_str(s.literal)
    if isinstance(s, TestGoal):
        return "?" + literal_to_str(s.literal)
    if isinstance(s, AddBelief):
        return "+" + literal_to_str(s.literal)
    if isinstance(s, RemoveBelief):
        return "-" + literal_to_str(s.literal)
    return f".print({', '.join(term_to_str(a) for a in s.args)})"


def plan_to_str(p: Plan) -> str:
    out = ""
    if p.label is not None:
        out += f"@{p.label}\n"
    out += trigger_to_str(p.trigger)
    if not isinstance(p.context, TrueConst) or p.body:
        out += f" : {context_to_str(p.context)}"
    if p.body:
        steps = ";\n   ".join(step_to_str(s) for s in p.body)
        out += f"\n<- {steps}"
    return out + "."


def program_to_str(p: AgentProgram) -> str:
    parts = [literal_to_str(b) + "." for b in p.beliefs]
    parts += ["!" + literal_to_str(g) + "." for g in p.goals]
    parts += [plan_to_str(plan) for plan in p.plans]
    return "\n\n".join(parts) + ("\n" if parts else "")
