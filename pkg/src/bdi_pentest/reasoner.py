"""The BDI reasoning cycle.

One pass per cycle: fold ambient percepts, check the goal, then either
advance the single active intention by one step or select the oldest
pending event and commit to a plan for it. Event selection is FIFO; an
intention runs to completion or failure before the next event's intention
starts, except while suspended on a subgoal.

Plan selection is by priority (label first, then the plan's first action
name, default 0) with ties broken by plan-library order. A failed plan is
excluded from reselection for its event, so failure recovery terminates
within |library| selections per event.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .beliefs import ADD, BeliefBase, BeliefEvent
from .parser import (
    ACHIEVE,
    Action,
    AchieveGoal,
    AddBelief,
    AgentProgram,
    And,
    BELIEF,
    Comparison,
    InternalPrint,
    LiteralCond,
    Not,
    Or,
    Plan,
    RemoveBelief,
    TestGoal,
    TriggerEvent,
    TrueConst,
)
from .terms import (
    Atom,
    Compound,
    Literal,
    NEGATED,
    Number,
    StringLit,
    Substitution,
    Term,
    is_ground,
    literal_to_str,
    substitute,
    substitute_literal,
    term_to_str,
    unify,
    unify_literals,
)


class NoInitialGoal(Exception):
    pass


# Priorities looked up by plan label first, then by the plan's first action
# name. Information gathering outranks every attack; buffer overflow is the
# preferred attack family.
DEFAULT_PRIORITIES = {
    "probe_os": 100,
    "probe_ports": 100,
    "probe_services": 100,
    "probe_vulnerabilities": 100,
    "probe_emails": 100,
    "bof_attack": 30,
    "sqli_attack": 20,
    "password_attack": 10,
    "sniffer_attack": 5,
    "social_attack": 1,
}

DEFAULT_CYCLE_CAP = 10_000

ACTIVE = "active"
SUSPENDED = "suspended"
DONE = "done"
FAILED = "failed"


class CycleResult(Enum):
    RUNNING = "running"
    GOAL_ACHIEVED = "goal-achieved"
    EXHAUSTED = "exhausted"


class StepOutcome(Enum):
    OK = "ok"
    STEP_FAILED = "step-failed"
    SUBGOAL_POSTED = "subgoal-posted"
    INTENTION_DONE = "intention-done"


@dataclass
class Event:
    trigger: TriggerEvent
    parent: "Intention | None" = None
    attempted: set[str] = field(default_factory=set)


@dataclass
class Frame:
    plan: Plan
    bindings: Substitution
    steps: list
    event: Event


@dataclass
class Intention:
    frames: list[Frame] = field(default_factory=list)
    status: str = ACTIVE


@dataclass
class AgentState:
    name: str
    beliefs: BeliefBase
    plan_library: tuple[Plan, ...]
    priority_table: dict
    goal: Literal
    events: deque = field(default_factory=deque)
    intentions: list[Intention] = field(default_factory=list)
    cycle_count: int = 0
    # (op, functor, arity) pairs for which the library has a belief trigger;
    # belief changes outside this set never become events.
    belief_trigger_index: frozenset = frozenset()


def init_agent(program: AgentProgram, priorities: dict | None = None,
               name: str = "bdi_agent") -> AgentState:
    if not program.goals:
        raise NoInitialGoal("the agent program declares no initial goal")
    goal = program.goals[0]
    if not is_ground(goal.term):
        raise NoInitialGoal(f"initial goal must be ground: {literal_to_str(goal)}")
    beliefs = BeliefBase()
    for b in program.beliefs:
        beliefs.add(_self_annotated(b))
    table = dict(DEFAULT_PRIORITIES)
    if priorities:
        table.update(priorities)
    index = frozenset(
        (p.trigger.op, p.trigger.literal.functor, p.trigger.literal.arity)
        for p in program.plans if p.trigger.kind == BELIEF)
    state = AgentState(name=name, beliefs=beliefs, plan_library=program.plans,
                       priority_table=table, goal=goal.plain(),
                       belief_trigger_index=index)
    for g in program.goals:
        state.events.append(Event(TriggerEvent("+", ACHIEVE, g.plain())))
    return state


def _self_annotated(l: Literal) -> Literal:
    from .beliefs import percept_source
    if percept_source(l) is not None:
        return l
    return l.with_annotations(set(l.annotations) | {Compound("source", (Atom("self"),))})


# --- Selection functions ---------------------------------------------------

def select_event(state: AgentState) -> Event | None:
    """FIFO: pop and return the oldest pending event."""
    if not state.events:
        return None
    return state.events.popleft()


def relevant_plans(library, event: TriggerEvent) -> list[tuple[Plan, Substitution]]:
    out = []
    for plan in library:
        if plan.trigger.op != event.op or plan.trigger.kind != event.kind:
            continue
        u = unify_literals(plan.trigger.literal.plain(), event.literal.plain())
        if u is not None:
            out.append((plan, u))
    return out


def applicable_plans(relevant, beliefs: BeliefBase) -> list[tuple[Plan, Substitution]]:
    """The desire set: relevant plans whose context holds, with bindings
    extended by context solutions (one desire per solution)."""
    out = []
    for plan, theta in relevant:
        for solution in solve(plan.context, beliefs, theta):
            out.append((plan, solution))
    return out


def plan_priority(plan: Plan, table: dict) -> int:
    if plan.label is not None and plan.label in table:
        return table[plan.label]
    for step in plan.body:
        if isinstance(step, Action):
            return table.get(step.name, plan.priority)
    return plan.priority


def select_intention(desires, table: dict, attempted) -> tuple[Plan, Substitution] | None:
    """Highest-priority desire not yet attempted; ties by library order."""
    best = None
    best_priority = None
    for plan, binding in desires:
        if plan.key in attempted:
            continue
        priority = plan_priority(plan, table)
        if best is None or priority > best_priority:
            best = (plan, binding)
            best_priority = priority
    return best


# --- Context solving -------------------------------------------------------

def solve(formula, beliefs: BeliefBase, theta: Substitution) -> list[Substitution]:
    """All substitutions extending theta under which the formula holds."""
    if isinstance(formula, TrueConst):
        return [theta]
    if isinstance(formula, LiteralCond):
        lit = substitute_literal(theta, formula.literal).plain()
        if lit.polarity == NEGATED:
            positive = Literal(lit.term)
            return [theta] if not beliefs.query(positive) else []
        return [dict(theta, **u) for u in beliefs.query(lit)]
    if isinstance(formula, And):
        return [s2 for s1 in solve(formula.left, beliefs, theta)
                for s2 in solve(formula.right, beliefs, s1)]
    if isinstance(formula, Or):
        return solve(formula.left, beliefs, theta) + solve(formula.right, beliefs, theta)
    if isinstance(formula, Not):
        return [theta] if not solve(formula.operand, beliefs, theta) else []
    if isinstance(formula, Comparison):
        return _compare(formula, theta)
    return []


def _compare(c: Comparison, theta: Substitution) -> list[Substitution]:
    lhs = substitute(theta, c.lhs)
    rhs = substitute(theta, c.rhs)
    if c.op == "=":
        u = unify(lhs, rhs, theta)
        return [u] if u is not None else []
    if c.op == "\\=":
        return [theta] if unify(lhs, rhs, theta) is None else []
    if c.op == "==":
        return [theta] if lhs == rhs else []
    if c.op == "!=":
        return [theta] if lhs != rhs else []
    key = _order_key(lhs), _order_key(rhs)
    if key[0] is None or key[1] is None or type(key[0]) is not type(key[1]):
        return []
    holds = {"<": key[0] < key[1], "<=": key[0] <= key[1],
             ">": key[0] > key[1], ">=": key[0] >= key[1]}[c.op]
    return [theta] if holds else []


def _order_key(t: Term):
    if isinstance(t, Number):
        return float(t.value)
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, StringLit):
        return t.text
    return None


# --- Execution -------------------------------------------------------------

def goal_achieved(state: AgentState) -> bool:
    return bool(state.beliefs.query(state.goal))


def _fold_belief_events(state: AgentState, events: list[BeliefEvent]):
    for ev in events:
        key = (ev.op, ev.literal.functor, ev.literal.arity)
        if key in state.belief_trigger_index:
            state.events.append(Event(TriggerEvent(ev.op, BELIEF, ev.literal)))


def _fold_percepts(state: AgentState, percepts):
    if percepts:
        _fold_belief_events(state, state.beliefs.update_from_percepts(percepts))


def execute_step(state: AgentState, env, intention: Intention) -> StepOutcome:
    """Run one step of the intention's top frame (popping finished frames)."""
    while intention.frames and not intention.frames[-1].steps:
        intention.frames.pop()
    if not intention.frames:
        intention.status = DONE
        return StepOutcome.INTENTION_DONE
    frame = intention.frames[-1]
    step = frame.steps.pop(0)

    if isinstance(step, InternalPrint):
        env.log("".join(_render(substitute(frame.bindings, a)) for a in step.args))
        return StepOutcome.OK

    if isinstance(step, Action):
        args = tuple(substitute(frame.bindings, a) for a in step.args)
        if not all(is_ground(a) for a in args):
            env.log(f"action {step.name} has unbound arguments")
            handle_failure(state, intention)
            return StepOutcome.STEP_FAILED
        success, percepts = env.execute(step.name, args)
        _fold_percepts(state, percepts)
        if not success:
            handle_failure(state, intention)
            return StepOutcome.STEP_FAILED
        return StepOutcome.OK

    if isinstance(step, AchieveGoal):
        lit = substitute_literal(frame.bindings, step.literal).plain()
        state.events.append(Event(TriggerEvent("+", ACHIEVE, lit), parent=intention))
        intention.status = SUSPENDED
        return StepOutcome.SUBGOAL_POSTED

    if isinstance(step, TestGoal):
        pattern = substitute_literal(frame.bindings, step.literal).plain()
        solutions = state.beliefs.query(pattern, frame.bindings)
        if not solutions:
            handle_failure(state, intention)
            return StepOutcome.STEP_FAILED
        frame.bindings = solutions[0]
        return StepOutcome.OK

    if isinstance(step, AddBelief):
        lit = substitute_literal(frame.bindings, step.literal)
        if not is_ground(lit.term):
            handle_failure(state, intention)
            return StepOutcome.STEP_FAILED
        _fold_belief_events(state, state.beliefs.add(_self_annotated(lit)))
        return StepOutcome.OK

    # RemoveBelief
    lit = substitute_literal(frame.bindings, step.literal)
    if not is_ground(lit.term):
        handle_failure(state, intention)
        return StepOutcome.STEP_FAILED
    _fold_belief_events(state, state.beliefs.remove(lit))
    return StepOutcome.OK


def _render(t: Term) -> str:
    if isinstance(t, StringLit):
        return t.text
    return term_to_str(t)


def handle_failure(state: AgentState, intention: Intention):
    """Discard the failed frame and re-post its event so plan selection
    retries with the remaining desires (the failed plan is excluded)."""
    frame = intention.frames.pop()
    event = frame.event
    event.attempted.add(frame.plan.key)
    event.parent = intention
    state.events.append(event)
    intention.status = SUSPENDED


def _fail_event(state: AgentState, env, event: Event):
    """No applicable plan remains for the event: record the failed goal and
    propagate the failure to the posting frame, if any."""
    if event.trigger.kind != BELIEF:
        env.log(f"no applicable plan for {literal_to_str(event.trigger.literal)}")
        marker = Literal(Compound("attack_failed", (event.trigger.literal.term,)))
        _fold_belief_events(state, state.beliefs.add(_self_annotated(marker)))
        intention = event.parent
        if intention is not None:
            if intention.frames:
                handle_failure(state, intention)
            else:
                intention.status = FAILED


def _process_event(state: AgentState, env, event: Event):
    relevant = relevant_plans(state.plan_library, event.trigger)
    desires = applicable_plans(relevant, state.beliefs)
    choice = select_intention(desires, state.priority_table, event.attempted)
    if choice is None:
        _fail_event(state, env, event)
        return
    plan, bindings = choice
    frame = Frame(plan, bindings, list(plan.body), event)
    intention = event.parent
    if intention is None:
        intention = Intention()
        state.intentions.append(intention)
        event.parent = intention
    intention.frames.append(frame)
    intention.status = ACTIVE
    execute_step(state, env, intention)


def _in_progress(state: AgentState) -> bool:
    return any(i.status in (ACTIVE, SUSPENDED) for i in state.intentions)


def reasoning_cycle(state: AgentState, env) -> CycleResult:
    """One pass of the cycle; see the module docstring for the policy."""
    state.cycle_count += 1
    _fold_percepts(state, env.perceive())

    if goal_achieved(state) and not _in_progress(state):
        return CycleResult.GOAL_ACHIEVED

    for intention in state.intentions:
        if intention.status == ACTIVE:
            execute_step(state, env, intention)
            return CycleResult.RUNNING

    event = select_event(state)
    if event is None:
        return (CycleResult.GOAL_ACHIEVED if goal_achieved(state)
                else CycleResult.EXHAUSTED)
    _process_event(state, env, event)
    return CycleResult.RUNNING


class NullEnvironment:
    """Environment with no percepts and no actions; for tests and dry runs."""

    def __init__(self):
        self.trace: list[str] = []

    def perceive(self):
        return []

    def execute(self, name, args):
        return False, []

    def log(self, message: str):
        self.trace.append(message)
