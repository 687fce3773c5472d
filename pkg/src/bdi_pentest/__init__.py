"""BDI agent engine with a simulated penetration-testing environment."""

from .beliefs import BeliefBase, BeliefEvent, NonGroundBelief, make_percept
from .parser import (
    AgentProgram,
    DuplicateLabelError,
    Plan,
    PlanSyntaxError,
    TriggerEvent,
    parse_program,
    program_to_str,
)
from .reasoner import (
    AgentState,
    CycleResult,
    NoInitialGoal,
    init_agent,
    reasoning_cycle,
)
from .runner import Report, emit_report, parse_report, run_batch, run_scenario
from .targets import (
    ConfigError,
    RunRng,
    Scenario,
    TargetSpec,
    Thresholds,
    load_scenario,
    serialize_scenario,
)
from .terms import (
    Atom,
    Compound,
    Literal,
    Number,
    StringLit,
    Term,
    Variable,
    substitute,
    unify,
)
from .actions import AttackOutcome, Privilege

__all__ = [name for name in dir() if not name.startswith("_")]
