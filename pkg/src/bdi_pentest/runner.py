"""Scenario execution: wire the reasoner to the target simulator, collect
the console-style trace and the machine-readable report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import actions
from .actions import (
    ATTACK_ACTIONS,
    ActionError,
    CATALOG,
    PROBE_ACTIONS,
    Privilege,
    privilege_transition,
    resolve_attack,
)
from .beliefs import make_percept
from .parser import AgentProgram
from .reasoner import (
    AgentState,
    CycleResult,
    init_agent,
    reasoning_cycle,
)
from .targets import RunRng, Scenario, TargetSpec, handle_probe
from .terms import Atom, Literal, Term, term_to_str

GOAL_ACHIEVED = "goal-achieved"
EXHAUSTED = "exhausted"
CYCLE_CAP = "cycle-cap"


@dataclass(frozen=True)
class ReportStep:
    cycle: int
    action: str
    target: str
    args: tuple[str, ...]
    outcome: str  # success | failure
    draw: float | None
    privilege_after: str


@dataclass
class Report:
    scenario: str
    seed: int
    steps: list[ReportStep] = field(default_factory=list)
    final_privilege: str = "none"
    result: str = EXHAUSTED
    final_beliefs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "result": self.result,
            "final_privilege": self.final_privilege,
            "steps": [
                {
                    "cycle": s.cycle,
                    "action": s.action,
                    "target": s.target,
                    "args": list(s.args),
                    "outcome": s.outcome,
                    "draw": s.draw,
                    "privilege_after": s.privilege_after,
                }
                for s in self.steps
            ],
            "final_beliefs": list(self.final_beliefs),
        }


def _probe_trace_lines(spec: TargetSpec, facet: str) -> list[str]:
    if facet == "os":
        return [f"target system is :{spec.os}"]
    if facet == "port":
        return [f"The target port are :{p}" for p in spec.ports]
    if facet == "service":
        return [f"The target service is :{s.name}" for s in spec.services]
    if facet == "vulnerability":
        return [f"The target {v.kind} vulnerability is :{v.id}"
                for v in spec.vulnerabilities]
    return [f"The target staff email is :{s.email}" for s in spec.staff]


def _attack_phrase(action: str, args: tuple[str, ...]) -> str:
    if action == "password_attack":
        return f"password attack on {args[0]}"
    if action == "bof_attack":
        return f"{args[1]} buffer overflow attack"
    if action == "sqli_attack":
        return "sql injection attack"
    if action == "sniffer_attack":
        return f"sniffer attack via {args[0]}"
    return "social engineering attack"


def _rate_phrase(action: str, args: tuple[str, ...]) -> str:
    if action == "password_attack":
        return f"{args[0]} password attack"
    return _attack_phrase(action, args)


def _arg_str(t: Term) -> str:
    if isinstance(t, Atom):
        return t.name
    return term_to_str(t)


class RunContext:
    """Environment handle for one run: target state, RNG, trace and report
    step log. Confined to a single reasoning loop."""

    def __init__(self, scenario: Scenario, rng: RunRng, agent_name: str = "bdi_agent"):
        self.scenario = scenario
        self.rng = rng
        self.agent_name = agent_name
        self.privilege = {t.name: Privilege.NONE for t in scenario.targets}
        self.trace: list[str] = []
        self.steps: list[ReportStep] = []
        self.cycle = 0
        self.report_requested = False

    def log(self, message: str):
        self.trace.append(f"[{self.agent_name}] {message}")

    def perceive(self):
        return []

    def _record(self, action, target, args, success, draw):
        self.steps.append(ReportStep(
            self.cycle, action, target, tuple(_arg_str(a) for a in args),
            "success" if success else "failure", draw,
            str(self.privilege.get(target, Privilege.NONE))))

    def execute(self, name: str, args: tuple[Term, ...]):
        if name not in CATALOG:
            self.log(f"unknown action: {name}/{len(args)}")
            return False, []
        if len(args) != CATALOG[name]:
            self.log(f"action {name} expects {CATALOG[name]} arguments, got {len(args)}")
            return False, []
        if name == "report":
            self.report_requested = True
            self._record("report", self.scenario.targets[0].name, (), True, None)
            return True, []

        target = _arg_str(args[0])
        spec = self.scenario.target(target)
        if spec is None:
            self.log(f"unknown target: {target}")
            return False, []

        if name in PROBE_ACTIONS:
            facet = PROBE_ACTIONS[name]
            percepts = handle_probe(spec, facet)
            for line in _probe_trace_lines(spec, facet):
                self.log(line)
            self._record(name, target, args[1:], True, None)
            return True, percepts

        # Attack actions.
        rest = tuple(_arg_str(a) for a in args[1:])
        try:
            outcome = resolve_attack(self.scenario, spec, name, rest,
                                     self.privilege[target], self.rng,
                                     self.scenario.thresholds)
        except ActionError as e:
            self.log(f"{_attack_phrase(name, rest)} not possible: {e}")
            return False, []
        if outcome.draw is not None:
            self.log(f"The rate of {_rate_phrase(name, rest)} is {outcome.draw!r}")
        if outcome.success:
            self.privilege[target] = privilege_transition(self.privilege[target], outcome)
        else:
            self.log(f"{_attack_phrase(name, rest)} is failed")
        self._record(name, target, args[1:], outcome.success, outcome.draw)
        percepts = [make_percept(l, target) for l in outcome.evidence]
        return outcome.success, percepts


def run_scenario(scenario: Scenario, program: AgentProgram,
                 seed: int | None = None, draws=(),
                 max_cycles: int | None = None,
                 agent_name: str = "bdi_agent") -> tuple[Report, list[str]]:
    """Run the reasoning loop to termination; returns (report, trace)."""
    effective_seed = scenario.seed if seed is None else seed
    cap = scenario.max_cycles if max_cycles is None else max_cycles
    rng = RunRng(effective_seed, draws)
    env = RunContext(scenario, rng, agent_name)
    state = init_agent(program, scenario.priorities, name=agent_name)

    result = CYCLE_CAP
    while state.cycle_count < cap:
        env.cycle = state.cycle_count + 1
        outcome = reasoning_cycle(state, env)
        if outcome is CycleResult.GOAL_ACHIEVED:
            result = GOAL_ACHIEVED
            break
        if outcome is CycleResult.EXHAUSTED:
            result = EXHAUSTED
            break
    if result == CYCLE_CAP:
        env.log(f"cycle cap of {cap} reached")

    primary = scenario.targets[0].name
    report = Report(
        scenario=scenario.name,
        seed=effective_seed,
        steps=env.steps,
        final_privilege=str(env.privilege[primary]),
        result=result,
        final_beliefs=state.beliefs.dump_lines(),
    )
    return report, env.trace


# --- Report serialization --------------------------------------------------

def emit_report(report: Report, format: str = "human") -> str:
    if format == "machine":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if format != "human":
        raise ValueError(f"unknown report format {format!r}")
    lines = [
        f"scenario: {report.scenario}",
        f"seed: {report.seed}",
        f"result: {report.result}",
        f"final privilege: {report.final_privilege}",
        "steps:",
    ]
    for s in report.steps:
        if s.action in ATTACK_ACTIONS:
            phrase = _attack_phrase(s.action, s.args)
            verdict = "successful" if s.outcome == "success" else "failed"
            detail = f"draw {s.draw!r}, " if s.draw is not None else ""
            lines.append(f"  cycle {s.cycle}: {phrase} is {verdict} "
                         f"({detail}privilege {s.privilege_after})")
        else:
            shown = s.action if not s.args else f"{s.action}({', '.join(s.args)})"
            lines.append(f"  cycle {s.cycle}: {shown} on {s.target} -> {s.outcome} "
                         f"(privilege {s.privilege_after})")
    lines.append("beliefs:")
    lines.extend(f"  {b}" for b in report.final_beliefs)
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    """Inverse of emit_report(report, "machine")."""
    doc = json.loads(text)
    return Report(
        scenario=doc["scenario"],
        seed=doc["seed"],
        steps=[ReportStep(s["cycle"], s["action"], s["target"], tuple(s["args"]),
                          s["outcome"], s["draw"], s["privilege_after"])
               for s in doc["steps"]],
        final_privilege=doc["final_privilege"],
        result=doc["result"],
        final_beliefs=list(doc["final_beliefs"]),
    )


# --- Batch mode ------------------------------------------------------------

_WORKER_SCENARIO: Scenario | None = None
_WORKER_PROGRAM: AgentProgram | None = None


def _init_worker(scenario: Scenario, program: AgentProgram):
    global _WORKER_SCENARIO, _WORKER_PROGRAM
    _WORKER_SCENARIO = scenario
    _WORKER_PROGRAM = program


def _run_seed(seed: int) -> str:
    report, _ = run_scenario(_WORKER_SCENARIO, _WORKER_PROGRAM, seed=seed)
    return report.result


def run_batch(scenario: Scenario, program: AgentProgram, seeds,
              workers: int = 1) -> list[str]:
    """Run one independent scenario per seed; returns the result strings.

    Workers share nothing but the immutable scenario and program.
    """
    seeds = list(seeds)
    if workers <= 1:
        _init_worker(scenario, program)
        return [_run_seed(s) for s in seeds]
    import multiprocessing as mp
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    with ctx.Pool(workers, initializer=_init_worker,
                  initargs=(scenario, program)) as pool:
        return pool.map(_run_seed, seeds, chunksize=max(1, len(seeds) // (workers * 8)))
