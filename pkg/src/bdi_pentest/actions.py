"""The simulated action catalog: probes and the five attack families.

An attack succeeds iff its uniform draw u satisfies u >= threshold, so a
threshold of 0.8 means a one-in-five success rate. Impossible attacks (no matching vulnerability or
credential in the target spec) short-circuit to failure without consuming
a draw. Every chance-based attempt consumes exactly one draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .terms import Atom, Compound, Literal, StringLit
from .targets import Scenario, TargetSpec, Thresholds, handle_probe


class ActionError(Exception):
    """An action whose preconditions do not hold; treated as a failed step."""


class UnknownAction(ActionError):
    pass


class UnknownTarget(ActionError):
    pass


class PreconditionUnmet(ActionError):
    pass


class NoSubnetPeer(ActionError):
    pass


class NoStaffKnown(ActionError):
    pass


class Privilege(IntEnum):
    NONE = 0
    WEB = 1
    USER = 2
    ROOT = 3

    def __str__(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, name: str) -> "Privilege":
        return cls[name.upper()]


LOGIN_SERVICES = ("ssh", "ftp", "telnet", "mysql")
WEB_SERVICES = ("apache", "nginx")

# Action name -> arity; the contract between the plan DSL and the catalog.
CATALOG = {
    "probe_os": 1,
    "probe_ports": 1,
    "probe_services": 1,
    "probe_vulnerabilities": 1,
    "probe_emails": 1,
    "bof_attack": 3,
    "sqli_attack": 1,
    "password_attack": 2,
    "sniffer_attack": 2,
    "social_attack": 1,
    "report": 0,
}

PROBE_ACTIONS = {
    "probe_os": "os",
    "probe_ports": "port",
    "probe_services": "service",
    "probe_vulnerabilities": "vulnerability",
    "probe_emails": "email",
}

ATTACK_ACTIONS = ("bof_attack", "sqli_attack", "password_attack",
                  "sniffer_attack", "social_attack")


@dataclass(frozen=True)
class AttackOutcome:
    action: str
    success: bool
    privilege_granted: Privilege | None = None
    draw: float | None = None
    evidence: tuple[Literal, ...] = ()

    def __post_init__(self):
        if not self.success:
            assert self.privilege_granted is None


def _lit(functor: str, *args) -> Literal:
    if not args:
        return Literal(Atom(functor))
    return Literal(Compound(functor, tuple(args)))


def info_gather(scenario: Scenario, target: str, facet: str) -> list[Literal]:
    """All facts of one facet from the target spec; deterministic."""
    spec = scenario.target(target)
    if spec is None:
        raise UnknownTarget(target)
    return handle_probe(spec, facet)


def password_attack(spec: TargetSpec, service: str, draw, thresholds: Thresholds) -> AttackOutcome:
    if service not in LOGIN_SERVICES or service not in spec.service_names():
        raise PreconditionUnmet(f"no remotely loggable service {service!r} on {spec.name}")
    credential = spec.credential_for(service)
    if credential is None:
        return AttackOutcome("password_attack", False,
                             evidence=(_lit("password_attack_failed"),))
    u = draw()
    if u >= thresholds.password:
        return AttackOutcome(
            "password_attack", True, Privilege.USER, u,
            (_lit("credential", Atom(service), StringLit(credential.secret)),))
    return AttackOutcome("password_attack", False, None, u,
                         (_lit("password_attack_failed"),))


def buffer_overflow_attack(spec: TargetSpec, vuln: str, mode: str,
                           privilege: Privilege, draw,
                           thresholds: Thresholds) -> AttackOutcome:
    if mode not in ("remote", "local"):
        raise PreconditionUnmet(f"bad buffer overflow mode {mode!r}")
    if mode == "local" and privilege < Privilege.USER:
        raise PreconditionUnmet("local buffer overflow requires user privilege")
    known = spec.vulnerability_by_id(vuln)
    if known is not None and known.kind != mode:
        raise PreconditionUnmet(
            f"vulnerability {vuln!r} is {known.kind}, not {mode}")
    if known is None:
        return AttackOutcome("bof_attack", False,
                             evidence=(_lit("bof_attack_failed"),))
    u = draw()
    threshold = thresholds.bof_remote if mode == "remote" else thresholds.bof_local
    if u >= threshold:
        return AttackOutcome("bof_attack", True, Privilege.ROOT, u,
                             (_lit("attacked", StringLit(vuln)),))
    return AttackOutcome("bof_attack", False, None, u, (_lit("bof_attack_failed"),))


def sql_injection_attack(spec: TargetSpec, draw, thresholds: Thresholds) -> AttackOutcome:
    has_web = 80 in spec.ports and any(s in WEB_SERVICES for s in spec.service_names())
    if not has_web:
        raise PreconditionUnmet(f"no web service on port 80 of {spec.name}")
    sqli = next((v for v in spec.vulnerabilities if v.kind == "sqli"), None)
    if sqli is None:
        return AttackOutcome("sqli_attack", False,
                             evidence=(_lit("sqli_attack_failed"),))
    u = draw()
    if u >= thresholds.sqli:
        return AttackOutcome("sqli_attack", True, Privilege.WEB, u,
                             (_lit("attacked", StringLit(sqli.id)),))
    return AttackOutcome("sqli_attack", False, None, u, (_lit("sqli_attack_failed"),))


def _compromisable(spec: TargetSpec) -> bool:
    # The weakest route into a pivot host: a remotely reachable vulnerability
    # or any credential to capture or replay.
    return (spec.has_vulnerability_kind("remote")
            or spec.has_vulnerability_kind("sqli")
            or bool(spec.credentials))


def sniffer_attack(spec: TargetSpec, peer: TargetSpec | None, draw,
                   thresholds: Thresholds) -> AttackOutcome:
    if peer is None:
        raise NoSubnetPeer(f"{spec.name} has no subnet peers")
    if peer.subnet != spec.subnet:
        raise PreconditionUnmet(f"{peer.name} is not on {spec.name}'s subnet")
    if not _compromisable(peer):
        return AttackOutcome("sniffer_attack", False,
                             evidence=(_lit("sniffer_attack_failed"),))
    u = draw()
    if u >= thresholds.sniffer:
        evidence = tuple(_lit("credential", Atom(c.service), StringLit(c.secret))
                         for c in spec.credentials)
        return AttackOutcome("sniffer_attack", True, Privilege.USER, u, evidence)
    return AttackOutcome("sniffer_attack", False, None, u,
                         (_lit("sniffer_attack_failed"),))


def social_engineering_attack(spec: TargetSpec, draw) -> AttackOutcome:
    if not spec.staff:
        raise NoStaffKnown(f"no staff known for {spec.name}")
    susceptibility = max(s.susceptibility for s in spec.staff)
    u = draw()
    if u >= 1.0 - susceptibility:
        return AttackOutcome("social_attack", True, Privilege.USER, u,
                             (_lit("phished", StringLit(
                                 max(spec.staff, key=lambda s: s.susceptibility).email)),))
    return AttackOutcome("social_attack", False, None, u,
                         (_lit("social_attack_failed"),))


def privilege_transition(current: Privilege, outcome: AttackOutcome) -> Privilege:
    """Monotone: max of current and granted; failures change nothing."""
    if outcome.success and outcome.privilege_granted is not None:
        return max(current, outcome.privilege_granted)
    return current


def resolve_attack(scenario: Scenario, spec: TargetSpec, action: str,
                   args: tuple[str, ...], privilege: Privilege, draw,
                   thresholds: Thresholds) -> AttackOutcome:
    """Adjudicate one attack request against a target spec.

    `args` are the action arguments after the target name, already rendered
    to plain strings.
    """
    if action == "password_attack":
        return password_attack(spec, args[0], draw, thresholds)
    if action == "bof_attack":
        return buffer_overflow_attack(spec, args[0], args[1], privilege, draw, thresholds)
    if action == "sqli_attack":
        return sql_injection_attack(spec, draw, thresholds)
    if action == "sniffer_attack":
        peers = scenario.subnet_peers(spec)
        if not peers:
            raise NoSubnetPeer(f"{spec.name} has no subnet peers")
        peer = scenario.target(args[0])
        if peer is None:
            raise UnknownTarget(args[0])
        return sniffer_attack(spec, peer, draw, thresholds)
    if action == "social_attack":
        return social_engineering_attack(spec, draw)
    raise UnknownAction(action)
