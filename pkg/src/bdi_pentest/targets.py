"""Simulated targets and scenario configuration.

A scenario is a YAML document:

    name: single_target
    seed: 1234
    max_cycles: 10000
    agent_program: single_target_agent.asl      # optional, path hint for the CLI
    thresholds:                          # optional, all in [0, 1]
      password: 0.8
      bof_remote: 0.5
      bof_local: 0.3
      sqli: 0.4
      sniffer: 0.6
    priorities:                          # optional plan-label/action overrides
      some_label: 30
    targets:
      - name: target
        os: linux
        ports: [80, 22, 3306]
        services:
          - {port: 80, name: nginx}
        vulnerabilities:
          - {id: cve_remote, kind: remote}   # kind: remote | local | sqli
        credentials:
          - {service: ssh, secret: "456"}
        subnet: lan0
        staff:
          - {email: admin@example.org, susceptibility: 0.15}

Probes are pure functions of the target spec; attack adjudication consumes
draws from a seeded stream (Python's Mersenne Twister, whose float stream
is stable across platforms and versions).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, asdict

import yaml

from .terms import Atom, Compound, Literal, Number, StringLit
from .beliefs import make_percept

VULN_KINDS = ("remote", "local", "sqli")

DEFAULT_SUSCEPTIBILITY = 0.15


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Service:
    port: int
    name: str


@dataclass(frozen=True)
class Vulnerability:
    id: str
    kind: str


@dataclass(frozen=True)
class Credential:
    service: str
    secret: str


@dataclass(frozen=True)
class Staff:
    email: str
    susceptibility: float = DEFAULT_SUSCEPTIBILITY


@dataclass(frozen=True)
class TargetSpec:
    name: str
    os: str
    ports: tuple[int, ...] = ()
    services: tuple[Service, ...] = ()
    vulnerabilities: tuple[Vulnerability, ...] = ()
    credentials: tuple[Credential, ...] = ()
    subnet: str = "lan"
    staff: tuple[Staff, ...] = ()

    def credential_for(self, service: str) -> Credential | None:
        for c in self.credentials:
            if c.service == service:
                return c
        return None

    def vulnerability_by_id(self, vuln_id: str) -> Vulnerability | None:
        for v in self.vulnerabilities:
            if v.id == vuln_id:
                return v
        return None

    def has_vulnerability_kind(self, kind: str) -> bool:
        return any(v.kind == kind for v in self.vulnerabilities)

    def service_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.services)


@dataclass(frozen=True)
class Thresholds:
    password: float = 0.8
    bof_remote: float = 0.5
    bof_local: float = 0.3
    sqli: float = 0.4
    sniffer: float = 0.6


@dataclass(frozen=True)
class Scenario:
    name: str
    targets: tuple[TargetSpec, ...]
    thresholds: Thresholds = Thresholds()
    agent_program: str | None = None
    priorities: dict = field(default_factory=dict)
    seed: int = 0
    max_cycles: int = 10_000

    def target(self, name: str) -> TargetSpec | None:
        for t in self.targets:
            if t.name == name:
                return t
        return None

    def subnet_peers(self, spec: TargetSpec) -> tuple[TargetSpec, ...]:
        return tuple(t for t in self.targets
                     if t.subnet == spec.subnet and t.name != spec.name)


class RunRng:
    """Deterministic uniform stream in [0, 1) with optional scripted prefix.

    Scripted draws are consumed first, in order; afterwards the stream falls
    back to the seeded generator. `consumed` counts every draw handed out.
    """

    def __init__(self, seed: int, scripted=()):
        self._rng = random.Random(seed)
        self._scripted = deque(scripted)
        self.consumed = 0

    def __call__(self) -> float:
        self.consumed += 1
        if self._scripted:
            return self._scripted.popleft()
        return self._rng.random()


# --- Config loading --------------------------------------------------------

def _require(mapping, key, path, type_=None, default=None, required=False):
    if not isinstance(mapping, dict):
        raise ConfigError(path, "expected a mapping")
    if key not in mapping:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    value = mapping[key]
    if type_ is not None and not isinstance(value, type_):
        raise ConfigError(f"{path}.{key}", f"expected {type_.__name__}, got {type(value).__name__}")
    return value


def _unit_interval(value, path):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0.0 <= value <= 1.0:
        raise ConfigError(path, f"must be a number in [0, 1], got {value!r}")
    return float(value)


def _load_target(raw, path) -> TargetSpec:
    name = _require(raw, "name", path, str, required=True)
    os_name = _require(raw, "os", path, str, required=True)
    ports = tuple(_require(raw, "ports", path, list, default=[]))
    for i, p in enumerate(ports):
        if not isinstance(p, int) or isinstance(p, bool) or not 0 < p < 65536:
            raise ConfigError(f"{path}.ports[{i}]", f"invalid port {p!r}")
    services = []
    for i, s in enumerate(_require(raw, "services", path, list, default=[])):
        spath = f"{path}.services[{i}]"
        port = _require(s, "port", spath, int, required=True)
        sname = _require(s, "name", spath, str, required=True)
        if port not in ports:
            raise ConfigError(f"{spath}.port", f"port {port} not in target ports")
        services.append(Service(port, sname))
    vulns = []
    seen_ids = set()
    for i, v in enumerate(_require(raw, "vulnerabilities", path, list, default=[])):
        vpath = f"{path}.vulnerabilities[{i}]"
        vid = _require(v, "id", vpath, str, required=True)
        kind = _require(v, "kind", vpath, str, required=True)
        if kind not in VULN_KINDS:
            raise ConfigError(f"{vpath}.kind", f"must be one of {VULN_KINDS}")
        if vid in seen_ids:
            raise ConfigError(f"{vpath}.id", f"duplicate vulnerability id {vid!r}")
        seen_ids.add(vid)
        vulns.append(Vulnerability(vid, kind))
    creds = []
    for i, c in enumerate(_require(raw, "credentials", path, list, default=[])):
        cpath = f"{path}.credentials[{i}]"
        creds.append(Credential(
            _require(c, "service", cpath, str, required=True),
            str(_require(c, "secret", cpath, required=True))))
    staff = []
    for i, s in enumerate(_require(raw, "staff", path, list, default=[])):
        spath = f"{path}.staff[{i}]"
        email = _require(s, "email", spath, str, required=True)
        susceptibility = _require(s, "susceptibility", spath, default=DEFAULT_SUSCEPTIBILITY)
        staff.append(Staff(email, _unit_interval(susceptibility, f"{spath}.susceptibility")))
    subnet = _require(raw, "subnet", path, str, default="lan")
    return TargetSpec(name, os_name, ports, tuple(services), tuple(vulns),
                      tuple(creds), subnet, tuple(staff))


def load_scenario(config_text: str) -> Scenario:
    """Parse and validate a scenario config; fill defaults for omissions."""
    try:
        raw = yaml.safe_load(config_text)
    except yaml.YAMLError as e:
        raise ConfigError("<root>", f"invalid YAML: {e}") from e
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected a mapping at top level")

    name = _require(raw, "name", "<root>", str, default="scenario")
    seed = _require(raw, "seed", "<root>", int, default=0)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("seed", "must be an unsigned 64-bit integer")
    max_cycles = _require(raw, "max_cycles", "<root>", int, default=10_000)
    if max_cycles < 1:
        raise ConfigError("max_cycles", "must be positive")
    agent_program = _require(raw, "agent_program", "<root>", str)

    th_raw = _require(raw, "thresholds", "<root>", dict, default={})
    th_kwargs = {}
    for key in th_raw:
        if key not in Thresholds.__dataclass_fields__:
            raise ConfigError(f"thresholds.{key}", "unknown threshold")
        th_kwargs[key] = _unit_interval(th_raw[key], f"thresholds.{key}")
    thresholds = Thresholds(**th_kwargs)

    priorities = dict(_require(raw, "priorities", "<root>", dict, default={}))
    for key, value in priorities.items():
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"priorities.{key}", "priority must be an integer")

    targets_raw = _require(raw, "targets", "<root>", list, default=[])
    if not targets_raw:
        raise ConfigError("targets", "at least one target is required")
    targets = []
    names = set()
    for i, t in enumerate(targets_raw):
        spec = _load_target(t, f"targets[{i}]")
        if spec.name in names:
            raise ConfigError(f"targets[{i}].name", f"duplicate target name {spec.name!r}")
        names.add(spec.name)
        targets.append(spec)

    return Scenario(name, tuple(targets), thresholds, agent_program,
                    priorities, seed, max_cycles)


def serialize_scenario(scenario: Scenario) -> str:
    """YAML text that load_scenario parses back to an equal Scenario."""
    doc = {
        "name": scenario.name,
        "seed": scenario.seed,
        "max_cycles": scenario.max_cycles,
        "thresholds": asdict(scenario.thresholds),
        "priorities": dict(scenario.priorities),
        "targets": [
            {
                "name": t.name,
                "os": t.os,
                "ports": list(t.ports),
                "services": [{"port": s.port, "name": s.name} for s in t.services],
                "vulnerabilities": [{"id": v.id, "kind": v.kind} for v in t.vulnerabilities],
                "credentials": [{"service": c.service, "secret": c.secret} for c in t.credentials],
                "subnet": t.subnet,
                "staff": [{"email": s.email, "susceptibility": s.susceptibility} for s in t.staff],
            }
            for t in scenario.targets
        ],
    }
    if scenario.agent_program is not None:
        doc["agent_program"] = scenario.agent_program
    return yaml.safe_dump(doc, sort_keys=False)


# --- Probes ----------------------------------------------------------------

PROBE_FACETS = ("os", "port", "service", "vulnerability", "email")


def handle_probe(spec: TargetSpec, facet: str) -> list[Literal]:
    """Deterministic percepts for one facet, tagged source(<target name>)."""
    if facet not in PROBE_FACETS:
        raise ValueError(f"unknown probe facet {facet!r}")
    literals: list[Literal] = []
    if facet == "os":
        literals.append(Literal(Compound("ostype", (Atom(spec.os),))))
    elif facet == "port":
        literals = [Literal(Compound("port", (Number(p),))) for p in spec.ports]
    elif facet == "service":
        literals = [Literal(Compound("service", (Atom(s.name),))) for s in spec.services]
    elif facet == "vulnerability":
        literals = [Literal(Compound("vulnerability", (Atom(v.id),)))
                    for v in spec.vulnerabilities]
    else:
        literals = [Literal(Compound("email", (StringLit(s.email),))) for s in spec.staff]
    return [make_percept(l, spec.name) for l in literals]
