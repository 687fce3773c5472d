import random

import pytest

from bdi_pentest.targets import (
    ConfigError,
    Credential,
    RunRng,
    Scenario,
    Service,
    Staff,
    TargetSpec,
    Thresholds,
    Vulnerability,
    handle_probe,
    load_scenario,
    serialize_scenario,
)
from bdi_pentest.terms import literal_to_str

SINGLE_TARGET_YAML = """
name: single_target
seed: 20260823
targets:
  - name: target
    os: linux
    ports: [80, 22, 3306]
    services:
      - {port: 80, name: nginx}
      - {port: 22, name: ssh}
      - {port: 3306, name: mysql}
    vulnerabilities:
      - {id: cve_remote, kind: remote}
      - {id: cve_local, kind: local}
    credentials:
      - {service: ssh, secret: "456"}
    subnet: lan0
"""


def test_load_full_scenario():
    scenario = load_scenario(SINGLE_TARGET_YAML)
    assert scenario.name == "single_target"
    assert scenario.seed == 20260823
    assert scenario.max_cycles == 10_000
    assert scenario.thresholds == Thresholds()
    spec = scenario.target("target")
    assert spec.os == "linux"
    assert spec.ports == (80, 22, 3306)
    assert spec.service_names() == ("nginx", "ssh", "mysql")
    assert spec.vulnerability_by_id("cve_local") == Vulnerability("cve_local", "local")
    assert spec.credential_for("ssh") == Credential("ssh", "456")
    assert spec.credential_for("mysql") is None
    assert scenario.target("nope") is None


def test_defaults_fill_in():
    scenario = load_scenario("targets:\n  - {name: t, os: linux}\n")
    assert scenario.name == "scenario"
    assert scenario.seed == 0
    spec = scenario.targets[0]
    assert spec.ports == () and spec.subnet == "lan" and spec.staff == ()


def test_threshold_overrides():
    scenario = load_scenario(
        "thresholds: {password: 0.5}\ntargets:\n  - {name: t, os: linux}\n")
    assert scenario.thresholds.password == 0.5
    assert scenario.thresholds.bof_remote == 0.5


@pytest.mark.parametrize("text,path_fragment", [
    ("targets: []", "targets"),
    ("{}", "targets"),
    ("targets:\n  - {os: linux}", "targets[0].name"),
    ("targets:\n  - {name: t}", "targets[0].os"),
    ("targets:\n  - {name: t, os: linux, ports: [0]}", "ports[0]"),
    ("targets:\n  - {name: t, os: linux, ports: [99999]}", "ports[0]"),
    ("targets:\n  - name: t\n    os: linux\n    services: [{port: 22, name: ssh}]",
     "services[0].port"),
    ("targets:\n  - name: t\n    os: linux\n    vulnerabilities: [{id: v, kind: warp}]",
     "vulnerabilities[0].kind"),
    ("targets:\n  - name: t\n    os: linux\n    vulnerabilities:\n"
     "      - {id: v, kind: remote}\n      - {id: v, kind: local}",
     "vulnerabilities[1].id"),
    ("targets:\n  - {name: t, os: linux}\n  - {name: t, os: linux}",
     "targets[1].name"),
    ("thresholds: {password: 1.5}\ntargets:\n  - {name: t, os: linux}",
     "thresholds.password"),
    ("thresholds: {teleport: 0.5}\ntargets:\n  - {name: t, os: linux}",
     "thresholds.teleport"),
    ("seed: -1\ntargets:\n  - {name: t, os: linux}", "seed"),
    ("max_cycles: 0\ntargets:\n  - {name: t, os: linux}", "max_cycles"),
    ("priorities: {p: high}\ntargets:\n  - {name: t, os: linux}", "priorities.p"),
    ("targets:\n  - name: t\n    os: linux\n    staff: [{email: a@b, susceptibility: 2}]",
     "staff[0].susceptibility"),
    ("- not a mapping", "<root>"),
    ("targets: [\n", "<root>"),
])
def test_config_errors_carry_field_path(text, path_fragment):
    with pytest.raises(ConfigError) as e:
        load_scenario(text)
    assert path_fragment in e.value.path


def test_serialize_round_trip(single_target_scenario):
    assert load_scenario(serialize_scenario(single_target_scenario)) == single_target_scenario
    rich = Scenario(
        "rich",
        (TargetSpec("a", "linux", (80,), (Service(80, "apache"),),
                    (Vulnerability("v1", "sqli"),), (Credential("ssh", "x"),),
                    "dmz", (Staff("a@b.org", 0.2),)),
         TargetSpec("b", "windows")),
        Thresholds(password=0.9),
        agent_program="agent.asl",
        priorities={"mission": 5},
        seed=7,
        max_cycles=50,
    )
    assert load_scenario(serialize_scenario(rich)) == rich


def test_subnet_peers(single_target_scenario):
    spec = single_target_scenario.targets[0]
    assert single_target_scenario.subnet_peers(spec) == ()
    two = Scenario("s", (TargetSpec("a", "linux", subnet="lan0"),
                         TargetSpec("b", "linux", subnet="lan0"),
                         TargetSpec("c", "linux", subnet="lan1")))
    assert [t.name for t in two.subnet_peers(two.targets[0])] == ["b"]


class TestHandleProbe:
    SPEC = TargetSpec("target", "linux", (80, 22),
                      (Service(80, "nginx"), Service(22, "ssh")),
                      (Vulnerability("cve_remote", "remote"),),
                      staff=(Staff("ops@example.org"),))

    def probe(self, facet):
        return [literal_to_str(l) for l in handle_probe(self.SPEC, facet)]

    def test_each_facet(self):
        assert self.probe("os") == ["ostype(linux)[source(target)]"]
        assert self.probe("port") == ["port(80)[source(target)]",
                                      "port(22)[source(target)]"]
        assert self.probe("service") == ["service(nginx)[source(target)]",
                                         "service(ssh)[source(target)]"]
        assert self.probe("vulnerability") == ["vulnerability(cve_remote)[source(target)]"]
        assert self.probe("email") == ['email("ops@example.org")[source(target)]']

    def test_unknown_facet(self):
        with pytest.raises(ValueError):
            handle_probe(self.SPEC, "mood")

    def test_probe_is_pure(self):
        assert handle_probe(self.SPEC, "port") == handle_probe(self.SPEC, "port")


class TestRunRng:
    def test_matches_seeded_mersenne_twister(self):
        rng = RunRng(1234)
        ref = random.Random(1234)
        assert [rng() for _ in range(5)] == [ref.random() for _ in range(5)]
        assert rng.consumed == 5

    def test_scripted_prefix_then_seeded_tail(self):
        rng = RunRng(1234, (0.25, 0.75))
        ref = random.Random(1234)
        assert rng() == 0.25
        assert rng() == 0.75
        assert rng() == ref.random()
        assert rng.consumed == 3
