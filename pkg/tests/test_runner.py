from bdi_pentest.runner import (
    CYCLE_CAP,
    EXHAUSTED,
    GOAL_ACHIEVED,
    emit_report,
    parse_report,
    run_batch,
    run_scenario,
)

FAILED_DRAW = 0.13183533644420975


def test_single_target_run_reaches_root(single_target_scenario, single_target_program):
    report, trace = run_scenario(single_target_scenario, single_target_program,
                                 draws=(FAILED_DRAW, 0.6))
    assert report.result == GOAL_ACHIEVED
    assert report.final_privilege == "root"
    attacks = [(s.action, tuple(s.args), s.outcome) for s in report.steps
               if s.draw is not None]
    assert attacks == [
        ("password_attack", ("ssh",), "failure"),
        ("bof_attack", ("cve_remote", "remote"), "success"),
    ]
    assert any("remote buffer overflow attack is successful" in line
               for line in trace)


def test_privilege_escalation_path(single_target_scenario, single_target_program):
    report, _ = run_scenario(single_target_scenario, single_target_program,
                             draws=(0.9, 0.35, 0.7))
    path = []
    for s in report.steps:
        if not path or path[-1] != s.privilege_after:
            path.append(s.privilege_after)
    assert path == ["none", "user", "root"]
    modes = [s.args[1] for s in report.steps if s.action == "bof_attack"]
    outcomes = [s.outcome for s in report.steps if s.action == "bof_attack"]
    assert modes == ["local", "remote"] and outcomes == ["success", "success"]


def test_hardened_target_exhausts(hardened_scenario, single_target_program):
    report, trace = run_scenario(hardened_scenario, single_target_program)
    assert report.result == EXHAUSTED
    assert report.final_privilege == "none"
    # No chance-based attempt is possible, so no draw is ever consumed.
    assert all(s.draw is None for s in report.steps)


def test_cycle_cap_result(single_target_scenario, single_target_program):
    report, trace = run_scenario(single_target_scenario, single_target_program,
                                 draws=(0.9,), max_cycles=3)
    assert report.result == CYCLE_CAP
    assert trace[-1].endswith("cycle cap of 3 reached")


def test_trace_rate_lines_match_report_draws(single_target_scenario, single_target_program):
    report, trace = run_scenario(single_target_scenario, single_target_program, seed=99)
    rate_lines = [l for l in trace if "The rate of" in l]
    drawn_steps = [s for s in report.steps if s.draw is not None]
    assert len(rate_lines) == len(drawn_steps)
    for line, step in zip(rate_lines, drawn_steps):
        assert line.endswith(repr(step.draw))


def test_same_seed_gives_identical_runs(single_target_scenario, single_target_program):
    a = run_scenario(single_target_scenario, single_target_program, seed=7)
    b = run_scenario(single_target_scenario, single_target_program, seed=7)
    assert a[1] == b[1]
    assert emit_report(a[0], "machine") == emit_report(b[0], "machine")


def test_human_report_phrasing(single_target_scenario, single_target_program):
    report, _ = run_scenario(single_target_scenario, single_target_program,
                             draws=(FAILED_DRAW, 0.6))
    text = emit_report(report, "human")
    assert "result: goal-achieved" in text
    assert "final privilege: root" in text
    assert "password attack on ssh is failed" in text
    assert "remote buffer overflow attack is successful" in text


def test_machine_report_round_trips(single_target_scenario, single_target_program):
    report, _ = run_scenario(single_target_scenario, single_target_program, seed=3)
    assert parse_report(emit_report(report, "machine")) == report


def test_run_batch_matches_individual_runs(single_target_scenario, single_target_program):
    seeds = range(20)
    batch = run_batch(single_target_scenario, single_target_program, seeds)
    singles = [run_scenario(single_target_scenario, single_target_program, seed=s)[0].result
               for s in seeds]
    assert batch == singles
    assert set(batch) <= {GOAL_ACHIEVED, EXHAUSTED}
