#!/usr/bin/env python3
"""Reproduce the two headline single-run simulations.

Simulation 1 scripts a failing password draw followed by a winning remote
overflow draw; simulation 2 scripts three winning draws so the agent walks
the full none -> user -> root escalation. Both print the agent trace and
the human-readable report.
"""

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from bdi_pentest import load_scenario, parse_program  # noqa: E402
from bdi_pentest.runner import emit_report, run_scenario  # noqa: E402

SIMULATIONS = [
    ("simulation 1: password fails, remote overflow roots the box",
     (0.13183533644420975, 0.6)),
    ("simulation 2: password, local overflow, then remote overflow all land",
     (0.9, 0.35, 0.7)),
]


def main() -> int:
    scenario = load_scenario((REPO / "scenarios" / "single_target.yaml").read_text())
    program = parse_program((REPO / "scenarios" / "single_target_agent.asl").read_text())
    for title, draws in SIMULATIONS:
        print(f"=== {title} ===")
        report, trace = run_scenario(scenario, program, draws=draws)
        print("\n".join(trace))
        print()
        print(emit_report(report, "human"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
