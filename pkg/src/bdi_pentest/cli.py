"""Command-line entry point.

Exit codes: 0 goal achieved, 1 exhausted or cycle cap, 2 config/parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .parser import PlanSyntaxError, parse_program
from .runner import GOAL_ACHIEVED, emit_report, run_batch, run_scenario
from .targets import ConfigError, load_scenario


def build_arg_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bdi-pentest",
        description="Run a BDI attacker agent against a simulated target scenario.")
    p.add_argument("--scenario", required=True, help="scenario config file (YAML)")
    p.add_argument("--agent", required=True, help="agent program file (plan DSL)")
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--max-cycles", type=int, default=None, help="override the cycle cap")
    p.add_argument("--report", default=None, help="write the report to this path")
    p.add_argument("--trace", default=None, help="write the trace to this path")
    p.add_argument("--format", choices=("human", "machine"), default="human",
                   help="report format (default: human)")
    p.add_argument("--draws", default=None,
                   help="comma-separated scripted draws consumed before the RNG")
    p.add_argument("--repeat", type=int, default=None, metavar="N",
                   help="run N consecutive seeds and print summary statistics")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel workers for --repeat (default: 1)")
    return p


def _parse_draws(text: str) -> list[float]:
    draws = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        value = float(piece)
        if not 0.0 <= value < 1.0:
            raise ValueError(f"draw {value!r} outside [0, 1)")
        draws.append(value)
    return draws


def main(argv=None) -> int:
    arg_parser = build_arg_parser()
    args = arg_parser.parse_args(argv)

    try:
        scenario = load_scenario(Path(args.scenario).read_text())
        program = parse_program(Path(args.agent).read_text())
        draws = _parse_draws(args.draws) if args.draws else []
    except (ConfigError, PlanSyntaxError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.repeat is not None:
        base = scenario.seed if args.seed is None else args.seed
        results = run_batch(scenario, program, range(base, base + args.repeat),
                            workers=args.workers)
        achieved = sum(r == GOAL_ACHIEVED for r in results)
        print(f"goal-achieved {achieved}/{len(results)} "
              f"({achieved / len(results):.4f})")
        return 0

    report, trace = run_scenario(scenario, program, seed=args.seed,
                                 draws=draws, max_cycles=args.max_cycles)
    for line in trace:
        print(line)
    if args.trace:
        Path(args.trace).write_text("\n".join(trace) + "\n")
    rendered = emit_report(report, args.format)
    if args.report:
        Path(args.report).write_text(rendered)
    else:
        print(rendered, end="")
    return 0 if report.result == GOAL_ACHIEVED else 1


if __name__ == "__main__":
    raise SystemExit(main())
