"""The ``plan`` command line: run trials, aggregate, snapshot and certify."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

from .bench import aggregate, certify, read_records, run_trials, trial_params, write_records
from .estimators import PLANNERS, make_planner
from .problem import ProblemError
from .records import SOLVED
from .svg import UnsupportedDimensionError, emit_svg_snapshot
from .validation import check_problem


def parse_value(text: str):
    """JSON scalar if it parses, ``inf``/``-inf`` as floats, otherwise the raw string."""
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_params(items: Optional[List[str]]) -> dict:
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise argparse.ArgumentTypeError(f"--param expects key=value, got {item!r}")
        params[key.replace("-", "_")] = parse_value(value)
    return params


def parse_times(text: str) -> List[float]:
    try:
        times = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--at-times expects comma-separated numbers, got {text!r}") from None
    if not times or any(not t >= 0 for t in times):
        raise argparse.ArgumentTypeError("--at-times needs at least one non-negative time")
    return sorted(times)


def _planner_list(text: str) -> List[str]:
    names = [p.strip() for p in text.split(",") if p.strip()]
    for p in names:
        if p not in PLANNERS:
            raise argparse.ArgumentTypeError(f"unknown planner {p!r}; choose from {', '.join(sorted(PLANNERS))}")
    return names


def cmd_run(args) -> int:
    problem = check_problem(args.problem)
    params = parse_params(args.param)
    params["clock"] = args.clock
    if args.target_cost is not None:
        params["target_cost"] = args.target_cost
    records = run_trials(problem, args.planner, args.trials, args.budget, args.seed,
                         params={p: params for p in args.planner}, threads=args.threads)
    write_records(records, args.out)
    for planner in args.planner:
        mine = [r for r in records if r.planner == planner]
        solved = sum(r.status == SOLVED for r in mine)
        print(f"{problem.name} {planner}: {solved}/{len(mine)} solved")
    failed = [r for r in records if r.diagnostic and r.stop_reason == "error"]
    for r in failed:
        print(f"seed {r.seed} {r.planner} failed: {r.diagnostic}", file=sys.stderr)
    return 0


def cmd_aggregate(args) -> int:
    records = read_records(args.inp)
    if not records:
        print(f"no trial files in {args.inp}", file=sys.stderr)
        return 1
    stats = aggregate(records, confidence=args.confidence, grid_points=args.grid_points)
    stats.write_csv(args.out)
    for p in stats.planners:
        print(f"{p.problem} {p.planner}: n={p.n} final success {p.success_rate[-1]:.2f} "
              f"median cost {p.median_cost[-1]:.6g} median initial time {p.median_initial_time:.6g}")
    return 0


def cmd_snapshot(args) -> int:
    problem = check_problem(args.problem)
    params = trial_params(problem, args.planner, parse_params(args.param))
    params.setdefault("clock", "virtual")
    search = make_planner(args.planner, budget=max(args.at_times), seed=args.seed, **params).make_search(problem)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for t in args.at_times:
        search.advance(t)
        path = out / f"{problem.name}__{args.planner}__seed{args.seed:06d}__t{t:g}.svg"
        emit_svg_snapshot(search, path)
        print(path)
    return 0


def cmd_certify(args) -> int:
    records = read_records(args.inp)
    if not records:
        print(f"no trial files in {args.inp}", file=sys.stderr)
        return 1
    failures = certify(records)
    for f in failures:
        print(f"FAIL {f}")
    n_events = sum(len(r.events) for r in records)
    print(f"certified {len(records)} records, {n_events} solutions, {len(failures)} failures")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plan", description="AIT*, EIT* and RRT* benchmark harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded trials and write one JSON-lines file per trial")
    run.add_argument("--problem", required=True, help="problem JSON file or shipped problem name")
    run.add_argument("--planner", required=True, type=_planner_list, help="ait, eit or rrtstar (comma-separated)")
    run.add_argument("--trials", type=int, default=50)
    run.add_argument("--budget", type=float, default=10.0, help="seconds of the chosen clock")
    run.add_argument("--seed", type=int, default=0, help="trial i uses seed + i")
    run.add_argument("--out", required=True)
    run.add_argument("--clock", choices=("virtual", "wall"), default="virtual")
    run.add_argument("--target-cost", type=float, default=None)
    run.add_argument("--threads", type=int, default=None, help="defaults to PLAN_THREADS, else 1")
    run.add_argument("--param", action="append", metavar="KEY=VALUE", help="planner parameter (repeatable)")
    run.set_defaults(func=cmd_run)

    agg = sub.add_parser("aggregate", help="summarize trial files into a long-format CSV")
    agg.add_argument("--in", dest="inp", required=True)
    agg.add_argument("--out", required=True)
    agg.add_argument("--confidence", type=float, default=0.99)
    agg.add_argument("--grid-points", type=int, default=100)
    agg.set_defaults(func=cmd_aggregate)

    snap = sub.add_parser("snapshot", help="write SVG snapshots of one run at given times")
    snap.add_argument("--problem", required=True)
    snap.add_argument("--planner", required=True, choices=sorted(PLANNERS))
    snap.add_argument("--at-times", required=True, type=parse_times, help="comma-separated clock times")
    snap.add_argument("--seed", type=int, default=0)
    snap.add_argument("--out", required=True)
    snap.add_argument("--param", action="append", metavar="KEY=VALUE")
    snap.set_defaults(func=cmd_snapshot)

    cert = sub.add_parser("certify", help="re-validate every reported solution")
    cert.add_argument("--in", dest="inp", required=True)
    cert.set_defaults(func=cmd_certify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProblemError, UnsupportedDimensionError, ValueError, TypeError) as exc:
        print(f"plan {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
