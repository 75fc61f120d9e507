"""Trial runner, aggregation of run records and solution certification."""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import binom

from .estimators import PLANNERS, make_planner
from .problem import ProblemDefinition, problem_from_dict
from .records import FAILED, RunRecord

THREADS_ENV = "PLAN_THREADS"


# -- running ----------------------------------------------------------------------------


def trial_params(problem: ProblemDefinition, planner: str, params: Optional[dict] = None) -> dict:
    """Problem-file overrides for ``planner`` updated by explicit ``params``."""
    merged = dict(problem.planner_overrides.get(planner, {}))
    merged.update(params or {})
    return merged


def run_trial(problem: ProblemDefinition, planner: str, seed: int, budget: float,
              params: Optional[dict] = None) -> RunRecord:
    """One trial; planner errors become a failed record carrying the diagnostic."""
    kwargs = trial_params(problem, planner, params)
    try:
        return make_planner(planner, budget=budget, seed=seed, **kwargs).fit(problem).record_
    except (ValueError, TypeError, RuntimeError, ArithmeticError) as exc:
        return RunRecord(planner=planner, problem=problem.name, seed=seed, status=FAILED, stop_reason="error",
                         budget=budget, params=kwargs, diagnostic=f"{type(exc).__name__}: {exc}",
                         problem_def=problem.to_dict())


def _run_trial_job(args) -> RunRecord:
    problem_dict, planner, seed, budget, params = args
    return run_trial(problem_from_dict(problem_dict), planner, seed, budget, params)


def thread_count(default: int = 1) -> int:
    value = os.environ.get(THREADS_ENV)
    if not value:
        return default
    try:
        n = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {value!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    return n


def run_trials(problem: ProblemDefinition, planners: Sequence[str], n_trials: int, budget: float,
               base_seed: int = 0, params: Optional[Dict[str, dict]] = None,
               threads: Optional[int] = None) -> List[RunRecord]:
    """Trial ``i`` of every planner uses seed ``base_seed + i``.

    Records come back ordered by planner, then trial index, whatever the
    degree of parallelism (``threads``, default from ``PLAN_THREADS``).
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    for p in planners:
        if p not in PLANNERS:
            raise ValueError(f"unknown planner {p!r}; expected one of {sorted(PLANNERS)}")
    params = params or {}
    jobs = [(problem.to_dict(), p, base_seed + i, budget, params.get(p)) for p in planners for i in range(n_trials)]
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(jobs) == 1:
        return [_run_trial_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
        return list(pool.map(_run_trial_job, jobs))


def trial_filename(record: RunRecord) -> str:
    return f"{record.problem}__{record.planner}__seed{record.seed:06d}.jsonl"


def write_records(records: Iterable[RunRecord], out_dir) -> List[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for r in records:
        path = out / trial_filename(r)
        path.write_text(r.to_jsonl())
        paths.append(path)
    return paths


def read_records(in_dir) -> List[RunRecord]:
    files = sorted(Path(in_dir).glob("*.jsonl"))
    return [RunRecord.read(f) for f in files]


# -- aggregation -------------------------------------------------------------------------


def median_ci_ranks(n: int, confidence: float = 0.99) -> Tuple[int, int]:
    """1-based ranks (l, u) of a distribution-free confidence interval for the median.

    l is the largest rank with P(B <= l) <= alpha / 2 for B ~ Binomial(n, 1/2),
    and u = n + 1 - l. Returns (1, n) when n is too small for the requested
    confidence.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    alpha = 1.0 - confidence
    cdf = binom.cdf(np.arange(n + 1), n, 0.5)
    ok = np.flatnonzero(cdf <= alpha / 2 + 1e-15)
    l = int(ok[-1]) if ok.size else 0
    l = max(l, 1)
    return l, n + 1 - l


def lower_median(values: Sequence[float]) -> float:
    s = sorted(values)
    return s[(len(s) - 1) // 2]


def log_time_grid(budget: float, points: int = 100, start_fraction: float = 1e-3) -> List[float]:
    return [float(t) for t in np.geomspace(budget * start_fraction, budget, points)]


@dataclass
class PlannerStats:
    problem: str
    planner: str
    n: int
    times: List[float]
    success_rate: List[float]
    median_cost: List[float]
    ci_lower: List[float]
    ci_upper: List[float]
    median_initial_time: float
    median_initial_cost: float
    initial_time_ci: Tuple[float, float]
    initial_cost_ci: Tuple[float, float]


@dataclass
class AggregateStats:
    confidence: float
    planners: List[PlannerStats] = field(default_factory=list)

    def get(self, problem: str, planner: str) -> PlannerStats:
        for p in self.planners:
            if p.problem == problem and p.planner == planner:
                return p
        raise KeyError((problem, planner))

    def rows(self) -> List[Tuple[str, str, str, str, str]]:
        fmt = lambda v: repr(float(v))
        out = []
        for p in self.planners:
            for name, series in (("success_rate", p.success_rate), ("median_cost", p.median_cost),
                                 ("ci_lower", p.ci_lower), ("ci_upper", p.ci_upper)):
                for t, v in zip(p.times, series):
                    out.append((p.problem, p.planner, name, fmt(t), fmt(v)))
            for name, v in (("median_initial_time", p.median_initial_time),
                            ("median_initial_cost", p.median_initial_cost),
                            ("initial_time_ci_lower", p.initial_time_ci[0]),
                            ("initial_time_ci_upper", p.initial_time_ci[1]),
                            ("initial_cost_ci_lower", p.initial_cost_ci[0]),
                            ("initial_cost_ci_upper", p.initial_cost_ci[1]),
                            ("trials", p.n)):
                out.append((p.problem, p.planner, name, "", fmt(v)))
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["problem", "planner", "quantity", "time", "value"])
            w.writerows(self.rows())


def _ci(values: Sequence[float], confidence: float) -> Tuple[float, float]:
    s = sorted(values)
    l, u = median_ci_ranks(len(s), confidence)
    return s[l - 1], s[u - 1]


def aggregate(records: Iterable[RunRecord], confidence: float = 0.99, grid_points: int = 100,
              grid: Optional[Sequence[float]] = None) -> AggregateStats:
    """Success rate, lower-median cost and median confidence bands over a log-spaced time grid.

    Unsuccessful runs count as infinite cost. The result does not depend on
    the order of ``records``.
    """
    groups: Dict[Tuple[str, str], List[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.problem, r.planner), []).append(r)
    stats = AggregateStats(confidence)
    for (problem, planner), recs in sorted(groups.items()):
        budget = max(r.budget for r in recs)
        if grid is not None:
            times = list(grid)
        elif math.isinf(budget):
            horizon = max((e.time for r in recs for e in r.events), default=1.0) or 1.0
            times = log_time_grid(horizon, grid_points)
        else:
            times = log_time_grid(budget, grid_points)
        succ, med, lo, hi = [], [], [], []
        for t in times:
            costs = sorted(r.cost_at(t) for r in recs)
            succ.append(sum(not math.isinf(c) for c in costs) / len(costs))
            med.append(lower_median(costs))
            a, b = _ci(costs, confidence)
            lo.append(a)
            hi.append(b)
        init_t = [r.initial_time for r in recs]
        init_c = [r.initial_cost for r in recs]
        stats.planners.append(PlannerStats(
            problem=problem, planner=planner, n=len(recs), times=times, success_rate=succ, median_cost=med,
            ci_lower=lo, ci_upper=hi, median_initial_time=lower_median(init_t),
            median_initial_cost=lower_median(init_c), initial_time_ci=_ci(init_t, confidence),
            initial_cost_ci=_ci(init_c, confidence),
        ))
    return stats


# -- certification -------------------------------------------------------------------------


def certify_record(record: RunRecord, problem: Optional[ProblemDefinition] = None,
                   rel_tol: float = 1e-9) -> List[str]:
    """Re-validate every reported solution of a record; returns the list of failures."""
    failures = []
    tag = f"{record.problem}/{record.planner}/seed {record.seed}"
    if problem is None:
        if record.problem_def is None:
            return [f"{tag}: record carries no problem definition"]
        problem = problem_from_dict(record.problem_def)
    world, objective = problem.world, problem.objective
    goals = [tuple(g) for g in problem.goals]
    last_cost, last_time = math.inf, -math.inf
    for k, e in enumerate(record.events):
        where = f"{tag} event {k}"
        if not e.cost < last_cost:
            failures.append(f"{where}: cost {e.cost!r} does not improve on {last_cost!r}")
        if e.time < last_time:
            failures.append(f"{where}: time {e.time!r} precedes {last_time!r}")
        last_cost, last_time = e.cost, e.time
        path = [tuple(p) for p in e.path]
        if len(path) < 2 and not (len(path) == 1 and path[0] in goals and path[0] == tuple(problem.start)):
            failures.append(f"{where}: path has fewer than two states")
            continue
        if path[0] != tuple(problem.start):
            failures.append(f"{where}: path does not begin at the start state")
        if path[-1] not in goals:
            failures.append(f"{where}: path does not end at a goal state")
        for a, b in zip(path[:-1], path[1:]):
            if not world.is_valid_edge_dense(a, b):
                failures.append(f"{where}: edge {a} -> {b} is in collision")
                break
        cost = objective.path_cost(path)
        if not math.isclose(cost, e.cost, rel_tol=rel_tol, abs_tol=0.0):
            failures.append(f"{where}: recomputed cost {cost!r} differs from reported {e.cost!r}")
    if record.events and record.final_cost != record.events[-1].cost:
        failures.append(f"{tag}: final cost differs from the last event")
    return failures


def certify(records: Iterable[RunRecord], problem: Optional[ProblemDefinition] = None) -> List[str]:
    failures = []
    for r in records:
        failures.extend(certify_record(r, problem))
    return failures
