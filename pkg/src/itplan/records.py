"""Run records, their JSON-lines serialization, and run clocks."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

from .world import Counters

RESULTS_SCHEMA_VERSION = 1

SOLVED = "solved"
NO_SOLUTION = "no_solution"
TIMEOUT = "timeout"
INVALID_PROBLEM = "invalid_problem"
FAILED = "failed"
STATUSES = (SOLVED, NO_SOLUTION, TIMEOUT, INVALID_PROBLEM, FAILED)

# Seconds charged per unit of each counter by the virtual clock: a non-negative
# least-squares fit of wall time on the shipped problems (one CPU, 2026 build
# container), scaled by 1.2 so virtual time usually meets or exceeds wall time.
VIRTUAL_SECONDS = {
    "iterations": 2.0e-6,
    "state_checks": 4.7e-7,
    "dense_edge_checks": 6.2e-5,
    "sparse_edge_checks": 1.9e-5,
    "sparse_state_checks": 3.5e-6,
    "cost_evaluations": 2.6e-5,
    "samples_drawn": 1.05e-4,
    "neighbor_entries": 2.6e-6,
    "queue_pushes": 8.0e-6,
    "distance_evaluations": 1.3e-8,
}


class VirtualClock:
    """Deterministic clock: a weighted sum of a run's work counters.

    Budgets measured on this clock make every run a pure function of its
    seed and configuration, which is what byte-identical output requires.
    """

    kind = "virtual"

    def __init__(self, counters: Counters, weights: Optional[Dict[str, float]] = None):
        self.counters = counters
        self.weights = dict(VIRTUAL_SECONDS if weights is None else weights)
        self._items = list(self.weights.items())

    def elapsed(self) -> float:
        c = self.counters
        return sum(getattr(c, name) * w for name, w in self._items)


class WallClock:
    kind = "wall"

    def __init__(self, counters: Optional[Counters] = None):
        self._t0 = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self._t0


CLOCKS = {"virtual": VirtualClock, "wall": WallClock}


def make_clock(kind: str, counters: Counters):
    try:
        return CLOCKS[kind](counters)
    except KeyError:
        raise ValueError(f"unknown clock {kind!r}; expected one of {sorted(CLOCKS)}") from None


def _cost_out(c: float):
    return None if math.isinf(c) else c


def _cost_in(c) -> float:
    return math.inf if c is None else float(c)


@dataclass
class Event:
    """One solution improvement."""

    time: float
    cost: float
    iteration: int
    path: List[List[float]]
    counters: Dict[str, int]

    def to_json(self) -> dict:
        return {"type": "event", "time": self.time, "cost": self.cost, "iteration": self.iteration,
                "path": self.path, "counters": self.counters}

    @classmethod
    def from_json(cls, d: dict) -> "Event":
        return cls(d["time"], d["cost"], d["iteration"], d["path"], d["counters"])


@dataclass
class RunRecord:
    planner: str
    problem: str
    seed: int
    status: str = NO_SOLUTION
    stop_reason: str = ""
    events: List[Event] = field(default_factory=list)
    counters: Dict[str, int] = field(default_factory=dict)
    final_cost: float = math.inf
    elapsed: float = 0.0
    clock: str = "virtual"
    budget: float = math.inf
    params: Dict[str, object] = field(default_factory=dict)
    first_solution_counters: Optional[Dict[str, int]] = None
    diagnostic: str = ""
    problem_def: Optional[dict] = None

    @property
    def solved(self) -> bool:
        return bool(self.events)

    @property
    def initial_time(self) -> float:
        return self.events[0].time if self.events else math.inf

    @property
    def initial_cost(self) -> float:
        return self.events[0].cost if self.events else math.inf

    def cost_at(self, t: float) -> float:
        cost = math.inf
        for e in self.events:
            if e.time > t:
                break
            cost = e.cost
        return cost

    @property
    def final_path(self) -> Optional[List[List[float]]]:
        return self.events[-1].path if self.events else None

    # -- serialization --------------------------------------------------------

    def to_lines(self) -> List[str]:
        header = {
            "type": "header", "schema_version": RESULTS_SCHEMA_VERSION, "planner": self.planner,
            "problem": self.problem, "seed": self.seed, "clock": self.clock,
            "budget": _cost_out(self.budget), "params": self.params, "problem_def": self.problem_def,
        }
        summary = {
            "type": "summary", "status": self.status, "stop_reason": self.stop_reason,
            "final_cost": _cost_out(self.final_cost), "elapsed": self.elapsed, "counters": self.counters,
            "first_solution_counters": self.first_solution_counters, "diagnostic": self.diagnostic,
        }
        dump = lambda d: json.dumps(d, sort_keys=True, allow_nan=False)
        return [dump(header)] + [dump(e.to_json()) for e in self.events] + [dump(summary)]

    def to_jsonl(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "RunRecord":
        rows = [json.loads(l) for l in lines if l.strip()]
        if not rows or rows[0].get("type") != "header" or rows[-1].get("type") != "summary":
            raise ValueError("trial file must start with a header line and end with a summary line")
        head, tail = rows[0], rows[-1]
        if head.get("schema_version") != RESULTS_SCHEMA_VERSION:
            raise ValueError(f"unsupported results schema version {head.get('schema_version')!r}")
        return cls(
            planner=head["planner"], problem=head["problem"], seed=head["seed"], clock=head["clock"],
            budget=_cost_in(head["budget"]), params=head["params"], problem_def=head.get("problem_def"),
            events=[Event.from_json(r) for r in rows[1:-1]],
            status=tail["status"], stop_reason=tail["stop_reason"], final_cost=_cost_in(tail["final_cost"]),
            elapsed=tail["elapsed"], counters=tail["counters"],
            first_solution_counters=tail.get("first_solution_counters"), diagnostic=tail.get("diagnostic", ""),
        )

    @classmethod
    def read(cls, path) -> "RunRecord":
        with open(path) as fh:
            return cls.from_lines(fh)
