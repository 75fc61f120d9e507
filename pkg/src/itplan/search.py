"""Anytime drivers: budgets, stopping rules and solution events.

:class:`AnytimeSearch` is planner-agnostic; :class:`BatchSearch` adds the
batch-sampled graph shared by AIT* and EIT*.
"""
from __future__ import annotations

import math
from typing import Callable, List, Optional

import numpy as np

from .approx import K_NEAREST, ApproxGraph, SamplingError
from .problem import ProblemDefinition
from .records import FAILED, INVALID_PROBLEM, NO_SOLUTION, SOLVED, TIMEOUT, Event, RunRecord, make_clock
from .world import Counters

REVERSE = "reverse"
FORWARD = "forward"
BATCH = "batch"


class StopSearch(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class AnytimeSearch:
    """Budgeted iteration with solution-improvement events.

    Subclasses implement :meth:`setup`, :meth:`step` and
    :meth:`current_solution`. Stop reasons: ``budget``, ``target``,
    ``exhausted``, ``optimal``, ``max_iterations``, ``invalid_problem``
    and ``error``.
    """

    planner_id = ""

    def __init__(self, problem: ProblemDefinition, *, seed: int = 0, budget: float = 1.0,
                 clock: str = "virtual", target_cost: Optional[float] = None,
                 max_iterations: Optional[int] = None):
        self.problem = problem
        self.world = problem.world
        self.objective = problem.objective
        self.seed = int(seed)
        self.budget = float(budget)
        self.target_cost = target_cost
        self.max_iterations = max_iterations
        self.counters = Counters()
        self.clock = make_clock(clock, self.counters)
        self.rng = np.random.default_rng(self.seed)
        self.c_current = math.inf
        self.events: List[Event] = []
        self.first_solution_counters = None
        self.stop_reason: Optional[str] = None
        self.status = NO_SOLUTION
        self.diagnostic = ""
        self._problem_ok = self._check_problem()
        if self._problem_ok:
            self.setup()

    def _check_problem(self) -> bool:
        w = self.world
        if not w.is_valid_state(self.problem.start) or not all(w.is_valid_state(g) for g in self.problem.goals):
            self.status = INVALID_PROBLEM
            self.stop_reason = "invalid_problem"
            self.diagnostic = "start or goal state is in collision"
            return False
        return True

    def setup(self) -> None:
        raise NotImplementedError

    def step(self) -> str:
        raise NotImplementedError

    def current_solution(self):
        """(cost, list of coordinate tuples) of the best solution, or (inf, None)."""
        raise NotImplementedError

    def on_solution_improved(self) -> None:
        pass

    def params(self) -> dict:
        return {"target_cost": self.target_cost}

    @property
    def done(self) -> bool:
        return self.stop_reason is not None

    def elapsed(self) -> float:
        return self.clock.elapsed()

    def advance(self, until: float) -> None:
        """Iterate until the clock reaches ``until`` or a stopping rule fires."""
        if self.done or not self._problem_ok:
            return
        try:
            while True:
                if self.elapsed() >= until:
                    if until >= self.budget:
                        raise StopSearch("budget")
                    return
                if self.max_iterations is not None and self.counters.iterations >= self.max_iterations:
                    raise StopSearch("max_iterations")
                self.step()
                if self.target_cost is not None and self.c_current <= self.target_cost:
                    raise StopSearch("target")
        except StopSearch as stop:
            self.stop_reason = stop.reason
        except SamplingError as exc:
            self.stop_reason = "error"
            self.status = FAILED
            self.diagnostic = str(exc)

    def run(self) -> RunRecord:
        if self._problem_ok:
            self.advance(self.budget)
        return self.record()

    def refresh_solution(self) -> None:
        cost, path = self.current_solution()
        if cost < self.c_current:
            self.c_current = cost
            if self.first_solution_counters is None:
                self.first_solution_counters = self.counters.snapshot()
            self.events.append(Event(self.elapsed(), cost, self.counters.iterations,
                                     [list(x) for x in path], self.counters.snapshot()))
            self.on_solution_improved()

    def solution_path(self):
        if not self._problem_ok:
            return None
        return self.current_solution()[1]

    def record(self) -> RunRecord:
        status = self.status
        if status == NO_SOLUTION and self.events:
            status = SOLVED
        elif status == NO_SOLUTION and self.stop_reason == "budget":
            status = TIMEOUT
        return RunRecord(
            planner=self.planner_id, problem=self.problem.name, seed=self.seed, status=status,
            stop_reason=self.stop_reason or "", events=list(self.events), counters=self.counters.snapshot(),
            final_cost=self.c_current, elapsed=self.elapsed(), clock=self.clock.kind, budget=self.budget,
            params=self.params(), first_solution_counters=self.first_solution_counters,
            diagnostic=self.diagnostic, problem_def=self.problem.to_dict(),
        )

    # snapshot views, as lists of coordinate pairs
    def sample_points(self) -> List[tuple]:
        return []

    def forward_segments(self) -> List[tuple]:
        return []

    def reverse_segments(self) -> List[tuple]:
        return []


class BatchSearch(AnytimeSearch):
    """Graph, batching and the three-way loop common to AIT* and EIT*.

    Subclasses provide :meth:`next_action`, the reverse and forward
    iterations and :meth:`reset_searches`. ``max_batches`` freezes the sample
    set after that many batches; the run then stops once both searches are
    exhausted. ``on_suspend`` is called with the search whenever the reverse
    search is suspended, before the forward step or the new batch.
    """

    def __init__(self, problem: ProblemDefinition, *, batch_size: int = 100, eta: float = 1.001,
                 strategy: str = K_NEAREST, max_batches: Optional[int] = None,
                 on_suspend: Optional[Callable[["BatchSearch"], None]] = None, **kwargs):
        if int(batch_size) < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        self.batch_size = int(batch_size)
        self.eta = eta
        self.strategy = strategy
        self.max_batches = max_batches
        self.on_suspend = on_suspend
        self.graph: Optional[ApproxGraph] = None
        super().__init__(problem, **kwargs)

    def setup(self) -> None:
        self.graph = ApproxGraph(self.world, self.objective, self.problem.start, self.problem.goals, self.rng,
                                 self.counters, strategy=self.strategy, eta=self.eta)
        self.reset_searches()

    def reset_searches(self) -> None:
        raise NotImplementedError

    def next_action(self) -> str:
        raise NotImplementedError

    def iterate_reverse(self) -> None:
        raise NotImplementedError

    def iterate_forward(self) -> None:
        raise NotImplementedError

    def params(self) -> dict:
        return {"batch_size": self.batch_size, "eta": self.eta, "strategy": self.strategy,
                "max_batches": self.max_batches, "target_cost": self.target_cost}

    def step(self) -> str:
        """Run one iteration of the anytime loop and return which branch it took."""
        self.counters.iterations += 1
        action = self.next_action()
        if action != REVERSE and self.on_suspend is not None:
            self.on_suspend(self)
        if action == REVERSE:
            self.iterate_reverse()
        elif action == FORWARD:
            self.iterate_forward()
        else:
            self.new_batch()
        return action

    def new_batch(self) -> None:
        g = self.graph
        if self.max_batches is not None and g.batches >= self.max_batches:
            raise StopSearch("exhausted")
        g.prune(self.c_current)
        added = g.add_batch(self.batch_size, self.c_current)
        if added == 0 and self.objective.euclidean_heuristic and self.c_current <= g.sampler.min_distance:
            # The informed set is a segment of measure zero: nothing can improve.
            raise StopSearch("optimal")
        self.reset_searches()

    def current_solution(self):
        g = self.graph
        best = g.best_goal()
        if best is None:
            return math.inf, None
        return g.gF(best), [g.coords[i] for i in g.forward_path(best)]

    def forward_edges(self) -> List[tuple]:
        return sorted((p, c) for c, p in self.graph.parent.items())

    def reverse_edges(self) -> List[tuple]:
        return []

    def sample_points(self) -> List[tuple]:
        g = self.graph
        return [g.coords[i] for i in sorted(g.active)] if g else []

    def forward_segments(self) -> List[tuple]:
        g = self.graph
        return [(g.coords[a], g.coords[b]) for a, b in self.forward_edges()] if g else []

    def reverse_segments(self) -> List[tuple]:
        g = self.graph
        return [(g.coords[a], g.coords[b]) for a, b in self.reverse_edges()] if g else []
