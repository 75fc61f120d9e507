"""Planner front-ends in the scikit-learn estimator style.

``fit(problem)`` runs one planning trial and stores the results in
attributes ending with an underscore. Parameters are plain constructor
arguments, so ``get_params``, ``set_params`` and ``sklearn.base.clone``
work as usual. There is no ``predict``: a planner's output is the path.
"""
from __future__ import annotations

import math
from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .ait import AitSearch
from .approx import K_NEAREST
from .eit import EitSearch
from .records import RunRecord
from .rrtstar import RrtStarSearch
from .validation import (check_eta, check_inflation, check_optional_positive, check_positive, check_problem,
                         check_seed, check_strategy, check_target)


class BasePlanner(BaseEstimator):
    """Shared ``fit`` logic. Subclasses set ``_search_class`` and ``_search_kwargs``."""

    _search_class = None

    def _search_kwargs(self) -> dict:
        raise NotImplementedError

    def _common_kwargs(self) -> dict:
        if self.clock not in ("virtual", "wall"):
            raise ValueError(f"clock must be 'virtual' or 'wall', got {self.clock!r}")
        return dict(
            seed=check_seed(self.seed),
            budget=float(check_positive("budget", self.budget, allow_inf=True)),
            clock=self.clock,
            target_cost=check_target(self.target_cost),
            max_iterations=check_optional_positive("max_iterations", self.max_iterations, integer=True),
        )

    def make_search(self, problem):
        """Build the search object without running it (used for snapshots and tests)."""
        problem = check_problem(problem)
        return self._search_class(problem, **self._common_kwargs(), **self._search_kwargs())

    def fit(self, problem, y=None):
        search = self.make_search(problem)
        self.record_: RunRecord = search.run()
        self.search_ = search
        self.cost_ = self.record_.final_cost
        self.path_ = search.solution_path()
        self.status_ = self.record_.status
        self.n_events_ = len(self.record_.events)
        return self

    @property
    def solved_(self) -> bool:
        check_is_fitted(self, "record_")
        return not math.isinf(self.cost_)


class _BatchPlanner(BasePlanner):
    def _batch_kwargs(self) -> dict:
        return dict(
            batch_size=check_positive("batch_size", self.batch_size, integer=True),
            eta=check_eta(self.eta),
            strategy=check_strategy(self.strategy),
            max_batches=check_optional_positive("max_batches", self.max_batches, integer=True),
        )


class AITStar(_BatchPlanner):
    """Adaptively Informed Trees.

    Parameters
    ----------
    batch_size : int
        Samples added per batch.
    eta : float
        RGG connection scaling, > 1.
    strategy : {"k_nearest", "r_disc"}
    budget : float
        Run budget in seconds of the chosen clock.
    clock : {"virtual", "wall"}
        ``virtual`` charges calibrated costs per unit of work and is
        reproducible; ``wall`` uses elapsed real time.
    seed : int
    target_cost : float or None
        Stop as soon as the solution cost is at most this value.
    max_batches : int or None
        Freeze the sample set after this many batches.
    max_iterations : int or None
    """

    _search_class = AitSearch

    def __init__(self, batch_size: int = 100, eta: float = 1.001, strategy: str = K_NEAREST,
                 budget: float = 1.0, clock: str = "virtual", seed: int = 0,
                 target_cost: Optional[float] = None, max_batches: Optional[int] = None,
                 max_iterations: Optional[int] = None):
        self.batch_size = batch_size
        self.eta = eta
        self.strategy = strategy
        self.budget = budget
        self.clock = clock
        self.seed = seed
        self.target_cost = target_cost
        self.max_batches = max_batches
        self.max_iterations = max_iterations

    def _search_kwargs(self) -> dict:
        return self._batch_kwargs()


class EITStar(_BatchPlanner):
    """Effort Informed Trees.

    Takes the :class:`AITStar` parameters plus the inflation factors used
    before and after the first solution and the initial sparse
    collision-checking resolution.
    """

    _search_class = EitSearch

    def __init__(self, batch_size: int = 100, eta: float = 1.001, strategy: str = K_NEAREST,
                 budget: float = 1.0, clock: str = "virtual", seed: int = 0,
                 target_cost: Optional[float] = None, max_batches: Optional[int] = None,
                 max_iterations: Optional[int] = None, initial_inflation: float = math.inf,
                 final_inflation: float = 1.0, initial_resolution: int = 1):
        self.batch_size = batch_size
        self.eta = eta
        self.strategy = strategy
        self.budget = budget
        self.clock = clock
        self.seed = seed
        self.target_cost = target_cost
        self.max_batches = max_batches
        self.max_iterations = max_iterations
        self.initial_inflation = initial_inflation
        self.final_inflation = final_inflation
        self.initial_resolution = initial_resolution

    def _search_kwargs(self) -> dict:
        return dict(
            self._batch_kwargs(),
            initial_inflation=check_inflation("initial_inflation", self.initial_inflation),
            final_inflation=check_inflation("final_inflation", self.final_inflation),
            initial_resolution=check_positive("initial_resolution", self.initial_resolution, integer=True),
        )


class RRTStar(BasePlanner):
    """Informed RRT* baseline.

    ``max_edge_length`` defaults to the problem's override, then to 0.3,
    1.25 and 3.0 in 2, 8 and 16 dimensions.
    """

    _search_class = RrtStarSearch

    def __init__(self, max_edge_length: Optional[float] = None, goal_bias: float = 0.05, eta: float = 1.001,
                 budget: float = 1.0, clock: str = "virtual", seed: int = 0,
                 target_cost: Optional[float] = None, max_iterations: Optional[int] = None):
        self.max_edge_length = max_edge_length
        self.goal_bias = goal_bias
        self.eta = eta
        self.budget = budget
        self.clock = clock
        self.seed = seed
        self.target_cost = target_cost
        self.max_iterations = max_iterations

    def _search_kwargs(self) -> dict:
        return dict(
            max_edge_length=check_optional_positive("max_edge_length", self.max_edge_length),
            goal_bias=self.goal_bias,
            eta=check_eta(self.eta),
        )


PLANNERS = {"ait": AITStar, "eit": EITStar, "rrtstar": RRTStar}


def make_planner(name: str, **params) -> BasePlanner:
    try:
        cls = PLANNERS[name]
    except KeyError:
        raise ValueError(f"unknown planner {name!r}; expected one of {sorted(PLANNERS)}") from None
    return cls(**params)


def ait_solve(problem, budget: float = 1.0, **params) -> RunRecord:
    return AITStar(budget=budget, **params).fit(problem).record_


def eit_solve(problem, budget: float = 1.0, **params) -> RunRecord:
    return EITStar(budget=budget, **params).fit(problem).record_


def rrt_star_solve(problem, budget: float = 1.0, max_edge_length: Optional[float] = None, **params) -> RunRecord:
    return RRTStar(budget=budget, max_edge_length=max_edge_length, **params).fit(problem).record_
