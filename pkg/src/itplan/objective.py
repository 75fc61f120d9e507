"""Optimization objectives with their true costs and a priori heuristics."""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .world import Counters, World

CLEARANCE_FLOOR = 1e-6

PATH_LENGTH = "path_length"
CLEARANCE = "clearance"
OBJECTIVE_KINDS = (PATH_LENGTH, CLEARANCE)


def _canonical(a, b):
    # Cost evaluation always runs in one orientation so c(a, b) == c(b, a) bitwise.
    return (b, a) if tuple(b) < tuple(a) else (a, b)


class Objective:
    """Base class; subclasses define the true edge cost and the inadmissible heuristic.

    All objectives share the Euclidean effort heuristic, the number of
    collision checks needed to validate an edge at the world's resolution.
    """

    kind: str = ""
    #: whether the admissible heuristic is the Euclidean metric (enables informed sampling)
    euclidean_heuristic: bool = False

    def __init__(self, world: World):
        self.world = world

    def __repr__(self):
        return f"{type(self).__name__}()"

    def true_edge_cost(self, a, b, counters: Optional[Counters] = None) -> float:
        raise NotImplementedError

    def admissible_edge_heuristic(self, a, b) -> float:
        raise NotImplementedError

    def inadmissible_edge_heuristic(self, a, b) -> float:
        raise NotImplementedError

    def effort_edge_heuristic(self, a, b) -> float:
        return math.dist(a, b) / self.world.cd_resolution

    def delta(self, x) -> float:
        """Clearance floored at 1e-6."""
        return max(self.world.clearance(x), CLEARANCE_FLOOR)

    # Heuristics relative to the problem's start and goals.

    def cost_to_come_heuristic(self, x, start) -> float:
        return self.admissible_edge_heuristic(start, x)

    def cost_to_go_heuristic(self, x, goals: Sequence) -> float:
        return min(self.admissible_edge_heuristic(x, g) for g in goals)

    def effort_to_start_heuristic(self, x, start) -> float:
        return self.effort_edge_heuristic(x, start)

    def path_cost(self, path: Sequence, counters: Optional[Counters] = None) -> float:
        cost = 0.0
        for a, b in zip(path[:-1], path[1:]):
            cost += self.true_edge_cost(a, b, counters)
        return cost


class PathLength(Objective):
    kind = PATH_LENGTH
    euclidean_heuristic = True

    def true_edge_cost(self, a, b, counters=None):
        if counters is not None:
            counters.cost_evaluations += 1
        return math.dist(a, b)

    def admissible_edge_heuristic(self, a, b):
        return math.dist(a, b)

    def inadmissible_edge_heuristic(self, a, b):
        return math.dist(a, b)


class Clearance(Objective):
    """Integral of 1 / delta along the edge's arc length.

    The integral is a composite trapezoid over the world's dense
    collision-checking grid, so ``quadrature_pitch`` defaults to the
    world's resolution.
    """

    kind = CLEARANCE

    def __init__(self, world: World, quadrature_pitch: Optional[float] = None):
        super().__init__(world)
        self.quadrature_pitch = quadrature_pitch or world.cd_resolution

    def true_edge_cost(self, a, b, counters=None):
        if counters is not None:
            counters.cost_evaluations += 1
        a, b = _canonical(a, b)
        length = math.dist(a, b)
        if length == 0.0:
            return 0.0
        segments = max(1, math.ceil(length / self.quadrature_pitch))
        t = np.arange(segments + 1, dtype=float)[:, None] / segments
        a_ = np.asarray(a, dtype=float)
        points = a_ + t * (np.asarray(b, dtype=float) - a_)
        inv = 1.0 / np.maximum(self.world.clearances(points), CLEARANCE_FLOOR)
        h = length / segments
        return float(h * (inv.sum() - 0.5 * (inv[0] + inv[-1])))

    def admissible_edge_heuristic(self, a, b):
        return 0.0

    def inadmissible_edge_heuristic(self, a, b):
        return self.inadmissible_from_deltas(self.delta(a), self.delta(b))

    @staticmethod
    def inadmissible_from_deltas(delta_a: float, delta_b: float) -> float:
        return 2.0 / (delta_a + delta_b)


def make_objective(kind: str, world: World) -> Objective:
    if kind == PATH_LENGTH:
        return PathLength(world)
    if kind == CLEARANCE:
        return Clearance(world)
    raise ValueError(f"unknown objective {kind!r}; expected one of {OBJECTIVE_KINDS}")
