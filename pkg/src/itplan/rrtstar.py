"""Informed RRT*, the reference planner for benchmark comparisons."""
from __future__ import annotations

import math
from typing import Dict, List, Optional, Set

import numpy as np

from .approx import rgg_radius
from .search import AnytimeSearch, StopSearch
from .space import InformedSampler, sample_uniform

DEFAULT_MAX_EDGE = {2: 0.3, 8: 1.25, 16: 3.0}


def default_max_edge_length(problem) -> float:
    override = problem.planner_overrides.get("rrtstar", {}).get("max_edge_length")
    if override is not None:
        return float(override)
    return DEFAULT_MAX_EDGE.get(problem.dimension, 0.3)


class RrtStarSearch(AnytimeSearch):
    """RRT* with goal biasing, a steering range and informed sampling.

    The rewiring radius is ``min(r(q), max_edge_length)`` where ``r`` is the
    PRM*-scaled radius over the informed-set measure and ``q`` the tree size.
    Goal states join the tree by being steered to; each goal joins at most
    once and is later improved by rewiring.
    """

    planner_id = "rrtstar"

    def __init__(self, problem, *, max_edge_length: Optional[float] = None, goal_bias: float = 0.05,
                 eta: float = 1.001, **kwargs):
        self.max_edge_length = float(max_edge_length) if max_edge_length is not None else default_max_edge_length(problem)
        if not self.max_edge_length > 0:
            raise ValueError(f"max_edge_length must be positive, got {max_edge_length}")
        if not 0.0 <= goal_bias <= 1.0:
            raise ValueError(f"goal_bias must lie in [0, 1], got {goal_bias}")
        self.goal_bias = float(goal_bias)
        self.eta = float(eta)
        super().__init__(problem, **kwargs)

    def params(self) -> dict:
        return {"max_edge_length": self.max_edge_length, "goal_bias": self.goal_bias, "eta": self.eta,
                "target_cost": self.target_cost}

    def setup(self) -> None:
        n = self.world.dimension
        self.n = n
        self.coords: List[tuple] = [tuple(self.problem.start)]
        self._buf = np.empty((1024, n))
        self._buf[0] = self.coords[0]
        self.g: List[float] = [0.0]
        self.parent: List[Optional[int]] = [None]
        self.children: List[Set[int]] = [set()]
        self.goal_coords = [tuple(x) for x in self.problem.goals]
        self.goal_vertex: Dict[int, int] = {}
        self.sampler = InformedSampler(self.coords[0], self.goal_coords)
        self._cost_cache: Dict[tuple, float] = {}

    # -- tree -------------------------------------------------------------------------

    def _add_vertex(self, x: tuple, parent: int, cost: float) -> int:
        i = len(self.coords)
        if i == self._buf.shape[0]:
            self._buf = np.concatenate([self._buf, np.empty_like(self._buf)])
        self._buf[i] = x
        self.coords.append(x)
        self.g.append(self.g[parent] + cost)
        self.parent.append(parent)
        self.children.append(set())
        self.children[parent].add(i)
        return i

    def _reparent(self, v: int, p: int, cost: float) -> None:
        self.children[self.parent[v]].discard(v)
        self.parent[v] = p
        self.children[p].add(v)
        self.g[v] = self.g[p] + cost
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                self.g[c] = self.g[u] + self._edge_cost(u, c)
                stack.append(c)

    def _edge_cost(self, a: int, b: int) -> float:
        key = (a, b) if a < b else (b, a)
        c = self._cost_cache.get(key)
        if c is None:
            c = self._cost_cache[key] = self.objective.true_edge_cost(self.coords[key[0]], self.coords[key[1]],
                                                                      self.counters)
        return c

    def _valid(self, a: tuple, b: tuple) -> bool:
        return self.world.is_valid_edge_dense(a, b, self.counters)

    # -- iteration -----------------------------------------------------------------------

    def _sample(self) -> Optional[tuple]:
        self.counters.samples_drawn += 1
        if self.goal_bias > 0 and self.rng.random() < self.goal_bias:
            return self.goal_coords[int(self.rng.integers(len(self.goal_coords)))]
        if self.objective.euclidean_heuristic and not math.isinf(self.c_current):
            return self.sampler.sample(self.rng, self.c_current)
        return sample_uniform(self.rng, self.n)

    def _steer(self, a: tuple, b: tuple) -> tuple:
        d = math.dist(a, b)
        if d <= self.max_edge_length:
            return b
        t = self.max_edge_length / d
        return tuple(ai + t * (bi - ai) for ai, bi in zip(a, b))

    def step(self) -> str:
        self.counters.iterations += 1
        x_rand = self._sample()
        if x_rand is None:
            raise StopSearch("optimal")
        q = len(self.coords)
        pts = self._buf[:q]
        d2 = ((pts - np.asarray(x_rand)) ** 2).sum(axis=1)
        self.counters.distance_evaluations += q
        nearest = int(np.argmin(d2))
        x_new = self._steer(self.coords[nearest], x_rand)
        goal_idx = self.goal_coords.index(x_new) if x_new in self.goal_coords else None
        if goal_idx is None and not self.world.is_valid_state(x_new, self.counters):
            return "rejected"
        if goal_idx is None and x_new == self.coords[nearest]:
            return "rejected"
        measure = self.sampler.measure(self.c_current) if self.objective.euclidean_heuristic else 1.0
        radius = min(rgg_radius(max(q + 1, 2), self.n, self.eta, measure), self.max_edge_length)
        dn = np.sqrt(((pts - np.asarray(x_new)) ** 2).sum(axis=1))
        near = [int(i) for i in np.flatnonzero(dn <= radius)]
        if nearest not in near:
            near.append(nearest)
        existing = self.goal_vertex.get(goal_idx) if goal_idx is not None else None
        if existing is not None:
            near = [i for i in near if i != existing]
        # choose parent: cheapest valid connection, checked in order of candidate cost
        obj = self.objective
        cands = sorted(near, key=lambda i: (self.g[i] + obj.admissible_edge_heuristic(self.coords[i], x_new), i))
        best, best_cost, best_edge = None, math.inf, math.inf
        for i in cands:
            if self.g[i] + obj.admissible_edge_heuristic(self.coords[i], x_new) >= best_cost:
                break
            if not self._valid(self.coords[i], x_new):
                continue
            c = obj.true_edge_cost(self.coords[i], x_new, self.counters)
            if self.g[i] + c < best_cost:
                best, best_cost, best_edge = i, self.g[i] + c, c
        if best is None:
            return "rejected"
        if existing is not None:
            if best_cost < self.g[existing]:
                self._cost_cache[(min(best, existing), max(best, existing))] = best_edge
                self._reparent(existing, best, best_edge)
                self.refresh_solution()
            return "rewired"
        v = self._add_vertex(x_new, best, best_edge)
        self._cost_cache[(best, v)] = best_edge
        if goal_idx is not None:
            self.goal_vertex[goal_idx] = v
        # rewire the neighbourhood through the new vertex
        for i in near:
            if i == best or i == 0:
                continue
            lb = self.g[v] + obj.admissible_edge_heuristic(x_new, self.coords[i])
            if lb >= self.g[i]:
                continue
            if not self._valid(x_new, self.coords[i]):
                continue
            c = self._edge_cost(v, i)
            if self.g[v] + c < self.g[i]:
                self._reparent(i, v, c)
        self.refresh_solution()
        return "extended"

    def current_solution(self):
        best, cost = None, math.inf
        for v in self.goal_vertex.values():
            if self.g[v] < cost:
                best, cost = v, self.g[v]
        if best is None:
            return math.inf, None
        path = [best]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return cost, [self.coords[i] for i in reversed(path)]

    def sample_points(self) -> List[tuple]:
        return list(self.coords)

    def forward_segments(self) -> List[tuple]:
        return [(self.coords[p], self.coords[c]) for c, p in enumerate(self.parent) if p is not None]
