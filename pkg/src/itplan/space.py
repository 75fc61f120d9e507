"""Unit-hypercube state space: metric, interpolation and (informed) sampling."""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

Coords = Sequence[float]

# Draws allowed per accepted sample before a sampler gives up.
MAX_REJECTIONS = 10**6


class State(NamedTuple):
    """A sampled point of the open unit cube together with its run-unique id."""

    coords: tuple
    id: int


def unit_ball_measure(n: int) -> float:
    """Lebesgue measure of the n-dimensional unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


class SpaceDescriptor:
    """Dimension and the measures the connection radius needs."""

    def __init__(self, dimension: int):
        if int(dimension) != dimension or dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {dimension!r}")
        self.dimension = int(dimension)
        self.lebesgue_measure = 1.0
        self.unit_ball_measure = unit_ball_measure(self.dimension)

    def __repr__(self):
        return f"SpaceDescriptor(dimension={self.dimension})"


def _check_same_dim(a: Coords, b: Coords) -> None:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")


def distance(a: Coords, b: Coords) -> float:
    _check_same_dim(a, b)
    return math.dist(a, b)


def interpolate(a: Coords, b: Coords, t: float) -> tuple:
    """Affine interpolation a + t (b - a); returns ``a`` and ``b`` exactly at the ends."""
    _check_same_dim(a, b)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return tuple(float(v) for v in a)
    if t == 1.0:
        return tuple(float(v) for v in b)
    return tuple(float(ai + t * (bi - ai)) for ai, bi in zip(a, b))


def in_open_cube(x) -> bool:
    x = np.asarray(x)
    return bool(np.all(x > 0.0) and np.all(x < 1.0))


def sample_uniform(rng: np.random.Generator, n: int) -> tuple:
    """Uniform state in (0, 1)^n; exact 0.0 draws are redrawn (the cube is open)."""
    while True:
        x = rng.random(n)
        if np.all(x > 0.0):
            return tuple(x.tolist())


def _sample_unit_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return v * rng.random() ** (1.0 / n)


def _rotation_to_world(direction: np.ndarray) -> np.ndarray:
    """Rotation matrix mapping the first coordinate axis onto ``direction``."""
    n = direction.shape[0]
    m = np.outer(direction, np.eye(n)[0])
    u, _, vt = np.linalg.svd(m)
    fix = np.ones(n)
    fix[-1] = np.linalg.det(u) * np.linalg.det(vt)
    return u @ np.diag(fix) @ vt


class ProlateHyperspheroid:
    """The set {x : |x - f1| + |x - f2| < transverse} for foci f1, f2."""

    def __init__(self, focus1: Coords, focus2: Coords, transverse: float):
        self.focus1 = np.asarray(focus1, dtype=float)
        self.focus2 = np.asarray(focus2, dtype=float)
        self.n = self.focus1.shape[0]
        self.focal_distance = math.dist(focus1, focus2)
        self.transverse = float(transverse)
        self.center = 0.5 * (self.focus1 + self.focus2)
        if self.degenerate:
            self.radii = None
            self.rotation = None
            return
        conjugate = math.sqrt(self.transverse**2 - self.focal_distance**2)
        self.radii = np.full(self.n, conjugate / 2.0)
        self.radii[0] = self.transverse / 2.0
        if self.focal_distance > 0.0:
            axis = (self.focus2 - self.focus1) / self.focal_distance
            self.rotation = _rotation_to_world(axis)
        else:
            self.rotation = np.eye(self.n)

    @property
    def degenerate(self) -> bool:
        return not (self.transverse > self.focal_distance) or math.isinf(self.transverse)

    @property
    def measure(self) -> float:
        if math.isinf(self.transverse):
            return math.inf
        if self.degenerate:
            return 0.0
        return unit_ball_measure(self.n) * float(np.prod(self.radii))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        ball = _sample_unit_ball(rng, self.n)
        return self.rotation @ (self.radii * ball) + self.center


class InformedSampler:
    """Uniform sampler over the informed set of a start / goal-set pair.

    The informed set is the union over goals of the prolate hyperspheroids with
    foci at the start and that goal, intersected with the unit cube. When the
    union's measure exceeds the cube's, whole-cube rejection sampling is used
    instead since it accepts more often.
    """

    def __init__(self, start: Coords, goals: Sequence[Coords]):
        self.start = tuple(float(v) for v in start)
        self.goals = [tuple(float(v) for v in g) for g in goals]
        if not self.goals:
            raise ValueError("goal set must not be empty")
        self.n = len(self.start)
        self.min_distance = min(math.dist(self.start, g) for g in self.goals)
        self._cache = (None, None)

    def heuristic_sum(self, x: Coords) -> float:
        return math.dist(self.start, x) + min(math.dist(x, g) for g in self.goals)

    def _spheroids(self, c_current: float):
        # c_current changes rarely compared to how often we sample.
        c, spheroids = self._cache
        if c != c_current:
            spheroids = [ProlateHyperspheroid(self.start, g, c_current) for g in self.goals]
            self._cache = (c_current, spheroids)
        return spheroids

    def measure(self, c_current: float) -> float:
        """Measure of the informed set, capped at the cube's measure of one.

        Multiple goals sum their spheroid measures, which is an upper bound on
        the measure of the union.
        """
        if math.isinf(c_current) or c_current <= self.min_distance:
            return 1.0
        return min(1.0, sum(p.measure for p in self._spheroids(c_current)))

    def sample(self, rng: np.random.Generator, c_current: float) -> Optional[tuple]:
        """One state with start-distance plus goal-distance below ``c_current``.

        Returns None if the informed set is degenerate (``c_current`` at or below
        the start-goal distance) or the rejection cap is exhausted.
        """
        if math.isinf(c_current):
            return sample_uniform(rng, self.n)
        if c_current <= self.min_distance:
            return None
        spheroids = self._spheroids(c_current)
        weights = np.array([p.measure for p in spheroids])
        if weights.sum() >= 1.0:
            for _ in range(MAX_REJECTIONS):
                x = sample_uniform(rng, self.n)
                if self.heuristic_sum(x) < c_current:
                    return x
            return None
        probabilities = weights / weights.sum()
        for _ in range(MAX_REJECTIONS):
            i = int(rng.choice(len(spheroids), p=probabilities)) if len(spheroids) > 1 else 0
            x = spheroids[i].sample(rng)
            if not in_open_cube(x):
                continue
            xt = tuple(x.tolist())
            # Points in a lower-indexed spheroid belong to that goal's share.
            if any(math.dist(self.start, xt) + math.dist(xt, self.goals[j]) < c_current for j in range(i)):
                continue
            if self.heuristic_sum(xt) < c_current:
                return xt
        return None


def sample_informed(start: Coords, goal_set: Sequence[Coords], c_current: float,
                    rng: np.random.Generator) -> Optional[tuple]:
    return InformedSampler(start, goal_set).sample(rng, c_current)


def informed_measure(start: Coords, goal_set: Sequence[Coords], c_current: float) -> float:
    return InformedSampler(start, goal_set).measure(c_current)
