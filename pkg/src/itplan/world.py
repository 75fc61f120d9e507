"""Axis-aligned box obstacles, state validity, clearance and edge checking."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

import numpy as np

from .space import SpaceDescriptor


@dataclass
class Counters:
    """Work counters of a single planner run."""

    iterations: int = 0
    state_checks: int = 0
    dense_edge_checks: int = 0
    sparse_edge_checks: int = 0
    sparse_state_checks: int = 0
    cost_evaluations: int = 0
    samples_drawn: int = 0
    neighbor_entries: int = 0
    queue_pushes: int = 0
    distance_evaluations: int = 0

    def snapshot(self) -> dict:
        return asdict(self)

    def add(self, other: "Counters") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


@dataclass(frozen=True)
class Obstacle:
    """Closed axis-aligned box; its boundary counts as invalid."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("obstacle corners have different dimensions")
        if not all(lo < hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"obstacle lower corner must be below upper corner: {self}")


class World:
    """Immutable obstacle set over the unit cube.

    Counters are never stored here; the checking methods take the calling
    run's :class:`Counters` so a world can be shared by parallel trials.
    """

    def __init__(self, dimension: int, obstacles: Sequence[Obstacle] = (), cd_resolution: float = 1e-3):
        self.space = SpaceDescriptor(dimension)
        self.obstacles = tuple(
            o if isinstance(o, Obstacle) else Obstacle(tuple(o[0]), tuple(o[1])) for o in obstacles
        )
        for o in self.obstacles:
            if len(o.lower) != self.space.dimension:
                raise ValueError(f"obstacle dimension {len(o.lower)} != world dimension {dimension}")
        if not cd_resolution > 0:
            raise ValueError(f"cd_resolution must be positive, got {cd_resolution}")
        self.cd_resolution = float(cd_resolution)
        n = self.space.dimension
        self._lo = np.array([o.lower for o in self.obstacles], dtype=float).reshape(-1, n)
        self._hi = np.array([o.upper for o in self.obstacles], dtype=float).reshape(-1, n)

    @property
    def dimension(self) -> int:
        return self.space.dimension

    # -- states -------------------------------------------------------------

    def _invalid_mask(self, points: np.ndarray) -> np.ndarray:
        if not self.obstacles:
            return np.zeros(points.shape[0], dtype=bool)
        p = points[:, None, :]
        inside = np.all((p >= self._lo) & (p <= self._hi), axis=2)
        return inside.any(axis=1)

    def is_valid_state(self, x, counters: Optional[Counters] = None) -> bool:
        if counters is not None:
            counters.state_checks += 1
        return not bool(self._invalid_mask(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def clearances(self, points) -> np.ndarray:
        """Euclidean distance from each point to the nearest closed box (0 inside)."""
        points = np.asarray(points, dtype=float).reshape(-1, self.dimension)
        if not self.obstacles:
            return np.full(points.shape[0], math.inf)
        p = points[:, None, :]
        gap = np.maximum(np.maximum(self._lo - p, p - self._hi), 0.0)
        return np.sqrt((gap * gap).sum(axis=2)).min(axis=1)

    def clearance(self, x) -> float:
        return float(self.clearances(x)[0])

    # -- edges --------------------------------------------------------------

    def dense_points(self, a, b) -> np.ndarray:
        """Evenly spaced states from a to b, both included, at spacing <= cd_resolution.

        The grid is always built from the lexicographically smaller endpoint so
        that (a, b) and (b, a) visit bit-identical states.
        """
        if tuple(b) < tuple(a):
            return self.dense_points(b, a)[::-1]
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        length = float(np.linalg.norm(b - a))
        segments = max(1, math.ceil(length / self.cd_resolution))
        t = np.arange(segments + 1, dtype=float)[:, None] / segments
        points = a + t * (b - a)
        points[-1] = b
        return points

    @staticmethod
    def _inward_order(count: int) -> np.ndarray:
        # 0, N, 1, N-1, ... : both endpoints first, then toward the middle.
        lo = np.arange((count + 1) // 2)
        hi = count - 1 - np.arange(count // 2)
        order = np.empty(count, dtype=int)
        order[0::2] = lo
        order[1::2] = hi
        return order

    def is_valid_edge_dense(self, a, b, counters: Optional[Counters] = None) -> bool:
        """Dense validation of segment a-b, walking inward from both ends."""
        points = self.dense_points(a, b)
        order = self._inward_order(points.shape[0])
        invalid = self._invalid_mask(points[order])
        hit = int(np.argmax(invalid)) if invalid.any() else -1
        if counters is not None:
            counters.dense_edge_checks += 1
            counters.state_checks += points.shape[0] if hit < 0 else hit + 1
        return hit < 0

    def sparse_points(self, a, b, d: int) -> np.ndarray:
        if tuple(b) < tuple(a):
            return self.sparse_points(b, a, d)[::-1]
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        t = np.arange(1, d + 1, dtype=float)[:, None] / (d + 1)
        return a + t * (b - a)

    def first_sparse_collision(self, a, b, d: int, counters: Optional[Counters] = None):
        """The first invalid interior state of the d-point sparse grid, or None."""
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        points = self.sparse_points(a, b, d)
        invalid = self._invalid_mask(points)
        hit = int(np.argmax(invalid)) if invalid.any() else -1
        if counters is not None:
            counters.sparse_edge_checks += 1
            counters.sparse_state_checks += d if hit < 0 else hit + 1
        return None if hit < 0 else tuple(points[hit].tolist())

    def could_be_valid_sparse(self, a, b, d: int, counters: Optional[Counters] = None) -> bool:
        """Checks the d interior states at t = i / (d + 1); False proves the edge invalid."""
        return self.first_sparse_collision(a, b, d, counters) is None
