"""Edge-implicit random geometric graph shared by the AIT* and EIT* searches.

The graph holds the sampled states, the connection rule of the current batch,
the sets of known-invalid (blacklisted) and validated (whitelisted) edges, and
the forward search tree, whose edges are part of every neighbourhood.
"""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.spatial import cKDTree

from .objective import Objective
from .space import MAX_REJECTIONS, InformedSampler, State, sample_uniform
from .world import Counters, World

K_NEAREST = "k_nearest"
R_DISC = "r_disc"
STRATEGIES = (K_NEAREST, R_DISC)
KD_TREE_MAX_DIM = 4
KNN_CHUNK = 512


class SamplingError(RuntimeError):
    """Raised when no valid state is found within the rejection cap."""


def rgg_radius(q: int, dimension: int, eta: float, measure: float = 1.0) -> float:
    """PRM*-scaled connection radius for ``q`` samples in an informed set of ``measure``."""
    if q < 2:
        raise ValueError(f"rgg_radius needs q >= 2, got {q}")
    n = dimension
    ball = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return (
        2.0 * eta * (1.0 + 1.0 / n) ** (1.0 / n)
        * (min(1.0, measure) / ball) ** (1.0 / n)
        * (math.log(q) / q) ** (1.0 / n)
    )


def rgg_k(q: int, dimension: int, eta: float) -> int:
    """PRM*-scaled neighbour count, ceil(eta * e * (1 + 1/n) * log q)."""
    if q < 2:
        raise ValueError(f"rgg_k needs q >= 2, got {q}")
    return math.ceil(eta * math.e * (1.0 + 1.0 / dimension) * math.log(q))


def k_nearest_indices(points: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other rows of every row.

    A kd-tree only pays off in low dimension; above that a chunked brute
    force over squared distances is faster.
    """
    count, dim = points.shape
    if dim <= KD_TREE_MAX_DIM:
        _, idx = cKDTree(points).query(points, k=k + 1)
        return idx[:, 1:]
    sq = np.einsum("ij,ij->i", points, points)
    out = np.empty((count, k), dtype=np.intp)
    for lo in range(0, count, KNN_CHUNK):
        hi = min(lo + KNN_CHUNK, count)
        d2 = sq[lo:hi, None] + sq[None, :] - 2.0 * points[lo:hi] @ points.T
        d2[np.arange(hi - lo), np.arange(lo, hi)] = np.inf
        part = np.argpartition(d2, k - 1, axis=1)[:, :k]
        order = np.argsort(np.take_along_axis(d2, part, axis=1), axis=1, kind="stable")
        out[lo:hi] = np.take_along_axis(part, order, axis=1)
    return out


def mutual_k_nearest(points: np.ndarray, k: int) -> List[List[int]]:
    """Row indices that are mutually among each other's k nearest neighbours."""
    count = points.shape[0]
    k = min(k, count - 1)
    if k <= 0:
        return [[] for _ in range(count)]
    idx = k_nearest_indices(points, k)
    rows = np.repeat(np.arange(count), k)
    a = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, idx.ravel())), shape=(count, count))
    m = a.multiply(a.T).tocsr()
    m.sort_indices()
    ind, ptr = m.indices.tolist(), m.indptr.tolist()
    return [ind[ptr[i]:ptr[i + 1]] for i in range(count)]


def r_disc_neighbors(points: np.ndarray, radius: float) -> List[List[int]]:
    lists = cKDTree(points).query_ball_point(points, radius)
    return [sorted(j for j in row if j != i) for i, row in enumerate(lists)]


def _pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


class ApproxGraph:
    """Sampled states, batch connectivity and the forward tree of one planner run."""

    def __init__(self, world: World, objective: Objective, start, goals: Sequence,
                 rng: np.random.Generator, counters: Optional[Counters] = None, *,
                 strategy: str = K_NEAREST, eta: float = 1.001):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown connection strategy {strategy!r}; expected one of {STRATEGIES}")
        if not eta > 1.0:
            raise ValueError(f"eta must exceed 1, got {eta}")
        self.world = world
        self.objective = objective
        self.rng = rng
        self.counters = counters if counters is not None else Counters()
        self.strategy = strategy
        self.eta = float(eta)
        self.n = world.dimension

        self.coords: List[tuple] = []
        self.ghat: List[float] = []
        self.hhat: List[float] = []
        self.dbar: List[float] = []
        self._delta: Dict[int, float] = {}
        self._coord_set: Set[tuple] = set()
        self.active: Set[int] = set()

        self.start = self._add_state(tuple(float(v) for v in start), heuristics=False)
        self.goals = [self._add_state(tuple(float(v) for v in g), heuristics=False) for g in goals]
        self.goal_set = frozenset(self.goals)
        self.start_coords = self.coords[self.start]
        self.goal_coords = [self.coords[g] for g in self.goals]
        for i in [self.start] + self.goals:
            self._set_heuristics(i)
        self.sampler = InformedSampler(self.start_coords, self.goal_coords)

        self.blacklist: Dict[int, Set[int]] = {}
        self.whitelist: Dict[Tuple[int, int], Optional[float]] = {}
        # Colliding interior state recorded for every sparse-check blacklisting.
        self.sparse_witness: Dict[Tuple[int, int], tuple] = {}

        # forward tree
        self.g: Dict[int, float] = {self.start: 0.0}
        self.parent: Dict[int, int] = {}
        self.children: Dict[int, Set[int]] = {}

        self.batches = 0
        self.q = len(self.active)
        self.k: Optional[int] = None
        self.radius: Optional[float] = None
        self._geo: Dict[int, List[int]] = {}
        self._nbr_cache: Dict[int, List[Tuple[int, float]]] = {}
        self.rebuild()

    # -- states ---------------------------------------------------------------

    def _add_state(self, coords: tuple, heuristics: bool = True) -> int:
        i = len(self.coords)
        self.coords.append(coords)
        self._coord_set.add(coords)
        self.active.add(i)
        if heuristics:
            self._set_heuristics(i)
        else:
            self.ghat.append(0.0)
            self.hhat.append(0.0)
            self.dbar.append(0.0)
        return i

    def _set_heuristics(self, i: int) -> None:
        x = self.coords[i]
        obj = self.objective
        ghat = obj.cost_to_come_heuristic(x, self.start_coords) if i != self.start else 0.0
        hhat = 0.0 if i in self.goal_set else obj.cost_to_go_heuristic(x, self.goal_coords)
        dbar = obj.effort_to_start_heuristic(x, self.start_coords) if i != self.start else 0.0
        if i < len(self.ghat):
            self.ghat[i], self.hhat[i], self.dbar[i] = ghat, hhat, dbar
        else:
            self.ghat.append(ghat)
            self.hhat.append(hhat)
            self.dbar.append(dbar)

    def state(self, i: int) -> State:
        return State(self.coords[i], i)

    def fhat(self, i: int) -> float:
        return self.ghat[i] + self.hhat[i]

    def delta(self, i: int) -> float:
        d = self._delta.get(i)
        if d is None:
            d = self._delta[i] = self.objective.delta(self.coords[i])
        return d

    def informed_measure(self, c_current: float) -> float:
        if not self.objective.euclidean_heuristic:
            return 1.0
        return self.sampler.measure(c_current)

    # -- approximation ----------------------------------------------------------

    def sample_state(self, c_current: float) -> Optional[tuple]:
        """Draw one valid, previously unseen state from the informed set.

        Returns None when the informed set is degenerate.
        """
        informed = self.objective.euclidean_heuristic and not math.isinf(c_current)
        if informed and c_current < self.sampler.min_distance:
            raise ValueError("current cost is below the admissible start-goal bound")
        for _ in range(MAX_REJECTIONS):
            self.counters.samples_drawn += 1
            if informed:
                x = self.sampler.sample(self.rng, c_current)
                if x is None:
                    return None
            else:
                x = sample_uniform(self.rng, self.n)
            if x in self._coord_set:
                continue
            if self.world.is_valid_state(x, self.counters):
                return x
        raise SamplingError(f"no valid state after {MAX_REJECTIONS} draws; the world may be fully blocked")

    def add_batch(self, m: int, c_current: float = math.inf) -> int:
        """Append up to ``m`` valid samples and rebuild the connectivity; returns the count."""
        added = 0
        for _ in range(m):
            x = self.sample_state(c_current)
            if x is None:
                break
            self._add_state(x)
            added += 1
        self.batches += 1
        self.rebuild(c_current)
        return added

    def rebuild(self, c_current: float = math.inf) -> None:
        ids = sorted(self.active)
        self.q = len(ids)
        self._nbr_cache.clear()
        self._geo = {}
        if self.q < 2:
            self._geo = {i: [] for i in ids}
            return
        points = np.array([self.coords[i] for i in ids])
        log_q = math.ceil(math.log2(self.q))
        if self.strategy == K_NEAREST:
            self.k = rgg_k(self.q, self.n, self.eta)
            rows = mutual_k_nearest(points, self.k)
            if self.n <= KD_TREE_MAX_DIM:
                self.counters.distance_evaluations += self.q * (min(self.k, self.q - 1) + 1) * log_q
            else:
                self.counters.distance_evaluations += self.q * self.q
        else:
            self.radius = rgg_radius(self.q, self.n, self.eta, self.informed_measure(c_current))
            rows = r_disc_neighbors(points, self.radius)
            self.counters.distance_evaluations += self.q * log_q + sum(map(len, rows))
        for i, row in zip(ids, rows):
            self._geo[i] = [ids[j] for j in row]

    def geometric_neighbors(self, x: int) -> List[int]:
        return self._geo.get(x, [])

    def neighbor_costs(self, x: int) -> List[Tuple[int, float]]:
        """Neighbours of ``x`` with the admissible edge-cost heuristic to each.

        Geometric neighbours plus the forward-tree parent and children, minus
        blacklisted partners, in increasing id order.
        """
        cached = self._nbr_cache.get(x)
        if cached is not None:
            return cached
        nbrs = set(self._geo.get(x, ()))
        p = self.parent.get(x)
        if p is not None:
            nbrs.add(p)
        nbrs.update(self.children.get(x, ()))
        bad = self.blacklist.get(x)
        if bad:
            nbrs -= bad
        a = self.coords[x]
        chat = self.objective.admissible_edge_heuristic
        out = [(y, chat(a, self.coords[y])) for y in sorted(nbrs)]
        self.counters.neighbor_entries += len(out)
        self._nbr_cache[x] = out
        return out

    def neighbors(self, x: int) -> List[int]:
        return [y for y, _ in self.neighbor_costs(x)]

    def expand(self, x: int) -> List[Tuple[int, int]]:
        return [(x, y) for y, _ in self.neighbor_costs(x)]

    def _touch(self, *ids: int) -> None:
        for i in ids:
            self._nbr_cache.pop(i, None)

    # -- edge bookkeeping ---------------------------------------------------------

    def is_blacklisted(self, s: int, t: int) -> bool:
        bad = self.blacklist.get(s)
        return bad is not None and t in bad

    def is_whitelisted(self, s: int, t: int) -> bool:
        return _pair(s, t) in self.whitelist

    def blacklist_edge(self, s: int, t: int, witness: Optional[tuple] = None) -> None:
        if _pair(s, t) in self.whitelist:
            raise AssertionError(f"edge {(s, t)} is both validated and invalid")
        self.blacklist.setdefault(s, set()).add(t)
        self.blacklist.setdefault(t, set()).add(s)
        if witness is not None:
            self.sparse_witness[_pair(s, t)] = witness
        self._touch(s, t)

    def validate_edge(self, s: int, t: int) -> bool:
        """Dense collision check, skipped for edges already known to be valid."""
        key = _pair(s, t)
        if key in self.whitelist:
            return True
        if self.is_blacklisted(s, t):
            return False
        valid = self.world.is_valid_edge_dense(self.coords[s], self.coords[t], self.counters)
        if valid:
            self.whitelist[key] = None
        return valid

    def sparse_collision(self, s: int, t: int, d: int) -> Optional[tuple]:
        """Sparse check of an edge; validated edges pass without checking."""
        if _pair(s, t) in self.whitelist:
            return None
        return self.world.first_sparse_collision(self.coords[s], self.coords[t], d, self.counters)

    def edge_cost(self, s: int, t: int) -> float:
        """True cost of a validated edge, evaluated once and cached."""
        key = _pair(s, t)
        cost = self.whitelist.get(key)
        if cost is None:
            if key not in self.whitelist:
                raise ValueError(f"cost requested for unvalidated edge {(s, t)}")
            cost = self.objective.true_edge_cost(self.coords[key[0]], self.coords[key[1]], self.counters)
            self.whitelist[key] = cost
        return cost

    # -- forward tree -----------------------------------------------------------------

    def gF(self, x: int) -> float:
        return self.g.get(x, math.inf)

    def in_forward_tree(self, x: int) -> bool:
        return x in self.g

    def is_forward_edge(self, s: int, t: int) -> bool:
        return self.parent.get(t) == s

    def is_forward_ancestor(self, a: int, x: int) -> bool:
        while x is not None:
            if x == a:
                return True
            x = self.parent.get(x)
        return False

    def set_forward_parent(self, t: int, s: int, cost: float) -> List[int]:
        """Connect or rewire ``t`` below ``s``; returns every state whose cost-to-come changed."""
        old = self.parent.get(t)
        if old is not None:
            self.children[old].discard(t)
            self._touch(old)
        self.parent[t] = s
        self.children.setdefault(s, set()).add(t)
        self._touch(s, t)
        self.g[t] = self.g[s] + cost
        changed = [t]
        stack = [t]
        while stack:
            u = stack.pop()
            for c in sorted(self.children.get(u, ())):
                self.g[c] = self.g[u] + self.edge_cost(u, c)
                changed.append(c)
                stack.append(c)
        return changed

    def _detach_subtree(self, root: int) -> List[int]:
        removed = []
        p = self.parent.pop(root, None)
        if p is not None:
            self.children[p].discard(root)
            self._touch(p)
        stack = [root]
        while stack:
            u = stack.pop()
            removed.append(u)
            self.g.pop(u, None)
            self._touch(u)
            for c in self.children.pop(u, ()):
                self.parent.pop(c, None)
                stack.append(c)
        return removed

    def forward_path(self, x: int) -> List[int]:
        path = [x]
        while path[-1] in self.parent:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def best_goal(self) -> Optional[int]:
        best, cost = None, math.inf
        for gl in self.goals:
            c = self.g.get(gl, math.inf)
            if c < cost:
                best, cost = gl, c
        return best

    def solution_cost(self) -> float:
        return min(self.g.get(gl, math.inf) for gl in self.goals)

    # -- pruning ----------------------------------------------------------------------

    def prune(self, c_current: float) -> Dict[str, int]:
        """Drop samples and forward vertices whose admissible total cost exceeds ``c_current``.

        Equality is kept. Pruned forward vertices take their subtrees with them;
        the start, the goals and the current solution path are never pruned.
        """
        counts = {"samples": 0, "vertices": 0}
        if math.isinf(c_current):
            return counts
        keep = {self.start, *self.goals}
        best = self.best_goal()
        if best is not None:
            keep.update(self.forward_path(best))
        doomed = [i for i in self.active if i not in keep and self.fhat(i) > c_current]
        for i in sorted(v for v in self.g if v not in keep and self.fhat(v) > c_current):
            if i in self.g:
                counts["vertices"] += len(self._detach_subtree(i))
        for i in doomed:
            self.active.discard(i)
            for j in self.blacklist.pop(i, ()):
                self.blacklist.get(j, set()).discard(i)
        if doomed:
            gone = set(doomed)
            self.whitelist = {e: c for e, c in self.whitelist.items() if e[0] not in gone and e[1] not in gone}
        counts["samples"] = len(doomed)
        self._nbr_cache.clear()
        return counts
