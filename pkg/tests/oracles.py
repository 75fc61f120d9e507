"""Independent reference computations used by the test-suite."""
from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction

import numpy as np


def brute_mutual_knn(points, k):
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    k = min(k, n - 1)
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    np.fill_diagonal(d, np.inf)
    knn = [set(np.argsort(row, kind="stable")[:k].tolist()) for row in d]
    return [sorted(j for j in knn[i] if i in knn[j]) for i in range(n)]


def dijkstra(adjacency, sources):
    """adjacency: dict node -> iterable of (neighbor, weight). Returns dict of distances."""
    dist = {s: 0.0 for s in sources}
    heap = [(0.0, s) for s in sources]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adjacency.get(u, ()):
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def cost_to_go_oracle(search):
    """Dijkstra of admissible edge costs from the goals over the planner's current neighbour graph."""
    g = search.graph
    adj = {}
    for x in g.active:
        adj[x] = list(g.neighbor_costs(x))
    # the neighbour relation can be asymmetric through tree edges; cost-to-go runs backwards
    rev = {}
    for x, row in adj.items():
        for y, c in row:
            rev.setdefault(y, []).append((x, c))
    return dijkstra(rev, list(g.goals))


def explicit_graph_optimum(world, objective, coords, neighbor_rows, start, goals, blacklist=()):
    """A* (Dijkstra with full dense validation) over an explicit graph.

    ``neighbor_rows`` maps node -> iterable of neighbours; ``blacklist`` holds
    unordered pairs removed from the graph.
    """
    banned = {frozenset(p) for p in blacklist}
    validity = {}

    def valid(a, b):
        key = (min(a, b), max(a, b))
        if key not in validity:
            validity[key] = world.is_valid_edge_dense(coords[key[0]], coords[key[1]])
        return validity[key]

    costs = {}

    def cost(a, b):
        key = (min(a, b), max(a, b))
        if key not in costs:
            costs[key] = objective.true_edge_cost(coords[key[0]], coords[key[1]])
        return costs[key]

    dist = {start: 0.0}
    heap = [(0.0, start)]
    done = set()
    goal_set = set(goals)
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u in goal_set:
            return d
        for v in neighbor_rows.get(u, ()):
            if frozenset((u, v)) in banned or not valid(u, v):
                continue
            nd = d + cost(u, v)
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return math.inf


def visibility_graph_optimum_2d(start, goal, boxes):
    """Shortest obstacle-avoiding path length among axis-aligned rectangles.

    The path may touch obstacle corners and edges (the infimum over paths that
    stay strictly outside the closed boxes).
    """
    nodes = [tuple(start), tuple(goal)]
    for lo, hi in boxes:
        nodes += [(lo[0], lo[1]), (lo[0], hi[1]), (hi[0], lo[1]), (hi[0], hi[1])]
    nodes = [p for p in nodes if all(0.0 <= v <= 1.0 for v in p)]

    def blocked(a, b):
        for lo, hi in boxes:
            # sample the open segment densely against the open box interior
            for t in np.linspace(0.0, 1.0, 2001)[1:-1]:
                x = a[0] + t * (b[0] - a[0])
                y = a[1] + t * (b[1] - a[1])
                if lo[0] < x < hi[0] and lo[1] < y < hi[1]:
                    return True
        return False

    adj = {i: [] for i in range(len(nodes))}
    for i, j in itertools.combinations(range(len(nodes)), 2):
        if not blocked(nodes[i], nodes[j]):
            w = math.dist(nodes[i], nodes[j])
            adj[i].append((j, w))
            adj[j].append((i, w))
    return dijkstra(adj, [0]).get(1, math.inf)


def binomial_median_ci_ranks(n, confidence):
    """1-based order-statistic ranks (l, u) from exact binomial(n, 1/2) CDF sums.

    l is the largest rank whose lower tail mass stays within alpha/2; u mirrors it.
    """
    alpha = Fraction(1) - Fraction(confidence).limit_denominator(10**6)
    total = Fraction(0)
    l = 0
    for k in range(n + 1):
        total += Fraction(math.comb(n, k), 2**n)
        if total <= alpha / 2:
            l = k
        else:
            break
    return l, n + 1 - l
