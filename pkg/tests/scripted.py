"""Searches over hand-built neighbour graphs."""
import math

from itplan.problem import ProblemDefinition

START, GOAL = (0.15, 0.5), (0.85, 0.5)


def scripted(cls, states=(), edges=(), obstacles=(), start=START, goal=GOAL, objective="path_length", **kw):
    """Build ``cls`` on a 2D problem whose graph is exactly ``edges``.

    Ids: start 0, goal 1, then ``states`` in order. Batching is disabled, so a
    run stops with reason ``exhausted`` once both searches are done.
    """
    prob = ProblemDefinition(name="scripted", dimension=2, start=start, goals=[goal], obstacles=list(obstacles),
                             objective_kind=objective)
    kw.setdefault("budget", math.inf)
    search = cls(prob, max_batches=0, **kw)
    g = search.graph
    for x in states:
        g._add_state(tuple(x))
    geo = {i: set() for i in g.active}
    for a, b in edges:
        geo[a].add(b)
        geo[b].add(a)
    g._geo = {i: sorted(v) for i, v in geo.items()}
    g.q = len(g.active)
    g._nbr_cache.clear()
    if hasattr(search, "resolution_trace"):
        search.resolution_trace.clear()
    search.reset_searches()
    return search


def drain_reverse(search, limit=100_000):
    for _ in range(limit):
        if not search.QR:
            return
        search.iterate_reverse()
    raise AssertionError("reverse search did not drain")


def admissible_adjacency(search):
    g = search.graph
    return {x: list(g.neighbor_costs(x)) for x in g.active}
