import math

import pytest

from itplan.bench import certify_record
from itplan.problem import ProblemDefinition, obstacle_free, wall_gap
from itplan.rrtstar import RrtStarSearch, default_max_edge_length


def test_obstacle_free_within_two_percent():
    prob = obstacle_free(2)
    rec = RrtStarSearch(prob, budget=5.0, seed=0, target_cost=0.7 * 1.02).run()
    assert rec.status == "solved"
    assert rec.final_cost <= 0.7 * 1.02


def test_unreachable_goal():
    ring = [((0.75, 0.4), (0.95, 0.42)), ((0.75, 0.58), (0.95, 0.6)),
            ((0.75, 0.4), (0.77, 0.6)), ((0.93, 0.4), (0.95, 0.6))]
    prob = ProblemDefinition(name="sealed", dimension=2, start=(0.15, 0.5), goals=[(0.85, 0.5)], obstacles=ring)
    rec = RrtStarSearch(prob, budget=0.2, seed=1).run()
    assert rec.status == "timeout" and math.isinf(rec.final_cost)


@pytest.mark.parametrize("seed", range(3))
def test_wall_gap_records_certify(seed):
    prob = wall_gap(2)
    rec = RrtStarSearch(prob, budget=1.0, seed=seed).run()
    assert rec.solved
    assert certify_record(rec, prob) == []
    assert rec.final_cost >= prob.optimum - 1e-12


def test_tree_is_consistent():
    prob = wall_gap(2)
    s = RrtStarSearch(prob, budget=0.3, seed=4)
    s.run()
    for v, p in enumerate(s.parent):
        if p is None:
            assert v == 0
            continue
        assert s.g[v] == pytest.approx(s.g[p] + math.dist(s.coords[p], s.coords[v]), rel=1e-9)
        assert math.dist(s.coords[p], s.coords[v]) <= s.max_edge_length + 1e-12
        assert prob.world.is_valid_edge_dense(s.coords[p], s.coords[v])


def test_max_edge_length_defaults():
    assert default_max_edge_length(wall_gap(8)) == 1.25
    prob = ProblemDefinition(name="p", dimension=3, start=(0.1,) * 3, goals=[(0.9,) * 3])
    assert default_max_edge_length(prob) == 0.3


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        RrtStarSearch(obstacle_free(2), max_edge_length=-1.0)
    with pytest.raises(ValueError):
        RrtStarSearch(obstacle_free(2), goal_bias=1.5)
