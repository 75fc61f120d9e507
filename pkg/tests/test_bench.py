import math
import random
from fractions import Fraction

import pytest

from itplan.bench import (aggregate, certify, certify_record, log_time_grid, lower_median, median_ci_ranks,
                          read_records, run_trial, run_trials, thread_count, trial_filename, write_records)
from itplan.problem import obstacle_free, wall_gap
from itplan.records import Event, RunRecord

from oracles import binomial_median_ci_ranks


def fake(planner, seed, events, budget=10.0, problem="p"):
    return RunRecord(planner=planner, problem=problem, seed=seed, budget=budget,
                     events=[Event(t, c, 0, [], {}) for t, c in events],
                     final_cost=events[-1][1] if events else math.inf,
                     status="solved" if events else "timeout")


class TestRunning:
    def test_counts_order_and_seeds(self):
        recs = run_trials(obstacle_free(2), ["ait", "eit"], 3, 0.05, base_seed=10)
        assert [(r.planner, r.seed) for r in recs] == [("ait", 10), ("ait", 11), ("ait", 12),
                                                      ("eit", 10), ("eit", 11), ("eit", 12)]

    def test_timeout_status(self):
        rec = run_trial(wall_gap(2), "ait", 0, 0.001)
        assert rec.status == "timeout" and rec.stop_reason == "budget"

    def test_parallel_matches_serial(self):
        prob = obstacle_free(2)
        serial = run_trials(prob, ["eit", "rrtstar"], 2, 0.05, threads=1)
        parallel = run_trials(prob, ["eit", "rrtstar"], 2, 0.05, threads=2)
        assert [r.to_jsonl() for r in serial] == [r.to_jsonl() for r in parallel]

    def test_planner_errors_become_failed_records(self):
        rec = run_trial(obstacle_free(2), "ait", 0, 0.1, {"batch_size": 0})
        assert rec.status == "failed" and rec.stop_reason == "error"
        assert "batch_size" in rec.diagnostic

    def test_unknown_planner(self):
        with pytest.raises(ValueError):
            run_trials(obstacle_free(2), ["prm"], 1, 0.1)

    def test_problem_overrides_reach_planner(self):
        rec = run_trial(wall_gap(2), "rrtstar", 0, 0.05)
        assert rec.params["max_edge_length"] == 0.3

    def test_thread_env(self, monkeypatch):
        monkeypatch.delenv("PLAN_THREADS", raising=False)
        assert thread_count() == 1
        monkeypatch.setenv("PLAN_THREADS", "3")
        assert thread_count() == 3
        monkeypatch.setenv("PLAN_THREADS", "zero")
        with pytest.raises(ValueError):
            thread_count()

    def test_file_round_trip(self, tmp_path):
        recs = run_trials(obstacle_free(2), ["eit"], 2, 0.05)
        paths = write_records(recs, tmp_path)
        assert [p.name for p in paths] == [trial_filename(r) for r in recs]
        assert paths[1].name == "obstacle_free_2d__eit__seed000001.jsonl"
        assert read_records(tmp_path) == recs


class TestCiRanks:
    def test_fifty_trials(self):
        assert median_ci_ranks(50, 0.99) == (15, 36)

    @pytest.mark.parametrize("n", [10, 25, 50, 51, 100, 333])
    @pytest.mark.parametrize("conf", [0.9, 0.95, 0.99])
    def test_matches_exact_fractions(self, n, conf):
        l, _ = binomial_median_ci_ranks(n, Fraction(str(conf)))
        # too few trials for the confidence: the interval widens to the extreme ranks
        l = max(l, 1)
        assert median_ci_ranks(n, conf) == (l, n + 1 - l)

    def test_tiny_samples_use_extremes(self):
        assert median_ci_ranks(3, 0.99) == (1, 3)


class TestAggregate:
    def test_half_solved_median(self):
        recs = [fake("a", i, [(0.5, 1.0)]) for i in range(25)] + [fake("a", 25 + i, []) for i in range(25)]
        st = aggregate(recs, grid=[1.0, 10.0]).get("p", "a")
        assert st.median_cost == [1.0, 1.0]
        assert st.success_rate == [0.5, 0.5]
        assert st.ci_lower == [1.0, 1.0] and st.ci_upper == [math.inf, math.inf]

    def test_all_unsolved(self):
        st = aggregate([fake("a", i, []) for i in range(10)], grid=[1.0]).get("p", "a")
        assert st.median_cost == [math.inf] and st.success_rate == [0.0]
        assert st.median_initial_time == math.inf

    def test_lower_median(self):
        assert lower_median([4, 1, 3, 2]) == 2
        assert lower_median([3, 1, 2]) == 2

    def test_permutation_invariant(self):
        rng = random.Random(0)
        recs = [fake(p, i, sorted(((rng.random(), 2 - rng.random()),), reverse=True))
                for p in "ab" for i in range(20)]
        a = aggregate(recs).rows()
        rng.shuffle(recs)
        assert aggregate(recs).rows() == a

    def test_band_contains_median_and_success_is_monotone(self):
        rng = random.Random(1)
        recs = []
        for i in range(50):
            t, c, evs = rng.uniform(0.01, 5), rng.uniform(1, 2), []
            while t < 10 and c > 0.7:
                evs.append((t, c))
                t, c = t + rng.uniform(0.1, 3), c - rng.uniform(0.01, 0.3)
            recs.append(fake("a", i, evs))
        st = aggregate(recs).get("p", "a")
        for lo, med, hi in zip(st.ci_lower, st.median_cost, st.ci_upper):
            assert lo <= med <= hi
        assert all(a <= b for a, b in zip(st.success_rate, st.success_rate[1:]))
        assert all(a >= b for a, b in zip(st.median_cost, st.median_cost[1:]))

    def test_log_grid(self):
        g = log_time_grid(10.0, 5)
        assert g[0] == pytest.approx(0.01) and g[-1] == pytest.approx(10.0)
        assert all(b / a == pytest.approx(g[1] / g[0]) for a, b in zip(g, g[1:]))

    def test_csv(self, tmp_path):
        recs = [fake("a", i, [(0.5, 1.0 + i)]) for i in range(5)]
        path = tmp_path / "s.csv"
        aggregate(recs, grid_points=3).write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "problem,planner,quantity,time,value"
        assert "p,a,trials,,5.0" in lines


class TestCertify:
    def test_real_runs_pass(self):
        prob = wall_gap(2)
        recs = run_trials(prob, ["ait", "eit", "rrtstar"], 2, 0.3)
        assert any(r.events for r in recs)
        assert certify(recs) == []

    def test_tampered_cost_detected(self):
        prob = wall_gap(2)
        rec = run_trial(prob, "eit", 0, 0.3)
        rec.events[-1].cost *= 0.99
        assert any("recomputed cost" in f for f in certify_record(rec))

    def test_colliding_path_detected(self):
        prob = wall_gap(2)
        rec = run_trial(prob, "eit", 0, 0.3)
        straight = [list(prob.start), list(prob.goals[0])]
        rec.events[-1].path = straight
        rec.events[-1].cost = 0.7
        assert any("collision" in f for f in certify_record(rec))

    def test_non_monotone_detected(self):
        rec = fake("a", 0, [(0.1, 1.0), (0.2, 1.0)])
        rec.problem_def = wall_gap(2).to_dict()
        assert any("does not improve" in f for f in certify_record(rec))

    def test_missing_problem(self):
        assert certify_record(fake("a", 0, [])) != []
