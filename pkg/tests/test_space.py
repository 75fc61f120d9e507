import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itplan.space import (InformedSampler, ProlateHyperspheroid, SpaceDescriptor, distance, in_open_cube,
                          informed_measure, interpolate, sample_informed, sample_uniform, unit_ball_measure)

unit = st.floats(min_value=1e-6, max_value=1 - 1e-6, allow_nan=False)


def points(n):
    return st.tuples(*[unit] * n)


class TestDistance:
    def test_identity(self):
        assert distance((0.2, 0.2), (0.2, 0.2)) == 0.0

    def test_scaled_345_triangle(self):
        assert distance((0.1, 0.1), (0.7, 0.9)) == pytest.approx(1.0, rel=1e-15)

    def test_cube_diagonal_in_16d(self):
        eps = 1e-9
        d = distance((eps,) * 16, (1 - eps,) * 16)
        assert d == pytest.approx(4.0, rel=1e-8)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            distance((0.1, 0.2), (0.1, 0.2, 0.3))


class TestInterpolate:
    def test_midpoint(self):
        assert interpolate((0.0, 0.0, 0.0), (1.0, 1.0, 1.0), 0.5) == (0.5, 0.5, 0.5)

    def test_endpoints_exact(self):
        a, b = (0.1, 0.7), (0.3, 0.2)
        assert interpolate(a, b, 0.0) == a
        assert interpolate(a, b, 1.0) == b

    def test_affine_example(self):
        assert interpolate((0.1, 0.5), (0.9, 0.5), 0.25) == pytest.approx((0.3, 0.5), rel=1e-15)

    @pytest.mark.parametrize("t", [-0.1, 1.5, math.nan])
    def test_out_of_range(self, t):
        with pytest.raises(ValueError):
            interpolate((0.1,), (0.2,), t)

    @settings(max_examples=300, deadline=None)
    @given(points(3), points(3), st.floats(0, 1))
    def test_distance_scales_with_t(self, a, b, t):
        d = distance(a, b)
        assert distance(a, interpolate(a, b, t)) == pytest.approx(t * d, rel=1e-12, abs=1e-15)


class TestUniformSampling:
    def test_inside_open_cube(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            assert in_open_cube(sample_uniform(rng, 5))

    def test_seed_determinism(self):
        a = [sample_uniform(np.random.default_rng(7), 3) for _ in range(1)]
        b = [sample_uniform(np.random.default_rng(7), 3) for _ in range(1)]
        assert a == b
        r1, r2 = np.random.default_rng(11), np.random.default_rng(11)
        assert [sample_uniform(r1, 4) for _ in range(100)] == [sample_uniform(r2, 4) for _ in range(100)]

    def test_quadrant_fraction(self):
        # Binomial(1e5, 0.25) has standard deviation 0.00137; 0.01 is over 7 sigma.
        rng = np.random.default_rng(123)
        pts = np.array([sample_uniform(rng, 2) for _ in range(100_000)])
        frac = np.mean((pts[:, 0] <= 0.5) & (pts[:, 1] <= 0.5))
        assert abs(frac - 0.25) < 0.01

    def test_zero_draws_are_redrawn(self):
        class Rigged:
            def __init__(self):
                self.calls = 0

            def random(self, n):
                self.calls += 1
                return np.zeros(n) if self.calls == 1 else np.full(n, 0.5)

        rng = Rigged()
        assert sample_uniform(rng, 2) == (0.5, 0.5)
        assert rng.calls == 2


def ellipse_member(x, start, goal, c):
    return math.dist(start, x) + math.dist(x, goal) < c


class TestInformedSampling:
    start, goal, c = (0.25, 0.5), (0.75, 0.5), 0.6

    def test_infinite_cost_is_uniform(self):
        r1, r2 = np.random.default_rng(3), np.random.default_rng(3)
        assert sample_informed(self.start, [self.goal], math.inf, r1) == sample_uniform(r2, 2)

    def test_degenerate_returns_none(self):
        assert sample_informed(self.start, [self.goal], 0.5, np.random.default_rng(0)) is None
        assert sample_informed(self.start, [self.goal], 0.4, np.random.default_rng(0)) is None

    def test_samples_inside_ellipse(self):
        rng = np.random.default_rng(5)
        a = 0.3
        b = math.sqrt(0.36 - 0.25) / 2
        assert b == pytest.approx(0.16583, abs=1e-5)
        for _ in range(2000):
            x = sample_informed(self.start, [self.goal], self.c, rng)
            assert ellipse_member(x, self.start, self.goal, self.c)
            # axis-aligned ellipse centred at (0.5, 0.5)
            assert ((x[0] - 0.5) / a) ** 2 + ((x[1] - 0.5) / b) ** 2 < 1 + 1e-12

    def test_samples_fill_ellipse_uniformly(self):
        # The fraction of informed samples with x < 0.5 should be one half by symmetry,
        # and the fraction inside the inner half-scale ellipse one quarter.
        rng = np.random.default_rng(9)
        pts = np.array([sample_informed(self.start, [self.goal], self.c, rng) for _ in range(20_000)])
        a, b = 0.3, math.sqrt(0.11) / 2
        inner = (((pts[:, 0] - 0.5) / a) ** 2 + ((pts[:, 1] - 0.5) / b) ** 2) < 0.25
        assert abs(np.mean(pts[:, 0] < 0.5) - 0.5) < 0.015
        assert abs(np.mean(inner) - 0.25) < 0.015

    def test_rotated_spheroid_membership_in_3d(self):
        rng = np.random.default_rng(1)
        s, g = (0.2, 0.3, 0.4), (0.7, 0.6, 0.5)
        c = math.dist(s, g) * 1.2
        for _ in range(2000):
            x = sample_informed(s, [g], c, rng)
            assert math.dist(s, x) + math.dist(x, g) < c
            assert in_open_cube(x)

    def test_multi_goal_samples_in_union(self):
        rng = np.random.default_rng(2)
        s, goals = (0.5, 0.5), [(0.2, 0.2), (0.8, 0.3)]
        c = 0.55
        for _ in range(1000):
            x = sample_informed(s, goals, c, rng)
            assert math.dist(s, x) + min(math.dist(x, gl) for gl in goals) < c

    def test_sample_stream_bit_identical(self):
        def stream(seed):
            rng = np.random.default_rng(seed)
            sampler = InformedSampler(self.start, [self.goal])
            return [sampler.sample(rng, self.c) for _ in range(200)]

        assert stream(4) == stream(4)


class TestInformedMeasure:
    start, goal = (0.25, 0.5), (0.75, 0.5)

    def test_infinite_cost_caps_at_one(self):
        assert informed_measure(self.start, [self.goal], math.inf) == 1.0

    def test_ellipse_area_formula(self):
        expected = math.pi * 0.3 * math.sqrt(0.36 - 0.25) / 2
        assert expected == pytest.approx(0.15630, abs=1e-5)
        assert informed_measure(self.start, [self.goal], 0.6) == pytest.approx(expected, rel=1e-12)

    def test_area_against_monte_carlo(self):
        rng = np.random.default_rng(77)
        pts = rng.random((400_000, 2))
        hits = np.hypot(pts[:, 0] - 0.25, pts[:, 1] - 0.5) + np.hypot(pts[:, 0] - 0.75, pts[:, 1] - 0.5) < 0.6
        assert informed_measure(self.start, [self.goal], 0.6) == pytest.approx(hits.mean(), rel=0.01)

    def test_below_min_distance_is_whole_space(self):
        assert informed_measure(self.start, [self.goal], 0.3) == 1.0

    def test_large_cost_capped(self):
        assert informed_measure(self.start, [self.goal], 5.0) == 1.0


def test_unit_ball_measure():
    assert unit_ball_measure(1) == pytest.approx(2.0)
    assert unit_ball_measure(2) == pytest.approx(math.pi)
    assert unit_ball_measure(3) == pytest.approx(4 * math.pi / 3)


def test_space_descriptor_rejects_bad_dimension():
    with pytest.raises(ValueError):
        SpaceDescriptor(0)
    assert SpaceDescriptor(16).dimension == 16


def test_spheroid_measure_in_3d():
    p = ProlateHyperspheroid((0.2, 0.5, 0.5), (0.8, 0.5, 0.5), 1.0)
    a, b = 0.5, math.sqrt(1.0 - 0.36) / 2
    assert p.measure == pytest.approx(4 / 3 * math.pi * a * b * b, rel=1e-12)
