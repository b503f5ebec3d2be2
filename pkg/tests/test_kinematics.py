import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vinesim.kinematics import body_polyline, forward_kinematics, propagate_pose
from vinesim.model import Pose, Segment


def euler_rollout(segments, base=Pose(0.0, 0.0, 0.0), step=1e-6):
    """Independent oracle: integrate the curvature function with tiny steps."""
    x, y, heading = base
    for segment in segments:
        n = max(1, int(math.ceil(segment.length / step)))
        ds = segment.length / n
        for _ in range(n):
            x += ds * math.cos(heading)
            y += ds * math.sin(heading)
            heading += segment.curvature * ds
    return Pose(x, y, heading)


class TestForwardKinematics:
    def test_straight_segment(self):
        tip = forward_kinematics([Segment(1.0, 0.0)])
        assert tip == Pose(1.0, 0.0, 0.0)

    def test_half_circle(self):
        kappa = 2.0
        length = math.pi / kappa
        tip = forward_kinematics([Segment(length, kappa)])
        assert tip.x == pytest.approx(0.0, abs=1e-12)
        assert tip.y == pytest.approx(2.0 / kappa)
        assert tip.heading == pytest.approx(math.pi)

    def test_two_segment_s_curve_against_euler_oracle(self):
        segments = [Segment(0.5, 2.0), Segment(0.5, -2.0)]
        tip = forward_kinematics(segments)
        oracle = euler_rollout(segments)
        assert tip.x == pytest.approx(oracle.x, abs=1e-6)
        assert tip.y == pytest.approx(oracle.y, abs=1e-6)
        assert tip.heading == pytest.approx(oracle.heading, abs=1e-6)

    def test_starts_from_base_pose(self):
        base = Pose(1.0, 2.0, math.pi / 2)
        tip = forward_kinematics([Segment(1.0, 0.0)], base)
        assert tip.x == pytest.approx(1.0)
        assert tip.y == pytest.approx(3.0)

    def test_near_zero_curvature_treated_straight(self):
        tip = forward_kinematics([Segment(1.0, 1e-12)])
        assert tip == Pose(1.0, 0.0, 0.0)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(
        st.tuples(st.floats(min_value=0.01, max_value=0.8),
                  st.floats(min_value=-3.0, max_value=3.0)),
        min_size=1, max_size=5))
    def test_matches_euler_oracle(self, raw):
        segments = [Segment(length, kappa) for length, kappa in raw]
        tip = forward_kinematics(segments)
        oracle = euler_rollout(segments, step=1e-5)
        assert tip.x == pytest.approx(oracle.x, abs=1e-4)
        assert tip.y == pytest.approx(oracle.y, abs=1e-4)


class TestPropagatePose:
    def test_arc_continuity(self):
        whole = propagate_pose(Pose(0, 0, 0), 1.0, 1.5)
        half = propagate_pose(Pose(0, 0, 0), 0.5, 1.5)
        rejoined = propagate_pose(half, 0.5, 1.5)
        assert rejoined.x == pytest.approx(whole.x)
        assert rejoined.y == pytest.approx(whole.y)
        assert rejoined.heading == pytest.approx(whole.heading)


class TestBodyPolyline:
    def test_spacing_bound(self):
        points = body_polyline([Segment(1.0, 2.0)], max_spacing=0.01)
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            assert math.hypot(x1 - x0, y1 - y0) <= 0.0100001

    def test_endpoints(self):
        segments = [Segment(0.4, 1.0), Segment(0.3, -2.0)]
        points = body_polyline(segments)
        assert points[0] == (0.0, 0.0)
        tip = forward_kinematics(segments)
        assert points[-1][0] == pytest.approx(tip.x)
        assert points[-1][1] == pytest.approx(tip.y)

    def test_zero_length_segments_skipped(self):
        points = body_polyline([Segment(0.0, 1.0)])
        assert points == [(0.0, 0.0)]
