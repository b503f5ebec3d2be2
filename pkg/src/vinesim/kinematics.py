"""Piecewise-constant-curvature chain rollout for the everted body."""

from __future__ import annotations

import math
from collections.abc import Iterable

from .model import Pose, Segment

# Below this |curvature| a segment is integrated as a straight line.
STRAIGHT_CURVATURE = 1e-9


def propagate_pose(pose: Pose, length: float, curvature: float) -> Pose:
    """Advance a pose along one circular arc (straight when curvature ~ 0)."""
    x, y, heading = pose
    if abs(curvature) < STRAIGHT_CURVATURE:
        return Pose(x + length * math.cos(heading),
                    y + length * math.sin(heading),
                    heading)
    new_heading = heading + curvature * length
    x += (math.sin(new_heading) - math.sin(heading)) / curvature
    y += (math.cos(heading) - math.cos(new_heading)) / curvature
    return Pose(x, y, new_heading)


def forward_kinematics(segments: Iterable[Segment],
                       base_pose: Pose = Pose(0.0, 0.0, 0.0)) -> Pose:
    """Tip pose of the segment chain rolled out from the base pose."""
    pose = base_pose
    for segment in segments:
        pose = propagate_pose(pose, segment.length, segment.curvature)
    return pose


def body_polyline(segments: Iterable[Segment],
                  base_pose: Pose = Pose(0.0, 0.0, 0.0),
                  max_spacing: float = 0.01) -> list[tuple[float, float]]:
    """Sample the body centerline at most max_spacing apart along the arc.

    Always includes the base point and the exact tip point.
    """
    pose = base_pose
    points = [(pose.x, pose.y)]
    for segment in segments:
        if segment.length <= 0:
            continue
        n = max(1, math.ceil(segment.length / max_spacing))
        step = segment.length / n
        for _ in range(n):
            pose = propagate_pose(pose, step, segment.curvature)
            points.append((pose.x, pose.y))
    return points
