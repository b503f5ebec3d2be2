"""Small planar geometry helpers for the contact and grasp checks."""

from __future__ import annotations

import math

Point = tuple[float, float]


def point_in_convex_polygon(point: Point, polygon: tuple[Point, ...],
                            tolerance: float = 0.0) -> bool:
    """True when the point lies strictly inside the convex polygon, more than
    `tolerance` past every edge. Vertices may wind either way."""
    n = len(polygon)
    if n < 3:
        return False
    sign = 0
    for i in range(n):
        ax, ay = polygon[i]
        bx, by = polygon[(i + 1) % n]
        cross = (bx - ax) * (point[1] - ay) - (by - ay) * (point[0] - ax)
        edge_len = math.hypot(bx - ax, by - ay)
        if edge_len == 0:
            continue
        dist = cross / edge_len
        if abs(dist) <= tolerance:
            return False
        side = 1 if dist > 0 else -1
        if sign == 0:
            sign = side
        elif side != sign:
            return False
    return sign != 0


def segment_distance(point: Point, a: Point, b: Point) -> float:
    """Distance from a point to the segment ab."""
    ax, ay = a
    bx, by = b
    px, py = point
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / denom))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def distance_to_polygon(point: Point, polygon: tuple[Point, ...]) -> float:
    """Signed-ish distance: 0 on the boundary or outside contact; negative
    depth when strictly inside."""
    n = len(polygon)
    boundary = min(
        segment_distance(point, polygon[i], polygon[(i + 1) % n])
        for i in range(n))
    if point_in_convex_polygon(point, polygon):
        return -boundary
    return boundary
