"""Storage/fence rectangles, boundary discretization and distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from jamsched.errors import ParameterError


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in meters."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        coords = (self.min_x, self.min_y, self.max_x, self.max_y)
        if not all(math.isfinite(v) for v in coords):
            raise ParameterError(f"non-finite rectangle {coords}")
        if not (self.min_x < self.max_x and self.min_y < self.max_y):
            raise ParameterError(f"degenerate rectangle {coords}")

    @classmethod
    def centered(cls, outer: "Rect", width: float, height: float) -> "Rect":
        cx = (outer.min_x + outer.max_x) / 2
        cy = (outer.min_y + outer.max_y) / 2
        return cls(cx - width / 2, cy - height / 2, cx + width / 2, cy + height / 2)

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> tuple[Point, Point, Point, Point]:
        """Counter-clockwise from the lower-left corner."""
        return (
            Point(self.min_x, self.min_y),
            Point(self.max_x, self.min_y),
            Point(self.max_x, self.max_y),
            Point(self.min_x, self.max_y),
        )

    def contains(self, p: Point) -> bool:
        """Closed containment."""
        return self.min_x <= p.x <= self.max_x and self.min_y <= p.y <= self.max_y

    def strictly_contains(self, other: "Rect") -> bool:
        return (
            self.min_x < other.min_x
            and self.min_y < other.min_y
            and other.max_x < self.max_x
            and other.max_y < self.max_y
        )

    def distance_to_boundary(self, p: Point) -> float:
        """Distance from ``p`` to the rectangle outline (zero on the outline)."""
        if self.contains(p):
            return min(
                p.x - self.min_x, self.max_x - p.x, p.y - self.min_y, self.max_y - p.y
            )
        dx = max(self.min_x - p.x, 0.0, p.x - self.max_x)
        dy = max(self.min_y - p.y, 0.0, p.y - self.max_y)
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class DiscretizedBoundary:
    points: tuple[Point, ...]
    step: float

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)


def discretize_boundary(rect: Rect, step: float) -> DiscretizedBoundary:
    """Walk the outline corner to corner, emitting a point every ``step`` meters.

    When an edge length is not a multiple of ``step`` the last segment of that
    edge is shorter; every corner is emitted exactly once.
    """
    if not step > 0 or not math.isfinite(step):
        raise ParameterError(f"discretization step must be positive, got {step}")
    corners = rect.corners()
    points: list[Point] = []
    for k in range(4):
        start, end = corners[k], corners[(k + 1) % 4]
        length = math.hypot(end.x - start.x, end.y - start.y)
        ux, uy = (end.x - start.x) / length, (end.y - start.y) / length
        points.append(start)
        i = 1
        # tolerance keeps e.g. 100/2 from emitting a near-duplicate of the corner
        while i * step < length - 1e-9 * max(1.0, length):
            points.append(Point(start.x + ux * i * step, start.y + uy * i * step))
            i += 1
    return DiscretizedBoundary(tuple(points), float(step))


def distance(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def distance_to_storage(p: Point, storage: Rect) -> float:
    """Minimum distance from ``p`` to the storage outline.

    For points outside the rectangle this is the usual clamp distance.
    """
    return storage.distance_to_boundary(p)
