"""Planar primitives: points, cubic Bezier chains, polylines.

All curve math funnels through the kernel backend (compiled or numpy) so the
measurements used for scoring are the ones tested here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels

EDGE_EPS = 1e-12


class Point(NamedTuple):
    x: float
    y: float


CubicSegment = tuple[Point, Point, Point, Point]


def _check_finite(points) -> None:
    for p in points:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise ValueError(f"non-finite coordinate: {p!r}")


@dataclass(frozen=True)
class BezierPath:
    """A chain of cubic segments; junctions are expected to coincide exactly.

    Continuity is a soft invariant: library constructors always produce
    continuous chains, but a hand-built path with disagreeing junctions is
    representable so that glyph validation can report it.
    """

    segments: tuple[CubicSegment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("BezierPath needs at least one segment")
        for seg in self.segments:
            if len(seg) != 4:
                raise ValueError("each cubic segment needs exactly 4 control points")
            _check_finite(seg)

    @property
    def start(self) -> Point:
        return self.segments[0][0]

    @property
    def end(self) -> Point:
        return self.segments[-1][3]

    def control_points(self) -> list[Point]:
        return [p for seg in self.segments for p in seg]

    def is_continuous(self) -> bool:
        return all(
            self.segments[i][3] == self.segments[i + 1][0]
            for i in range(len(self.segments) - 1)
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.segments, dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "BezierPath":
        segs = tuple(
            tuple(Point(float(x), float(y)) for x, y in seg) for seg in np.asarray(arr)
        )
        return cls(segs)  # type: ignore[arg-type]

    def map_points(self, fn: Callable[[Point], Point]) -> "BezierPath":
        return BezierPath(
            tuple(tuple(fn(p) for p in seg) for seg in self.segments)  # type: ignore[arg-type]
        )

    def reversed(self) -> "BezierPath":
        return BezierPath(tuple(tuple(reversed(seg)) for seg in reversed(self.segments)))  # type: ignore[arg-type]


@dataclass(frozen=True)
class Polyline:
    """An open polyline; zero-length edges are dropped at construction."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        _check_finite(self.vertices)
        cleaned: list[Point] = []
        for p in self.vertices:
            q = Point(float(p[0]), float(p[1]))
            if cleaned and math.hypot(q.x - cleaned[-1].x, q.y - cleaned[-1].y) < EDGE_EPS:
                continue
            cleaned.append(q)
        if len(cleaned) < 2:
            raise ValueError("Polyline needs at least two distinct vertices")
        object.__setattr__(self, "vertices", tuple(cleaned))

    def as_array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=np.float64)


def flatten(path: BezierPath, segments_per_curve: int = 32) -> Polyline:
    """Sample each cubic at segments_per_curve+1 uniform parameter values.

    Shared junction samples appear once; segment endpoints are reproduced
    exactly (de Casteljau in lerp form).
    """
    if segments_per_curve < 2:
        raise ValueError("segments_per_curve must be at least 2")
    pts = _kernels.sample_chain(path.as_array(), segments_per_curve)
    return Polyline(tuple(Point(float(x), float(y)) for x, y in pts))


def arc_length(poly: Polyline) -> float:
    """Total Euclidean length of the polyline's edges."""
    length, _, _ = _kernels.polyline_stats(poly.as_array())
    return float(length)


def turning_angles(poly: Polyline) -> list[float]:
    """Absolute exterior angle at each interior vertex, each in [0, pi].

    Returns vertex_count - 2 angles; an empty list for a two-vertex line.
    """
    _, angles, _ = _kernels.polyline_stats(poly.as_array())
    return [float(a) for a in angles]


def normalize_to_unit_box(path: BezierPath) -> BezierPath:
    """Uniformly scale/translate so the control-point bbox fits [0,1]^2.

    The larger axis touches the box; the shorter axis is centered.  Applying
    it twice changes nothing (up to float rounding).
    """
    pts = path.control_points()
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    w = max_x - min_x
    h = max_y - min_y
    extent = max(w, h)
    if extent < EDGE_EPS:
        raise ValueError("cannot normalize a path whose control points coincide")
    s = 1.0 / extent
    off_x = (1.0 - w * s) / 2.0
    off_y = (1.0 - h * s) / 2.0

    def tx(p: Point) -> Point:
        return Point((p.x - min_x) * s + off_x, (p.y - min_y) * s + off_y)

    return path.map_points(tx)
