"""Glyph model: an anchored single-stroke cubic chain plus its generator.

A glyph runs from (0, height(start_anchor)) to (1, height(end_anchor)).  Its
editable skeleton is a list of interior on-curve knots in [0,1]^2; the cubic
chain is derived from anchors+knots by a uniform Catmull-Rom construction
with clamped end tangents.  That construction keeps every derived handle
within sqrt(2)/6 of its knot, so all control points stay inside the permitted
[-0.25, 1.25]^2 frame by construction, and it expresses any knot count,
including zero (a single cubic whose handles sit on the straight chord).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

from .geometry import BezierPath, Point

ANCHOR_HEIGHTS = (0.0, 0.5, 1.0)
HARD_MAX_INTERIOR = 16
COORD_LO, COORD_HI = -0.25, 1.25
DEFAULT_MOVE_HALFWIDTH = 0.15

GLYPH_MUTATION_KINDS = ("add_point", "remove_point", "move_point", "mirror_x", "mirror_y")


class AnchorLevel(IntEnum):
    """Vertical connection band: 0 = baseline, 1 = midline, 2 = topline."""

    BOTTOM = 0
    MIDDLE = 1
    TOP = 2

    @property
    def height(self) -> float:
        return ANCHOR_HEIGHTS[self]


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs for random glyph generation.

    ``count_decay`` weights interior-knot count k by decay**(k - min), biasing
    toward fewer points; 1.0 gives the uniform draw.  ``start_anchor`` /
    ``end_anchor`` pin a level; None draws uniformly from {0, 1, 2}.
    """

    min_interior: int = 1
    max_interior: int = 6
    count_decay: float = 0.7
    start_anchor: int | None = None
    end_anchor: int | None = None

    def validate(self) -> None:
        if self.min_interior < 0:
            raise ValueError("min_interior must be >= 0")
        if self.max_interior < self.min_interior:
            raise ValueError("max_interior must be >= min_interior")
        if self.max_interior > HARD_MAX_INTERIOR:
            raise ValueError(f"max_interior must be <= {HARD_MAX_INTERIOR}")
        if not self.count_decay > 0.0:
            raise ValueError("count_decay must be positive")
        for name in ("start_anchor", "end_anchor"):
            lvl = getattr(self, name)
            if lvl is not None and lvl not in (0, 1, 2):
                raise ValueError(f"{name} must be one of 0, 1, 2")

    def to_dict(self) -> dict:
        return {
            "min_interior": self.min_interior,
            "max_interior": self.max_interior,
            "count_decay": self.count_decay,
            "start_anchor": self.start_anchor,
            "end_anchor": self.end_anchor,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationConfig":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


@dataclass(frozen=True)
class Glyph:
    """Immutable glyph: identity, anchor levels, knot skeleton, derived path."""

    id: str
    start_anchor: AnchorLevel
    end_anchor: AnchorLevel
    knots: tuple[Point, ...]
    path: BezierPath

    def __post_init__(self) -> None:
        digest = hash((self.id, int(self.start_anchor), int(self.end_anchor), self.knots, self.path.segments))
        object.__setattr__(self, "_hash", digest)

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    @property
    def interior_points(self) -> int:
        return len(self.knots)


class MutationOutcome(NamedTuple):
    """Mutation result; ``applied`` is False when the op was not applicable."""

    glyph: Glyph
    applied: bool


def anchor_point(level: AnchorLevel, at_end: bool) -> Point:
    return Point(1.0 if at_end else 0.0, AnchorLevel(level).height)


def build_path(start: AnchorLevel, end: AnchorLevel, knots: tuple[Point, ...]) -> BezierPath:
    """Catmull-Rom chain through [start anchor, *knots, end anchor].

    Tangent at P_i is (P_{i+1} - P_{i-1}) / 2 with clamped (duplicated)
    endpoints; handles sit at one third of the tangent.  Coordinate-wise
    arithmetic keeps constant coordinates exact, so e.g. a level-to-same-level
    chord stays exactly straight.
    """
    pts = [anchor_point(start, at_end=False), *knots, anchor_point(end, at_end=True)]
    n = len(pts)
    ext = [pts[0], *pts, pts[-1]]
    tangents = [
        Point((ext[i + 2].x - ext[i].x) * 0.5, (ext[i + 2].y - ext[i].y) * 0.5)
        for i in range(n)
    ]
    third = 1.0 / 3.0
    segments = []
    for i in range(n - 1):
        p, q = pts[i], pts[i + 1]
        mp, mq = tangents[i], tangents[i + 1]
        segments.append(
            (
                p,
                Point(p.x + mp.x * third, p.y + mp.y * third),
                Point(q.x - mq.x * third, q.y - mq.y * third),
                q,
            )
        )
    return BezierPath(tuple(segments))


def _draw_count(rng: random.Random, config: GenerationConfig) -> int:
    lo, hi = config.min_interior, config.max_interior
    if lo == hi:
        return lo
    weights = [config.count_decay ** (k - lo) for k in range(lo, hi + 1)]
    r = rng.random() * sum(weights)
    acc = 0.0
    for k, w in zip(range(lo, hi + 1), weights):
        acc += w
        if r < acc:
            return k
    return hi


def generate_glyph(seed: int, config: GenerationConfig = GenerationConfig()) -> Glyph:
    """Deterministically generate a glyph from a 64-bit seed.

    Draw order is fixed: id bits, start level (unless pinned), end level
    (unless pinned), interior count, then knot coordinates in order.
    """
    config.validate()
    rng = random.Random(seed)
    gid = f"g{rng.getrandbits(48):012x}"
    start = AnchorLevel(config.start_anchor if config.start_anchor is not None else rng.randrange(3))
    end = AnchorLevel(config.end_anchor if config.end_anchor is not None else rng.randrange(3))
    count = _draw_count(rng, config)
    knots = tuple(Point(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)) for _ in range(count))
    return Glyph(gid, start, end, knots, build_path(start, end, knots))


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def mutate_glyph(
    g: Glyph,
    kind: str,
    rng: random.Random,
    *,
    max_interior: int = HARD_MAX_INTERIOR,
    move_halfwidth: float = DEFAULT_MOVE_HALFWIDTH,
) -> MutationOutcome:
    """Apply one mutation; keeps the glyph id (same lineage, new geometry).

    add/remove/move edit the knot skeleton and rebuild the chain; the mirrors
    transform the existing path pointwise, so they are exact involutions up to
    float rounding.  Ops that cannot apply (remove/move with no knots, add at
    the cap) return the original glyph with ``applied=False``.
    """
    if kind == "add_point":
        if len(g.knots) >= min(max_interior, HARD_MAX_INTERIOR):
            return MutationOutcome(g, False)
        idx = rng.randrange(len(g.knots) + 1)
        pt = Point(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0))
        knots = g.knots[:idx] + (pt,) + g.knots[idx:]
    elif kind == "remove_point":
        if not g.knots:
            return MutationOutcome(g, False)
        idx = rng.randrange(len(g.knots))
        knots = g.knots[:idx] + g.knots[idx + 1 :]
    elif kind == "move_point":
        if not g.knots:
            return MutationOutcome(g, False)
        idx = rng.randrange(len(g.knots))
        dx = rng.uniform(-move_halfwidth, move_halfwidth)
        dy = rng.uniform(-move_halfwidth, move_halfwidth)
        old = g.knots[idx]
        moved = Point(_clamp01(old.x + dx), _clamp01(old.y + dy))
        knots = g.knots[:idx] + (moved,) + g.knots[idx + 1 :]
    elif kind == "mirror_x":
        path = g.path.map_points(lambda p: Point(1.0 - p.x, p.y)).reversed()
        knots = tuple(Point(1.0 - p.x, p.y) for p in reversed(g.knots))
        out = Glyph(g.id, g.end_anchor, g.start_anchor, knots, path)
        return MutationOutcome(out, True)
    elif kind == "mirror_y":
        path = g.path.map_points(lambda p: Point(p.x, 1.0 - p.y))
        knots = tuple(Point(p.x, 1.0 - p.y) for p in g.knots)
        start = AnchorLevel(2 - g.start_anchor)
        end = AnchorLevel(2 - g.end_anchor)
        return MutationOutcome(Glyph(g.id, start, end, knots, path), True)
    else:
        raise ValueError(f"unknown mutation kind: {kind!r}")
    return MutationOutcome(
        Glyph(g.id, g.start_anchor, g.end_anchor, knots, build_path(g.start_anchor, g.end_anchor, knots)),
        True,
    )


def validate_glyph(g: Glyph) -> list[str]:
    """Return one finding per violated invariant; an empty list means valid."""
    findings: list[str] = []
    segs = g.path.segments
    for i in range(len(segs) - 1):
        if segs[i][3] != segs[i + 1][0]:
            findings.append(f"continuity: junction between segments {i} and {i + 1} disagrees")
    tol = 1e-9
    want_start = anchor_point(g.start_anchor, at_end=False)
    want_end = anchor_point(g.end_anchor, at_end=True)
    got_start, got_end = g.path.start, g.path.end
    if abs(got_start.x - want_start.x) > tol or abs(got_start.y - want_start.y) > tol:
        findings.append(f"anchor: first point {tuple(got_start)} is not at {tuple(want_start)}")
    if abs(got_end.x - want_end.x) > tol or abs(got_end.y - want_end.y) > tol:
        findings.append(f"anchor: last point {tuple(got_end)} is not at {tuple(want_end)}")
    for p in g.path.control_points():
        if not (COORD_LO - tol <= p.x <= COORD_HI + tol and COORD_LO - tol <= p.y <= COORD_HI + tol):
            findings.append(f"bounds: control point {tuple(p)} outside [{COORD_LO}, {COORD_HI}]^2")
            break
    if len(g.knots) > HARD_MAX_INTERIOR:
        findings.append(f"count: {len(g.knots)} interior points exceeds the cap of {HARD_MAX_INTERIOR}")
    return findings


def glyph_to_dict(g: Glyph) -> dict:
    return {
        "id": g.id,
        "start_anchor": int(g.start_anchor),
        "end_anchor": int(g.end_anchor),
        "segments": [[[p.x, p.y] for p in seg] for seg in g.path.segments],
    }


def glyph_from_dict(data: dict) -> Glyph:
    """Rebuild a glyph; interior junctions become the editable knots."""
    segs = tuple(
        tuple(Point(float(x), float(y)) for x, y in seg) for seg in data["segments"]
    )
    path = BezierPath(segs)  # type: ignore[arg-type]
    knots = tuple(segs[i][3] for i in range(len(segs) - 1))
    return Glyph(
        str(data["id"]),
        AnchorLevel(int(data["start_anchor"])),
        AnchorLevel(int(data["end_anchor"])),
        knots,
        path,
    )
