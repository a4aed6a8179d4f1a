"""Per-glyph scores and pairwise comparisons.

Everything is computed on the flattened path via the kernel backend, so the
compiled and pure implementations yield the same measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .glyph import Glyph

DEFAULT_SEGMENTS_PER_CURVE = 32
DEFAULT_BIN_COUNT = 18
DEFAULT_SHARP_THRESHOLD = math.radians(70.0)
DEGENERATE_LENGTH = 1e-9


class DegenerateGlyphError(ValueError):
    """Raised when a glyph's flattened path is too short to measure."""


@dataclass(frozen=True)
class MetricParams:
    """Resolution knobs shared by the metric operations."""

    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE
    bin_count: int = DEFAULT_BIN_COUNT
    sharp_threshold: float = DEFAULT_SHARP_THRESHOLD
    anchor_bonus: float = 0.0

    def validate(self) -> None:
        if self.segments_per_curve < 2:
            raise ValueError("segments_per_curve must be at least 2")
        if self.bin_count < 1:
            raise ValueError("bin_count must be positive")
        if self.sharp_threshold < 0.0:
            raise ValueError("sharp_threshold must be nonnegative")
        if self.anchor_bonus < 0.0:
            raise ValueError("anchor_bonus must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "segments_per_curve": self.segments_per_curve,
            "bin_count": self.bin_count,
            "sharp_threshold": self.sharp_threshold,
            "anchor_bonus": self.anchor_bonus,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricParams":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


@dataclass(frozen=True)
class GlyphWeights:
    """Penalty weights inside the per-glyph fitness exponent."""

    w_complexity: float = 1.0
    w_sharp: float = 1.0
    w_points: float = 0.1

    def validate(self) -> None:
        ws = (self.w_complexity, self.w_sharp, self.w_points)
        if any(w < 0.0 for w in ws):
            raise ValueError("glyph weights must be nonnegative")
        if not any(w > 0.0 for w in ws):
            raise ValueError("at least one glyph weight must be positive")


@dataclass(frozen=True)
class GlyphMetrics:
    complexity: float
    sharp_angle_count: int
    control_point_count: int
    fitness: float


@dataclass(frozen=True)
class AngleHistogram:
    """Normalized turning-angle mass over [0, pi]; all-zero iff no turning."""

    bins: tuple[float, ...]

    @property
    def bin_count(self) -> int:
        return len(self.bins)


def _descriptor(g: Glyph, segments_per_curve: int, bin_count: int, threshold: float):
    out = _kernels.path_descriptor(g.path.as_array(), segments_per_curve, bin_count, threshold)
    if out[0] < DEGENERATE_LENGTH:
        raise DegenerateGlyphError(f"glyph {g.id}: arc length {out[0]} is below {DEGENERATE_LENGTH}")
    return out


def complexity(g: Glyph, segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE) -> float:
    """Total absolute turning of the flattened path divided by its arc length."""
    length, turning, _, _ = _descriptor(g, segments_per_curve, 1, math.pi)
    return turning / length


def sharp_angle_count(
    g: Glyph,
    threshold: float = DEFAULT_SHARP_THRESHOLD,
    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE,
) -> int:
    """Number of flattened-path turning angles strictly above the threshold."""
    _, _, sharp, _ = _descriptor(g, segments_per_curve, 1, threshold)
    return sharp


def glyph_fitness(
    g: Glyph,
    weights: GlyphWeights = GlyphWeights(),
    *,
    sharp_threshold: float = DEFAULT_SHARP_THRESHOLD,
    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE,
) -> float:
    """exp(-(w_c * complexity + w_s * sharp_angles + w_p * interior_points)).

    Always in (0, 1]; exactly 1.0 for a straight glyph with no interior points.
    """
    return glyph_metrics(
        g, weights, sharp_threshold=sharp_threshold, segments_per_curve=segments_per_curve
    ).fitness


def glyph_metrics(
    g: Glyph,
    weights: GlyphWeights = GlyphWeights(),
    *,
    sharp_threshold: float = DEFAULT_SHARP_THRESHOLD,
    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE,
) -> GlyphMetrics:
    """All per-glyph measurements from a single flattening pass."""
    weights.validate()
    length, turning, sharp, _ = _descriptor(g, segments_per_curve, 1, sharp_threshold)
    comp = turning / length
    count = g.interior_points
    fitness = math.exp(-(weights.w_complexity * comp + weights.w_sharp * sharp + weights.w_points * count))
    return GlyphMetrics(comp, sharp, count, fitness)


def angle_histogram(
    g: Glyph,
    bin_count: int = DEFAULT_BIN_COUNT,
    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE,
) -> AngleHistogram:
    """Edge-length-weighted turning-angle histogram, normalized to sum 1.

    Vertices that do not turn carry no mass, so straight runs are invisible
    and a fully straight glyph yields the all-zero histogram.
    """
    _, _, _, hist = _descriptor(g, segments_per_curve, bin_count, math.pi)
    return AngleHistogram(tuple(float(v) for v in hist))


def _compare_form(hist: np.ndarray) -> np.ndarray:
    # A no-turning glyph compares as "all turning mass at angle zero".
    if not hist.any():
        out = np.zeros_like(hist)
        out[0] = 1.0
        return out
    return hist


def dissimilarity(
    a: Glyph,
    b: Glyph,
    *,
    bin_count: int = DEFAULT_BIN_COUNT,
    segments_per_curve: int = DEFAULT_SEGMENTS_PER_CURVE,
    anchor_bonus: float = 0.0,
) -> float:
    """Half the L1 distance between angle histograms plus an anchor bonus.

    Symmetric, zero on identical shapes, triangle inequality holds; glyph ids
    never enter.  With the default bonus of 0 the value lies in [0, 1].
    """
    _, _, _, ha = _descriptor(a, segments_per_curve, bin_count, math.pi)
    _, _, _, hb = _descriptor(b, segments_per_curve, bin_count, math.pi)
    base = 0.5 * float(np.abs(_compare_form(ha) - _compare_form(hb)).sum())
    if anchor_bonus:
        mismatch = (a.start_anchor != b.start_anchor) + (a.end_anchor != b.end_anchor)
        base += anchor_bonus * mismatch / 2.0
    return base


def connection_ease(a: Glyph, b: Glyph) -> int:
    """1 when a's end anchor matches b's start anchor (a written before b)."""
    return int(a.end_anchor == b.start_anchor)
