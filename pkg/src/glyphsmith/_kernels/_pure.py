"""Pure numpy geometry kernels (fallback backend).

The compiled backend in ``_fastgeom.pyx`` mirrors these functions one to one;
both evaluate cubics with the de Casteljau lerp form ``a + t*(b - a)`` so that
constant coordinates and segment endpoints are reproduced exactly.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "pure"

EDGE_EPS = 1e-12  # edges shorter than this are dropped
TURN_EPS = 1e-12  # angles at or below this carry no histogram mass


def _lerp(a, b, t):
    return a + t * (b - a)


def sample_chain(ctrl: np.ndarray, k: int) -> np.ndarray:
    """Sample every cubic at k+1 uniform parameters and join the pieces.

    ``ctrl`` has shape (n, 4, 2).  Shared junction samples appear once and
    edges shorter than EDGE_EPS are dropped.  Returns an (m, 2) array.
    """
    ctrl = np.asarray(ctrl, dtype=np.float64)
    n = ctrl.shape[0]
    t = (np.arange(k + 1, dtype=np.float64) / k)[None, :, None]  # (1, k+1, 1)

    p0 = ctrl[:, None, 0]
    p1 = ctrl[:, None, 1]
    p2 = ctrl[:, None, 2]
    p3 = ctrl[:, None, 3]
    a01 = _lerp(p0, p1, t)
    a12 = _lerp(p1, p2, t)
    a23 = _lerp(p2, p3, t)
    b02 = _lerp(a01, a12, t)
    b13 = _lerp(a12, a23, t)
    pts = _lerp(b02, b13, t)  # (n, k+1, 2)

    parts = [pts[0]]
    for i in range(1, n):
        joined = ctrl[i, 0, 0] == ctrl[i - 1, 3, 0] and ctrl[i, 0, 1] == ctrl[i - 1, 3, 1]
        parts.append(pts[i, 1:] if joined else pts[i])
    out = np.concatenate(parts, axis=0)

    d = np.hypot(np.diff(out[:, 0]), np.diff(out[:, 1]))
    if not (d >= EDGE_EPS).all():
        keep = [0]
        last = out[0]
        for i in range(1, out.shape[0]):
            if math.hypot(out[i, 0] - last[0], out[i, 1] - last[1]) >= EDGE_EPS:
                keep.append(i)
                last = out[i]
        out = out[keep]
    return np.ascontiguousarray(out)


def polyline_stats(pts: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Arc length, absolute turning angles and per-vertex length weights.

    Angles live at the m-2 interior vertices, each in [0, pi]; the weight of a
    vertex is the mean length of its two incident edges.
    """
    pts = np.asarray(pts, dtype=np.float64)
    if pts.shape[0] < 2:
        return 0.0, np.empty(0), np.empty(0)
    v = np.diff(pts, axis=0)
    ell = np.hypot(v[:, 0], v[:, 1])
    length = float(ell.sum())
    if pts.shape[0] < 3:
        return length, np.empty(0), np.empty(0)
    cross = v[:-1, 0] * v[1:, 1] - v[:-1, 1] * v[1:, 0]
    dot = v[:-1, 0] * v[1:, 0] + v[:-1, 1] * v[1:, 1]
    angles = np.abs(np.arctan2(cross, dot))
    weights = 0.5 * (ell[:-1] + ell[1:])
    return length, angles, weights


def angle_histogram(angles: np.ndarray, weights: np.ndarray, bin_count: int) -> np.ndarray:
    """Edge-length-weighted turning-angle histogram over [0, pi], sum 1.

    Vertices that do not turn (angle <= TURN_EPS) carry no mass, so a straight
    path yields the all-zero vector.
    """
    angles = np.asarray(angles, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    hist = np.zeros(bin_count)
    mask = angles > TURN_EPS
    if not mask.any():
        return hist
    idx = np.minimum((angles[mask] * (bin_count / math.pi)).astype(np.int64), bin_count - 1)
    np.add.at(hist, idx, weights[mask])
    total = hist.sum()
    return hist / total


def path_descriptor(
    ctrl: np.ndarray, k: int, bin_count: int, sharp_threshold: float
) -> tuple[float, float, int, np.ndarray]:
    """One-pass summary: (arc_length, turning_sum, sharp_count, histogram)."""
    pts = sample_chain(ctrl, k)
    length, angles, weights = polyline_stats(pts)
    turning = float(angles.sum())
    sharp = int((angles > sharp_threshold).sum())
    hist = angle_histogram(angles, weights, bin_count)
    return length, turning, sharp, hist


def l1_matrix(hists: np.ndarray) -> np.ndarray:
    """Pairwise L1 distances between the rows of an (g, b) array."""
    h = np.asarray(hists, dtype=np.float64)
    return np.abs(h[:, None, :] - h[None, :, :]).sum(axis=-1)
