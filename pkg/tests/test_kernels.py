"""Cross-checks between the compiled kernels and the numpy fallback."""

import math
import os
import random
import subprocess
import sys

import numpy as np
import pytest

from glyphsmith import _kernels
from glyphsmith._kernels import _pure

try:
    from glyphsmith._kernels import _fastgeom
except ImportError:
    _fastgeom = None

needs_compiled = pytest.mark.skipif(_fastgeom is None, reason="compiled kernels not built")


def random_chain(rng: random.Random, n_segments: int) -> np.ndarray:
    """Junction-sharing (n,4,2) control array, like a real glyph path."""
    ctrl = np.empty((n_segments, 4, 2), dtype=np.float64)
    prev = (rng.random(), rng.random())
    for i in range(n_segments):
        pts = [prev] + [(rng.random(), rng.random()) for _ in range(3)]
        ctrl[i] = pts
        prev = pts[3]
    return ctrl


def test_backend_name_is_known():
    assert _kernels.BACKEND in ("pure", "cython")


@needs_compiled
@pytest.mark.skipif(bool(os.environ.get("GLYPHSMITH_PURE")), reason="fallback forced by env")
def test_default_import_prefers_compiled():
    assert _kernels.BACKEND == "cython"


def test_env_var_forces_pure():
    code = "import glyphsmith._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, GLYPHSMITH_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    assert out.stdout.strip() == "pure"


@needs_compiled
def test_sample_chain_parity():
    rng = random.Random(101)
    for _ in range(50):
        ctrl = random_chain(rng, rng.randint(1, 6))
        k = rng.randint(2, 48)
        a = _pure.sample_chain(ctrl, k)
        b = _fastgeom.sample_chain(ctrl, k)
        assert a.shape == b.shape
        assert np.array_equal(a, b), "pointwise sampling should agree bit for bit"


@needs_compiled
def test_polyline_stats_parity():
    rng = random.Random(202)
    for _ in range(50):
        pts = _pure.sample_chain(random_chain(rng, rng.randint(1, 5)), rng.randint(2, 32))
        la, aa, wa = _pure.polyline_stats(pts)
        lb, ab, wb = _fastgeom.polyline_stats(pts)
        assert math.isclose(la, lb, rel_tol=1e-12, abs_tol=1e-12)
        assert np.allclose(aa, ab, atol=1e-12, rtol=0.0)
        assert np.allclose(wa, wb, atol=1e-12, rtol=0.0)


@needs_compiled
def test_histogram_and_descriptor_parity():
    rng = random.Random(303)
    for _ in range(50):
        ctrl = random_chain(rng, rng.randint(1, 5))
        k = rng.randint(2, 32)
        bins = rng.choice([6, 18, 32])
        thr = rng.uniform(0.1, 2.5)
        da = _pure.path_descriptor(ctrl, k, bins, thr)
        db = _fastgeom.path_descriptor(ctrl, k, bins, thr)
        assert math.isclose(da[0], db[0], rel_tol=1e-12, abs_tol=1e-12)  # length
        assert math.isclose(da[1], db[1], rel_tol=1e-12, abs_tol=1e-12)  # turning
        assert da[2] == db[2]  # sharp count is integer-exact
        assert np.allclose(da[3], db[3], atol=1e-13, rtol=0.0)


@needs_compiled
def test_l1_matrix_parity():
    rng = random.Random(404)
    hists = np.array(
        [
            _pure.path_descriptor(random_chain(rng, rng.randint(1, 4)), 16, 18, 1.2)[3]
            for _ in range(12)
        ]
    )
    a = _pure.l1_matrix(hists)
    b = _fastgeom.l1_matrix(hists)
    assert np.allclose(a, b, atol=1e-13, rtol=0.0)


def test_histogram_normalization_or_zero():
    rng = random.Random(505)
    for _ in range(40):
        ctrl = random_chain(rng, rng.randint(1, 4))
        h = _pure.path_descriptor(ctrl, 24, 18, 1.0)[3]
        total = float(h.sum())
        assert math.isclose(total, 1.0, abs_tol=1e-9) or total == 0.0
        assert (h >= 0.0).all()


def test_straight_chain_descriptor_is_exactly_zero():
    # collinear control points: no turning mass at all
    ctrl = np.array(
        [[[0.0, 0.0], [1.0 / 3.0, 1.0 / 3.0], [2.0 / 3.0, 2.0 / 3.0], [1.0, 1.0]]]
    )
    length, turning, sharp, hist = _pure.path_descriptor(ctrl, 32, 18, 1.0)
    assert turning == 0.0
    assert sharp == 0
    assert float(hist.sum()) == 0.0
    assert math.isclose(length, math.sqrt(2.0), rel_tol=1e-12)
