"""Geometry kernel backend selection.

Imports the compiled Cython kernels when available, otherwise falls back to
the numpy implementation.  Set ``GLYPHSMITH_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("GLYPHSMITH_PURE"):
    from . import _pure as _backend
else:
    try:
        from . import _fastgeom as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _backend  # type: ignore[no-redef]

BACKEND = _backend.NAME

sample_chain = _backend.sample_chain
polyline_stats = _backend.polyline_stats
angle_histogram = _backend.angle_histogram
path_descriptor = _backend.path_descriptor
l1_matrix = _backend.l1_matrix
