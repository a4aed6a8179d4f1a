# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels; mirrors _pure.py function for function."""

from libc.math cimport atan2, fabs, hypot, M_PI

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "cython"

cdef double EDGE_EPS = 1e-12
cdef double TURN_EPS = 1e-12


cdef inline double _lerp(double a, double b, double t) nogil:
    return a + t * (b - a)


def sample_chain(object ctrl_in, int k):
    """Sample every cubic at k+1 uniform parameters and join the pieces."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3] ctrl = np.ascontiguousarray(ctrl_in, dtype=np.float64)
    cdef int n = ctrl.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n * (k + 1), 2), dtype=np.float64)
    cdef double[:, :, :] c = ctrl
    cdef double[:, :] o = out
    cdef int i, j, m
    cdef bint joined
    cdef double t, x, y, lx, ly
    cdef double a01x, a12x, a23x, b02x, b13x
    cdef double a01y, a12y, a23y, b02y, b13y

    m = 0
    with nogil:
        for i in range(n):
            joined = i > 0 and c[i, 0, 0] == c[i - 1, 3, 0] and c[i, 0, 1] == c[i - 1, 3, 1]
            for j in range(k + 1):
                if j == 0 and joined:
                    continue
                t = (<double> j) / k
                a01x = _lerp(c[i, 0, 0], c[i, 1, 0], t)
                a12x = _lerp(c[i, 1, 0], c[i, 2, 0], t)
                a23x = _lerp(c[i, 2, 0], c[i, 3, 0], t)
                a01y = _lerp(c[i, 0, 1], c[i, 1, 1], t)
                a12y = _lerp(c[i, 1, 1], c[i, 2, 1], t)
                a23y = _lerp(c[i, 2, 1], c[i, 3, 1], t)
                b02x = _lerp(a01x, a12x, t)
                b13x = _lerp(a12x, a23x, t)
                b02y = _lerp(a01y, a12y, t)
                b13y = _lerp(a12y, a23y, t)
                x = _lerp(b02x, b13x, t)
                y = _lerp(b02y, b13y, t)
                if m > 0:
                    lx = o[m - 1, 0]
                    ly = o[m - 1, 1]
                    if hypot(x - lx, y - ly) < EDGE_EPS:
                        continue
                o[m, 0] = x
                o[m, 1] = y
                m = m + 1
    return out[:m].copy()


def polyline_stats(object pts_in):
    """Arc length, absolute turning angles and per-vertex length weights."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef int m = pts.shape[0]
    if m < 2:
        return 0.0, np.empty(0), np.empty(0)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ell = np.empty(m - 1, dtype=np.float64)
    cdef double[:, :] p = pts
    cdef double[:] e = ell
    cdef double length = 0.0
    cdef int i
    with nogil:
        for i in range(m - 1):
            e[i] = hypot(p[i + 1, 0] - p[i, 0], p[i + 1, 1] - p[i, 1])
            length = length + e[i]
    if m < 3:
        return length, np.empty(0), np.empty(0)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] angles = np.empty(m - 2, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] weights = np.empty(m - 2, dtype=np.float64)
    cdef double[:] a = angles
    cdef double[:] w = weights
    cdef double ux, uy, vx, vy, cr, dt
    with nogil:
        for i in range(m - 2):
            ux = p[i + 1, 0] - p[i, 0]
            uy = p[i + 1, 1] - p[i, 1]
            vx = p[i + 2, 0] - p[i + 1, 0]
            vy = p[i + 2, 1] - p[i + 1, 1]
            cr = ux * vy - uy * vx
            dt = ux * vx + uy * vy
            a[i] = fabs(atan2(cr, dt))
            w[i] = 0.5 * (e[i] + e[i + 1])
    return length, angles, weights


def angle_histogram(object angles_in, object weights_in, int bin_count):
    """Edge-length-weighted turning-angle histogram over [0, pi], sum 1."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] angles = np.ascontiguousarray(angles_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] weights = np.ascontiguousarray(weights_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hist = np.zeros(bin_count, dtype=np.float64)
    cdef double[:] a = angles
    cdef double[:] w = weights
    cdef double[:] h = hist
    cdef int i, idx
    cdef int m = angles.shape[0]
    cdef double total = 0.0
    cdef double scale = bin_count / M_PI
    with nogil:
        for i in range(m):
            if a[i] > TURN_EPS:
                idx = <int> (a[i] * scale)
                if idx > bin_count - 1:
                    idx = bin_count - 1
                h[idx] = h[idx] + w[i]
    for i in range(bin_count):
        total += hist[i]
    if total == 0.0:
        return hist
    return hist / total


def path_descriptor(object ctrl, int k, int bin_count, double sharp_threshold):
    """One-pass summary: (arc_length, turning_sum, sharp_count, histogram)."""
    pts = sample_chain(ctrl, k)
    length, angles, weights = polyline_stats(pts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(angles, dtype=np.float64)
    cdef double turning = 0.0
    cdef int sharp = 0
    cdef int i
    for i in range(a.shape[0]):
        turning += a[i]
        if a[i] > sharp_threshold:
            sharp += 1
    hist = angle_histogram(a, weights, bin_count)
    return length, turning, sharp, hist


def l1_matrix(object hists_in):
    """Pairwise L1 distances between the rows of an (g, b) array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] hists = np.ascontiguousarray(hists_in, dtype=np.float64)
    cdef int g = hists.shape[0]
    cdef int b = hists.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((g, g), dtype=np.float64)
    cdef double[:, :] h = hists
    cdef double[:, :] o = out
    cdef int i, j, q
    cdef double s
    with nogil:
        for i in range(g):
            for j in range(i + 1, g):
                s = 0.0
                for q in range(b):
                    s = s + fabs(h[i, q] - h[j, q])
                o[i, j] = s
                o[j, i] = s
    return out
