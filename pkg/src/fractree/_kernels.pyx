# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: depth-first tree growth and scanline fill.

Arithmetic matches `_fallback.py` expression-for-expression (and the
extension is built with -ffp-contract=off) so both backends produce
bit-identical geometry and pixels.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor

BACKEND_NAME = "cython"

cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline double hash_unit(unsigned long long seed, unsigned long long key) noexcept nogil:
    # splitmix64 finalizer, identical to seeding.hash_unit.
    cdef unsigned long long z = seed + key * 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    z = z ^ (z >> 31)
    return <double>(z >> 11) * INV_2_53


cdef Py_ssize_t _emit(double[:, :, ::1] out_xy, unsigned short[::1] out_depth,
                      double* qx, double* qy,
                      int levels_left, int depth, unsigned long long key,
                      unsigned long long seed, double flip_prob,
                      double fsl, double fsr,
                      double cg, double sg, double cb, double sb,
                      Py_ssize_t pos) noexcept nogil:
    cdef Py_ssize_t j
    cdef double lx[4]
    cdef double ly[4]
    cdef double rx[4]
    cdef double ry[4]
    cdef double dx_x, dx_y, s_left, s_right, cos_l, sin_l, cos_r, sin_r
    cdef double ax, ay, relx, rely
    cdef bint flip

    for j in range(4):
        out_xy[pos, j, 0] = qx[j]
        out_xy[pos, j, 1] = qy[j]
    out_depth[pos] = <unsigned short>depth
    pos += 1
    if levels_left == 0:
        return pos

    flip = hash_unit(seed, key) < flip_prob
    if flip:
        s_left = fsr
        cos_l = cb
        sin_l = sb
        s_right = fsl
        cos_r = cg
        sin_r = sg
    else:
        s_left = fsl
        cos_l = cg
        sin_l = sg
        s_right = fsr
        cos_r = cb
        sin_r = sb

    dx_x = qx[3] - qx[0]
    dx_y = qy[3] - qy[0]

    # Left child: scale about v1, shift by dx, rotate CCW about new v1.
    for j in range(4):
        lx[j] = qx[0] + s_left * (qx[j] - qx[0]) + dx_x
        ly[j] = qy[0] + s_left * (qy[j] - qy[0]) + dx_y
    ax = lx[0]
    ay = ly[0]
    for j in range(4):
        relx = lx[j] - ax
        rely = ly[j] - ay
        lx[j] = ax + (relx * cos_l - rely * sin_l)
        ly[j] = ay + (relx * sin_l + rely * cos_l)

    # Right child: scale about v2, shift by dx, rotate CW about new v2.
    for j in range(4):
        rx[j] = qx[1] + s_right * (qx[j] - qx[1]) + dx_x
        ry[j] = qy[1] + s_right * (qy[j] - qy[1]) + dx_y
    ax = rx[1]
    ay = ry[1]
    for j in range(4):
        relx = rx[j] - ax
        rely = ry[j] - ay
        rx[j] = ax + (relx * cos_r + rely * sin_r)
        ry[j] = ay + (-relx * sin_r + rely * cos_r)

    pos = _emit(out_xy, out_depth, lx, ly, levels_left - 1, depth + 1,
                2 * key, seed, flip_prob, fsl, fsr, cg, sg, cb, sb, pos)
    pos = _emit(out_xy, out_depth, rx, ry, levels_left - 1, depth + 1,
                2 * key + 1, seed, flip_prob, fsl, fsr, cg, sg, cb, sb, pos)
    return pos


def grow_block(root_xy, int levels, int root_depth, unsigned long long root_key,
               unsigned long long seed, double flip_prob,
               double fsl, double fsr, double cg, double sg, double cb, double sb):
    """Grow the subtree under root_xy, inclusive, in depth-first preorder."""
    cdef Py_ssize_t n = (1 << (levels + 1)) - 1
    out_xy = np.empty((n, 4, 2), dtype=np.float64)
    out_depth = np.empty(n, dtype=np.uint16)
    cdef double[:, :, ::1] xy_view = out_xy
    cdef unsigned short[::1] depth_view = out_depth
    cdef double qx[4]
    cdef double qy[4]
    root = np.ascontiguousarray(root_xy, dtype=np.float64)
    cdef double[:, ::1] root_view = root
    cdef Py_ssize_t j
    for j in range(4):
        qx[j] = root_view[j, 0]
        qy[j] = root_view[j, 1]
    with nogil:
        _emit(xy_view, depth_view, qx, qy, levels, root_depth, root_key,
              seed, flip_prob, fsl, fsr, cg, sg, cb, sb, 0)
    return out_xy, out_depth


def fill_quads(unsigned char[:, :, ::1] img, double[:, :, ::1] xy,
               unsigned char[:, ::1] colors):
    """Scanline-fill convex quads (canvas coords, y down), painter's order."""
    cdef Py_ssize_t height = img.shape[0]
    cdef Py_ssize_t width = img.shape[1]
    cdef Py_ssize_t n = xy.shape[0]
    cdef Py_ssize_t q, i, j, k, k2, i0, i1, j0, j1
    cdef double ymin, ymax, yc, x0, y0, x1, y1, x, xmin, xmax
    cdef unsigned char c0, c1, c2

    with nogil:
        for q in range(n):
            c0 = colors[q, 0]
            c1 = colors[q, 1]
            c2 = colors[q, 2]
            ymin = xy[q, 0, 1]
            ymax = ymin
            for k in range(1, 4):
                if xy[q, k, 1] < ymin:
                    ymin = xy[q, k, 1]
                if xy[q, k, 1] > ymax:
                    ymax = xy[q, k, 1]
            i0 = <Py_ssize_t>ceil(ymin - 0.5)
            if i0 < 0:
                i0 = 0
            i1 = <Py_ssize_t>floor(ymax - 0.5)
            if i1 > height - 1:
                i1 = height - 1
            for i in range(i0, i1 + 1):
                yc = i + 0.5
                xmin = 1e300
                xmax = -1e300
                for k in range(4):
                    k2 = (k + 1) & 3
                    x0 = xy[q, k, 0]
                    y0 = xy[q, k, 1]
                    x1 = xy[q, k2, 0]
                    y1 = xy[q, k2, 1]
                    if (y0 <= yc < y1) or (y1 <= yc < y0):
                        x = x0 + (yc - y0) * (x1 - x0) / (y1 - y0)
                        if x < xmin:
                            xmin = x
                        if x > xmax:
                            xmax = x
                if xmin <= xmax:
                    j0 = <Py_ssize_t>ceil(xmin - 0.5)
                    if j0 < 0:
                        j0 = 0
                    j1 = <Py_ssize_t>floor(xmax - 0.5)
                    if j1 > width - 1:
                        j1 = width - 1
                    for j in range(j0, j1 + 1):
                        img[i, j, 0] = c0
                        img[i, j, 1] = c1
                        img[i, j, 2] = c2
