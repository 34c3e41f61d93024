"""Pure-numpy kernels: level-vectorized tree growth and scanline fill.

Drop-in replacements for the compiled `_kernels` extension, selected at
import time when the extension is unavailable (see `backend.py`).  The
arithmetic mirrors the compiled kernels expression-for-expression so
both produce bit-identical output.
"""

from __future__ import annotations

import math

import numpy as np

from .seeding import flip_bits

BACKEND_NAME = "fallback"


def grow_block(
    root_xy: np.ndarray,
    levels: int,
    root_depth: int,
    root_key: int,
    seed: int,
    flip_prob: float,
    fsl: float,
    fsr: float,
    cg: float,
    sg: float,
    cb: float,
    sb: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Grow the subtree under root_xy, inclusive, in depth-first preorder.

    Internally breadth-first (one vectorized pass per level) with a
    preorder scatter, which keeps the hot loop in numpy.  Returns
    (xy (n,4,2) float64, depth (n,) uint16) with n = 2**(levels+1) - 1.
    """
    n = (1 << (levels + 1)) - 1
    out_xy = np.empty((n, 4, 2), dtype=np.float64)
    out_depth = np.empty(n, dtype=np.uint16)

    level = np.asarray(root_xy, dtype=np.float64).reshape(1, 4, 2)
    # Preorder positions of the current level's nodes, left to right.
    pre = np.zeros(1, dtype=np.int64)
    out_xy[0] = level[0]
    out_depth[0] = root_depth

    for j in range(levels):
        m = level.shape[0]
        keys = (np.uint64(root_key) << np.uint64(j)) + np.arange(m, dtype=np.uint64)
        flip = flip_bits(seed, keys, flip_prob)

        s_left = np.where(flip, fsr, fsl)[:, None, None]
        cos_l = np.where(flip, cb, cg)[:, None]
        sin_l = np.where(flip, sb, sg)[:, None]
        s_right = np.where(flip, fsl, fsr)[:, None, None]
        cos_r = np.where(flip, cg, cb)[:, None]
        sin_r = np.where(flip, sg, sb)[:, None]

        v1 = level[:, 0:1, :]
        v2 = level[:, 1:2, :]
        dx = (level[:, 3, :] - level[:, 0, :])[:, None, :]

        # Left child: scale about v1, shift up by dx, rotate CCW about
        # its (new) v1.  Right child: same about v2, rotated CW.
        tl = v1 + s_left * (level - v1) + dx
        rel = tl - tl[:, 0:1, :]
        left = np.empty_like(tl)
        left[..., 0] = tl[:, 0:1, 0] + (rel[..., 0] * cos_l - rel[..., 1] * sin_l)
        left[..., 1] = tl[:, 0:1, 1] + (rel[..., 0] * sin_l + rel[..., 1] * cos_l)

        tr = v2 + s_right * (level - v2) + dx
        rel = tr - tr[:, 1:2, :]
        right = np.empty_like(tr)
        right[..., 0] = tr[:, 1:2, 0] + (rel[..., 0] * cos_r + rel[..., 1] * sin_r)
        right[..., 1] = tr[:, 1:2, 1] + (-rel[..., 0] * sin_r + rel[..., 1] * cos_r)

        level = np.empty((2 * m, 4, 2), dtype=np.float64)
        level[0::2] = left
        level[1::2] = right

        # Children sit right after the parent (left) or after the whole
        # left subtree (right) in preorder.
        sub = (1 << (levels - j)) - 1
        nxt = np.empty(2 * m, dtype=np.int64)
        nxt[0::2] = pre + 1
        nxt[1::2] = pre + 1 + sub
        pre = nxt

        out_xy[pre] = level
        out_depth[pre] = root_depth + j + 1

    return out_xy, out_depth


def fill_quads(img: np.ndarray, xy: np.ndarray, colors: np.ndarray) -> None:
    """Scanline-fill convex quads into an RGB uint8 image, painter's order.

    xy is in canvas coordinates (y down); a pixel is filled when its
    center lies inside the quad.
    """
    height, width = img.shape[0], img.shape[1]
    for q in range(xy.shape[0]):
        quad = xy[q]
        color = colors[q]
        ymin = quad[:, 1].min()
        ymax = quad[:, 1].max()
        i0 = max(int(math.ceil(ymin - 0.5)), 0)
        i1 = min(int(math.floor(ymax - 0.5)), height - 1)
        for i in range(i0, i1 + 1):
            yc = i + 0.5
            xmin = math.inf
            xmax = -math.inf
            for k in range(4):
                x0, y0 = quad[k]
                x1, y1 = quad[(k + 1) % 4]
                if (y0 <= yc < y1) or (y1 <= yc < y0):
                    x = x0 + (yc - y0) * (x1 - x0) / (y1 - y0)
                    if x < xmin:
                        xmin = x
                    if x > xmax:
                        xmax = x
            if xmin <= xmax:
                j0 = max(int(math.ceil(xmin - 0.5)), 0)
                j1 = min(int(math.floor(xmax - 0.5)), width - 1)
                if j0 <= j1:
                    img[i, j0 : j1 + 1] = color
