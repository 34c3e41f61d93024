"""Recursive tree growth: emits every branch quad to the depth limit.

Emission order is depth-first preorder (parent, then the whole left
subtree, then the right), which makes golden files stable and lets the
audit reconstruct parentage from the quad sequence alone.  Flips are
keyed by (seed, node path) so the same parameters always regrow the
same tree, in memory or streamed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .backend import kernels
from .branching import DEFAULT_DEPTH_CAP, BranchTransforms, TreeParams, derive_transforms
from .errors import DepthCapError
from .geometry import Quad, base_quad, rotate_about, scale_about, translate

GENERATOR_VERSION = "0.1.0"

#: Subtree height handed to the kernel per streamed chunk
#: (2**17 - 1 quads, ~9 MB of coordinates).
STREAM_CHUNK_LEVELS = 16

QuadSink = Callable[[np.ndarray, np.ndarray], None]


@dataclass
class TreeGeometry:
    """Ordered quad collection with provenance metadata."""

    xy: np.ndarray  # (n, 4, 2) float64, preorder
    depths: np.ndarray  # (n,) uint16
    params: TreeParams
    transforms: BranchTransforms
    generator_version: str = GENERATOR_VERSION

    @property
    def n_quads(self) -> int:
        return self.xy.shape[0]

    def bounding_box(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) over all vertices."""
        lo = self.xy.min(axis=(0, 1))
        hi = self.xy.max(axis=(0, 1))
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def quad(self, i: int) -> Quad:
        return Quad(self.xy[i].copy(), int(self.depths[i]))

    def __iter__(self) -> Iterator[Quad]:
        for i in range(self.n_quads):
            yield self.quad(i)


@dataclass(frozen=True)
class GrowSummary:
    """Result of a streaming run: quad count and overall bounding box."""

    count: int
    bbox: tuple[float, float, float, float]


def _kernel_args(params: TreeParams, t: BranchTransforms) -> tuple:
    return (
        t.effective_s_l,
        t.effective_s_r,
        float(np.cos(t.gamma)),
        float(np.sin(t.gamma)),
        float(np.cos(t.beta)),
        float(np.sin(t.beta)),
    )


def _check_depth(depth: int, depth_cap: int) -> None:
    if depth > depth_cap:
        raise DepthCapError(
            f"depth {depth} exceeds cap {depth_cap} "
            f"({(1 << (depth + 1)) - 1:,} quads); raise depth_cap explicitly "
            "or use grow_streaming"
        )


def grow(params: TreeParams, depth_cap: int = DEFAULT_DEPTH_CAP) -> TreeGeometry:
    """Grow the full tree in memory: 2**(depth+1) - 1 quads in preorder."""
    _check_depth(params.depth, depth_cap)
    t = derive_transforms(params)
    xy, depths = kernels.grow_block(
        base_quad(params.e).xy,
        params.depth,
        0,
        1,
        params.seed,
        params.flip_prob,
        *_kernel_args(params, t),
    )
    return TreeGeometry(xy=xy, depths=depths, params=params, transforms=t)


def grow_streaming(
    params: TreeParams,
    sink: QuadSink,
    chunk_levels: int = STREAM_CHUNK_LEVELS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> GrowSummary:
    """Grow without materializing the tree: quads are handed to ``sink``
    in batches of (xy (m,4,2), depth (m,)), in the same preorder as
    :func:`grow`.  Memory stays bounded by the chunk size.
    """
    _check_depth(params.depth, depth_cap)
    t = derive_transforms(params)
    args = _kernel_args(params, t)
    chunk_levels = max(1, chunk_levels)

    count = 0
    lo = np.array([np.inf, np.inf])
    hi = np.array([-np.inf, -np.inf])

    def feed(xy: np.ndarray, depths: np.ndarray) -> None:
        nonlocal count
        count += xy.shape[0]
        np.minimum(lo, xy.min(axis=(0, 1)), out=lo)
        np.maximum(hi, xy.max(axis=(0, 1)), out=hi)
        sink(xy, depths)

    def rec(quad_xy: np.ndarray, depth_abs: int, key: int) -> None:
        remaining = params.depth - depth_abs
        if remaining <= chunk_levels:
            feed(*kernels.grow_block(
                quad_xy, remaining, depth_abs, key,
                params.seed, params.flip_prob, *args,
            ))
            return
        # One kernel step keeps the child arithmetic identical to the
        # bulk path: [parent, left, right] in preorder.
        xy, depths = kernels.grow_block(
            quad_xy, 1, depth_abs, key, params.seed, params.flip_prob, *args
        )
        feed(xy[:1], depths[:1])
        rec(xy[1], depth_abs + 1, 2 * key)
        rec(xy[2], depth_abs + 1, 2 * key + 1)

    rec(base_quad(params.e).xy, 0, 1)
    return GrowSummary(
        count=count, bbox=(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
    )


def child_quads(parent: Quad, t: BranchTransforms, flip: bool) -> tuple[Quad, Quad]:
    """Reference single-junction construction from the affine toolkit.

    Composes scale/translate/rotate exactly as the recursive definition
    states; the fast kernels are validated against this in tests.
    """
    if flip:
        s_left, s_right = t.effective_s_r, t.effective_s_l
        a_left, a_right = t.beta, t.gamma
    else:
        s_left, s_right = t.effective_s_l, t.effective_s_r
        a_left, a_right = t.gamma, t.beta
    dx = parent.side_vector

    left = translate(scale_about(parent, parent.xy[0], s_left), dx)
    left = rotate_about(left, left.xy[0], a_left, "ccw")
    right = translate(scale_about(parent, parent.xy[1], s_right), dx)
    right = rotate_about(right, right.xy[1], a_right, "cw")
    return (
        Quad(left.xy, parent.depth + 1),
        Quad(right.xy, parent.depth + 1),
    )


def preorder_level_positions(depth: int) -> list[np.ndarray]:
    """Preorder positions of each level's nodes, left to right.

    ``out[k][i]`` is the index in the emitted quad sequence of the i-th
    level-k node.  Children of node ``out[k][i]`` sit at
    ``out[k+1][2i]`` and ``out[k+1][2i+1]``.
    """
    levels = [np.zeros(1, dtype=np.int64)]
    for k in range(depth):
        sub = (1 << (depth - k)) - 1
        cur = levels[-1]
        nxt = np.empty(cur.size * 2, dtype=np.int64)
        nxt[0::2] = cur + 1
        nxt[1::2] = cur + 1 + sub
        levels.append(nxt)
    return levels
