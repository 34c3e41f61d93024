"""Minimal 2D affine toolkit for branch quads.

A quad's vertices are ordered v1=bottom-left, v2=bottom-right,
v3=top-right, v4=top-left in the branch's local frame; the edge v1->v2
is the branch base.  All transforms return new values; nothing mutates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .branching import rotation_rowmat
from .errors import ValidationError

Point = np.ndarray  # shape (2,)


@dataclass(frozen=True)
class Quad:
    """One branch segment: 4 ordered vertices plus its recursion depth."""

    xy: np.ndarray  # (4, 2) float64
    depth: int = 0

    def __post_init__(self) -> None:
        xy = np.asarray(self.xy, dtype=np.float64)
        if xy.shape != (4, 2):
            raise ValidationError(f"quad vertices must be (4, 2), got {xy.shape}")
        object.__setattr__(self, "xy", xy)

    @property
    def base_width(self) -> float:
        """Length of the base edge v1->v2 (the branch width)."""
        return float(np.hypot(*(self.xy[1] - self.xy[0])))

    @property
    def side_vector(self) -> np.ndarray:
        """The "up" edge v4 - v1; children are shifted by this vector."""
        return self.xy[3] - self.xy[0]

    def area(self) -> float:
        """Shoelace area of the quad."""
        return float(shoelace_area(self.xy[np.newaxis])[0])


def base_quad(e: float, depth: int = 0) -> Quad:
    """Axis-aligned root rectangle of width 1 and height e at the origin."""
    if e <= 0:
        raise ValidationError(f"e must be > 0, got {e}")
    return Quad(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, e], [0.0, e]]), depth)


def scale_about(q: Quad, anchor: Point, s: float) -> Quad:
    """Scale all vertices by s about a fixed anchor point."""
    if s <= 0:
        raise ValidationError(f"scale must be > 0, got {s}")
    anchor = np.asarray(anchor, dtype=np.float64)
    return replace(q, xy=anchor + s * (q.xy - anchor))


def rotate_about(q: Quad, anchor: Point, angle: float, sense: str = "ccw") -> Quad:
    """Rotate all vertices by angle about a fixed anchor.

    sense is "ccw" or "cw"; the clockwise case applies the transposed
    rotation matrix, mirroring the right-branch construction.
    """
    if sense not in ("ccw", "cw"):
        raise ValidationError(f"sense must be 'ccw' or 'cw', got {sense!r}")
    anchor = np.asarray(anchor, dtype=np.float64)
    rot = rotation_rowmat(angle)
    if sense == "cw":
        rot = rot.T
    return replace(q, xy=anchor + (q.xy - anchor) @ rot)


def translate(q: Quad, delta: Point) -> Quad:
    """Shift all vertices by delta."""
    return replace(q, xy=q.xy + np.asarray(delta, dtype=np.float64))


def shoelace_area(xy: np.ndarray) -> np.ndarray:
    """Shoelace areas for a batch of quads, shape (n, 4, 2) -> (n,)."""
    x, y = xy[..., 0], xy[..., 1]
    xn, yn = np.roll(x, -1, axis=-1), np.roll(y, -1, axis=-1)
    return 0.5 * np.abs(np.sum(x * yn - xn * y, axis=-1))


def points_in_quad(points: np.ndarray, quad_xy: np.ndarray) -> np.ndarray:
    """Vectorized point-in-convex-quad test (boundary counts as inside).

    points: (n, 2); quad_xy: (4, 2).  Accepts either vertex orientation.
    """
    points = np.asarray(points, dtype=np.float64)
    signs = np.empty((points.shape[0], 4))
    for k in range(4):
        a = quad_xy[k]
        d = quad_xy[(k + 1) % 4] - a
        rel = points - a
        signs[:, k] = d[0] * rel[:, 1] - d[1] * rel[:, 0]
    return np.all(signs >= 0, axis=1) | np.all(signs <= 0, axis=1)
