"""Rendering: SVG documents, raster PNGs and the 224x224 classifier
export, with the depth-linear black-to-green colormap.

Quads composite in painter's order (emission order), so deeper branches
draw over their ancestors.  The raster path runs through the kernel
backend's scanline fill; a pixel is painted when its center falls
inside a quad.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .backend import kernels
from .branching import TreeParams
from .errors import ValidationError
from .generator import TreeGeometry

RGB = tuple[int, int, int]

BLACK: RGB = (0, 0, 0)
GREEN: RGB = (0, 255, 0)
WHITE: RGB = (255, 255, 255)


@dataclass(frozen=True)
class ColorMap:
    """Linear per-channel ramp over recursion depth.

    t = k / max_depth, so the root is exactly the start color and the
    deepest level exactly the end color for trees of any depth.
    """

    start: RGB = BLACK
    end: RGB = GREEN

    def color(self, depth: int, max_depth: int) -> RGB:
        t = depth / max_depth if max_depth > 0 else 0.0
        return tuple(
            int(round(s + (e - s) * t)) for s, e in zip(self.start, self.end)
        )

    def table(self, max_depth: int) -> np.ndarray:
        """(max_depth+1, 3) uint8 lookup table."""
        return np.array(
            [self.color(k, max_depth) for k in range(max_depth + 1)], dtype=np.uint8
        )


@dataclass(frozen=True)
class RenderConfig:
    """Canvas geometry and compositing options."""

    width: int = 1024
    height: int = 1024
    margin: float = 0.04
    background: RGB | None = WHITE
    colormap: ColorMap = ColorMap()

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValidationError("canvas must be at least 1x1")
        if not 0.0 <= self.margin < 0.5:
            raise ValidationError(f"margin must be in [0, 0.5), got {self.margin}")


#: Classifier-input preset: letterboxed onto a white square.
EXPORT_224 = RenderConfig(width=224, height=224, margin=0.0)


def padded_bbox(
    geometry: TreeGeometry, margin: float
) -> tuple[float, float, float, float]:
    """World bounding box expanded by the margin fraction per side."""
    minx, miny, maxx, maxy = geometry.bounding_box()
    w, h = maxx - minx, maxy - miny
    # Degenerate extents (a depth-0 sliver) still need a nonzero box.
    w = w if w > 0 else 1.0
    h = h if h > 0 else 1.0
    return minx - margin * w, miny - margin * h, maxx + margin * w, maxy + margin * h


def canvas_transform(
    geometry: TreeGeometry, cfg: RenderConfig
) -> tuple[float, float, float]:
    """(scale, offset_x, offset_y) mapping world to pixel coordinates.

    Uniform scale, centered: the padded bbox fits the canvas entirely
    (letterboxed), matching SVG's default preserveAspectRatio meet
    behavior.  Pixel y runs downward.
    """
    minx, miny, maxx, maxy = padded_bbox(geometry, cfg.margin)
    scale = min(cfg.width / (maxx - minx), cfg.height / (maxy - miny))
    offset_x = (cfg.width - scale * (maxx - minx)) / 2 - scale * minx
    offset_y = (cfg.height - scale * (maxy - miny)) / 2 + scale * maxy
    return scale, offset_x, offset_y


def to_canvas(xy: np.ndarray, geometry: TreeGeometry, cfg: RenderConfig) -> np.ndarray:
    """Map world-coordinate quads (n,4,2) into pixel coordinates."""
    scale, offset_x, offset_y = canvas_transform(geometry, cfg)
    out = np.empty_like(xy)
    out[..., 0] = offset_x + scale * xy[..., 0]
    out[..., 1] = offset_y - scale * xy[..., 1]
    return out


def _hex(color: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


def render_svg(geometry: TreeGeometry, cfg: RenderConfig = RenderConfig()) -> str:
    """SVG 1.1 document: one polygon per quad in painter's order.

    The viewBox is the padded world bounding box (y negated, since SVG
    y points down).  Output is byte-deterministic for equal inputs.
    """
    if geometry.n_quads == 0:
        raise ValidationError("cannot render empty geometry")
    minx, miny, maxx, maxy = padded_bbox(geometry, cfg.margin)
    vb_w, vb_h = maxx - minx, maxy - miny
    lut = cfg.colormap.table(int(geometry.depths.max()))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{cfg.width}" height="{cfg.height}" '
        f'viewBox="{minx!r} {-maxy!r} {vb_w!r} {vb_h!r}">\n'
    ]
    if cfg.background is not None:
        parts.append(
            f'<rect x="{minx!r}" y="{-maxy!r}" width="{vb_w!r}" height="{vb_h!r}" '
            f'fill="{_hex(cfg.background)}"/>\n'
        )
    for i in range(geometry.n_quads):
        pts = " ".join(
            f"{float(geometry.xy[i, j, 0])!r},{float(-geometry.xy[i, j, 1])!r}"
            for j in range(4)
        )
        fill = _hex(tuple(lut[geometry.depths[i]]))
        parts.append(f'<polygon points="{pts}" fill="{fill}"/>\n')
    parts.append("</svg>\n")
    return "".join(parts)


def write_svg(geometry: TreeGeometry, path: str | Path, cfg: RenderConfig = RenderConfig()) -> None:
    Path(path).write_text(render_svg(geometry, cfg), encoding="utf-8")


def render_png(geometry: TreeGeometry, cfg: RenderConfig = RenderConfig()) -> np.ndarray:
    """Rasterize to an (H, W, 3) uint8 array, painter's order."""
    if geometry.n_quads == 0:
        raise ValidationError("cannot render empty geometry")
    bg = cfg.background if cfg.background is not None else WHITE
    img = np.empty((cfg.height, cfg.width, 3), dtype=np.uint8)
    img[:, :] = np.asarray(bg, dtype=np.uint8)
    canvas = to_canvas(geometry.xy, geometry, cfg)
    colors = cfg.colormap.table(int(geometry.depths.max()))[geometry.depths]
    kernels.fill_quads(img, np.ascontiguousarray(canvas), np.ascontiguousarray(colors))
    return img


def write_png(
    geometry: TreeGeometry, path: str | Path, cfg: RenderConfig = RenderConfig()
) -> None:
    Image.fromarray(render_png(geometry, cfg), mode="RGB").save(path, format="PNG")


def export_224(geometry: TreeGeometry, path: str | Path) -> None:
    """Write the classifier-input preset: 224x224, white letterbox."""
    write_png(geometry, path, EXPORT_224)


def tree_filename(params: TreeParams, ext: str) -> str:
    """Canonical file name, e.g. T_e5_b1.618_a67_v1_d12_s42.png."""

    def num(x: float) -> str:
        s = f"{x:.6g}"
        return s.rstrip("0").rstrip(".") if "." in s else s

    return (
        f"T_e{num(params.e)}_b{num(params.b)}_a{num(params.branching_angle_deg)}"
        f"_v{num(params.v)}_d{params.depth}_s{params.seed}.{ext}"
    )
