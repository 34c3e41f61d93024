"""Rendering: colormap, SVG structure, raster coverage, export preset."""

import math
import re

import numpy as np
import pytest
from PIL import Image

from fractree import TreeParams, ValidationError, grow
from fractree.geometry import points_in_quad
from fractree.render import (
    EXPORT_224,
    ColorMap,
    RenderConfig,
    export_224,
    render_png,
    render_svg,
    to_canvas,
    tree_filename,
    write_png,
)


def tree(depth=5, seed=17, **kw):
    defaults = dict(e=1.0, b=1.5, branching_angle=math.radians(90), v=1.0)
    defaults.update(kw)
    return grow(TreeParams(depth=depth, seed=seed, **defaults))


class TestColorMap:
    def test_endpoints_exact(self):
        cm = ColorMap()
        assert cm.color(0, 12) == (0, 0, 0)
        assert cm.color(12, 12) == (0, 255, 0)

    def test_depth0_uses_start(self):
        assert ColorMap().color(0, 0) == (0, 0, 0)

    def test_monotone_channels(self):
        cm = ColorMap(start=(10, 0, 200), end=(200, 255, 0))
        cols = [cm.color(k, 9) for k in range(10)]
        for ch in range(3):
            vals = [c[ch] for c in cols]
            assert vals == sorted(vals) or vals == sorted(vals, reverse=True)

    def test_table_matches_scalar(self):
        cm = ColorMap()
        table = cm.table(7)
        assert table.shape == (8, 3)
        for k in range(8):
            assert tuple(table[k]) == cm.color(k, 7)


class TestRenderConfig:
    def test_rejects_bad_margin(self):
        with pytest.raises(ValidationError):
            RenderConfig(margin=0.5)

    def test_rejects_zero_canvas(self):
        with pytest.raises(ValidationError):
            RenderConfig(width=0)


class TestSvg:
    def test_depth5_has_63_polygons(self):
        svg = render_svg(tree(depth=5))
        assert svg.count("<polygon") == 63

    def test_depth0_single_black_polygon(self):
        svg = render_svg(tree(depth=0))
        assert svg.count("<polygon") == 1
        assert 'fill="#000000"' in svg

    def test_deepest_fill_is_end_color(self):
        svg = render_svg(tree(depth=4))
        assert 'fill="#00ff00"' in svg

    def test_custom_end_color(self):
        cfg = RenderConfig(colormap=ColorMap(end=(255, 128, 0)))
        assert 'fill="#ff8000"' in render_svg(tree(depth=3), cfg)

    def test_byte_deterministic(self):
        a = render_svg(tree(depth=6, seed=4))
        b = render_svg(tree(depth=6, seed=4))
        assert a == b

    def test_viewbox_is_padded_bbox(self):
        g = tree(depth=3)
        svg = render_svg(g, RenderConfig(margin=0.0))
        match = re.search(r'viewBox="([^"]+)"', svg)
        vx, vy, vw, vh = (float(x) for x in match.group(1).split())
        minx, miny, maxx, maxy = g.bounding_box()
        assert vx == pytest.approx(minx)
        assert vy == pytest.approx(-maxy)
        assert vw == pytest.approx(maxx - minx)
        assert vh == pytest.approx(maxy - miny)

    def test_background_rect_optional(self):
        g = tree(depth=2)
        assert "<rect" in render_svg(g)
        assert "<rect" not in render_svg(g, RenderConfig(background=None))


class TestPng:
    def test_deterministic_pixels(self):
        a = render_png(tree(depth=6, seed=9))
        b = render_png(tree(depth=6, seed=9))
        assert np.array_equal(a, b)

    def test_root_rectangle_extent(self):
        # Solid depth-0 rectangle occupies its analytic projection +-1px.
        g = tree(depth=0, e=2.0)
        cfg = RenderConfig(width=200, height=300, margin=0.1)
        img = render_png(g, cfg)
        filled = np.argwhere((img != 255).any(axis=2))
        (i0, j0), (i1, j1) = filled.min(axis=0), filled.max(axis=0)
        corners = to_canvas(g.xy, g, cfg)[0]
        assert j0 == pytest.approx(corners[:, 0].min(), abs=1.0)
        assert j1 == pytest.approx(corners[:, 0].max(), abs=1.0)
        assert i0 == pytest.approx(corners[:, 1].min(), abs=1.0)
        assert i1 == pytest.approx(corners[:, 1].max(), abs=1.0)

    def test_deepest_quads_pure_green(self):
        g = tree(depth=5, seed=23)
        cfg = RenderConfig(width=512, height=512)
        img = render_png(g, cfg)
        # The last-emitted quad is a leaf; nothing paints over it.
        center = to_canvas(g.xy[-1:], g, cfg)[0].mean(axis=0)
        px = img[int(center[1]), int(center[0])]
        assert tuple(px) == (0, 255, 0)

    def test_coverage_matches_point_in_quad(self):
        # >= 99.9% agreement between raster coverage and geometric
        # point-in-quad on a random sample; pixels near edges exempt.
        g = tree(depth=5, seed=31, b=1.4)
        cfg = RenderConfig(width=512, height=512)
        img = render_png(g, cfg)
        quads = to_canvas(g.xy, g, cfg)
        rng = np.random.default_rng(0)
        pts = rng.uniform([0, 0], [512, 512], size=(10_000, 2))

        inside = np.zeros(len(pts), dtype=bool)
        for q in quads:
            inside |= points_in_quad(pts, q)
        filled = (img[pts[:, 1].astype(int), pts[:, 0].astype(int)] != 255).any(axis=1)

        # Distance to the nearest quad edge, vectorized over segments.
        a = quads.reshape(-1, 2)
        bvec = quads[:, [1, 2, 3, 0], :].reshape(-1, 2) - a
        seg_len2 = (bvec**2).sum(axis=1)
        rel = pts[:, None, :] - a[None, :, :]
        t = np.clip((rel * bvec).sum(axis=2) / seg_len2, 0.0, 1.0)
        d2 = ((rel - t[:, :, None] * bvec[None]) ** 2).sum(axis=2).min(axis=1)
        interior = d2 > 0.8**2

        agree = (inside == filled) | ~interior
        assert agree.mean() >= 0.999

    def test_export_224_dimensions(self, tmp_path):
        path = tmp_path / "tree.png"
        export_224(tree(depth=4), path)
        with Image.open(path) as img:
            assert img.size == (224, 224)
            corners = np.asarray(img)[[0, 0, -1, -1], [0, -1, 0, -1]]
        # Letterboxed onto white.
        assert (corners == 255).all()

    def test_export_preset_is_white_square(self):
        assert EXPORT_224.width == EXPORT_224.height == 224
        assert EXPORT_224.background == (255, 255, 255)

    def test_png_file_bytes_deterministic(self, tmp_path):
        g = tree(depth=5, seed=3)
        p1, p2 = tmp_path / "a.png", tmp_path / "b.png"
        write_png(g, p1)
        write_png(g, p2)
        assert p1.read_bytes() == p2.read_bytes()


def test_svg_png_filled_region_overlap():
    # Rasterize the SVG's polygons independently (matplotlib path fill)
    # and compare with the PNG coverage: IoU >= 0.98 at 1024^2.
    from matplotlib.path import Path as MplPath

    g = tree(depth=5, seed=8, b=1.6, branching_angle=math.radians(75))
    cfg = RenderConfig(width=1024, height=1024)
    png_mask = (render_png(g, cfg) != 255).any(axis=2)

    svg = render_svg(g, cfg)
    vx, vy, vw, vh = (
        float(x) for x in re.search(r'viewBox="([^"]+)"', svg).group(1).split()
    )
    scale = min(cfg.width / vw, cfg.height / vh)
    tx = (cfg.width - scale * vw) / 2 - scale * vx
    ty = (cfg.height - scale * vh) / 2 - scale * vy

    jj, ii = np.meshgrid(np.arange(cfg.width) + 0.5, np.arange(cfg.height) + 0.5)
    user = np.stack([(jj.ravel() - tx) / scale, (ii.ravel() - ty) / scale], axis=1)
    svg_mask = np.zeros(user.shape[0], dtype=bool)
    for match in re.finditer(r'<polygon points="([^"]+)"', svg):
        pts = np.array(
            [[float(c) for c in pair.split(",")] for pair in match.group(1).split()]
        )
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        box = np.flatnonzero(
            (user[:, 0] >= lo[0]) & (user[:, 0] <= hi[0])
            & (user[:, 1] >= lo[1]) & (user[:, 1] <= hi[1])
        )
        if box.size:
            svg_mask[box] |= MplPath(pts).contains_points(user[box])
    svg_mask = svg_mask.reshape(cfg.height, cfg.width)

    inter = (png_mask & svg_mask).sum()
    union = (png_mask | svg_mask).sum()
    assert inter / union >= 0.98


def test_tree_filename():
    p = TreeParams(e=5, b=1.618, branching_angle=math.radians(67), v=1,
                   depth=12, seed=42)
    assert tree_filename(p, "png") == "T_e5_b1.618_a67_v1_d12_s42.png"
    p2 = TreeParams(e=0.5, b=2, branching_angle=math.radians(90), v=1.25,
                    depth=3, seed=1)
    assert tree_filename(p2, "svg") == "T_e0.5_b2_a90_v1.25_d3_s1.svg"


def test_render_empty_rejected():
    g = tree(depth=0)
    broken = g.__class__(xy=g.xy[:0], depths=g.depths[:0], params=g.params,
                         transforms=g.transforms)
    with pytest.raises(ValidationError):
        render_svg(broken)
    with pytest.raises(ValidationError):
        render_png(broken)
