"""Tree growth: counts, connectivity, determinism, streaming equivalence."""

import math

import numpy as np
import pytest

from fractree import (
    DepthCapError,
    TreeParams,
    base_quad,
    child_quads,
    derive_transforms,
    grow,
    grow_streaming,
)
from fractree.generator import preorder_level_positions
from fractree.seeding import flip_decision


def params(e=1.0, b=1.0, angle_deg=90.0, v=1.0, depth=0, seed=0, **kw):
    return TreeParams(
        e=e, b=b, branching_angle=math.radians(angle_deg), v=v, depth=depth,
        seed=seed, **kw,
    )


def reference_tree(p):
    """Preorder quad list built from the per-junction affine reference."""
    t = derive_transforms(p)
    out = []

    def rec(quad, path):
        out.append(quad)
        if quad.depth == p.depth:
            return
        left, right = child_quads(quad, t, flip_decision(p.seed, path, p.flip_prob))
        rec(left, path + "0")
        rec(right, path + "1")

    rec(base_quad(p.e), "")
    return out


def test_depth0_is_root_rectangle():
    g = grow(params(e=3.5))
    assert g.n_quads == 1
    assert np.array_equal(g.xy[0], [[0, 0], [1, 0], [1, 3.5], [0, 3.5]])
    assert g.depths[0] == 0


def test_depth1_unit_pythagoras_children():
    # b=1 makes the flip a no-op, so this holds for any seed.
    g = grow(params(depth=1, seed=99))
    assert g.n_quads == 3
    left, right = g.xy[1], g.xy[2]
    assert np.allclose(left, [[0, 1], [0.5, 1.5], [0, 2], [-0.5, 1.5]], atol=1e-12)
    # Children are sqrt(1/2)-side squares meeting at the apex.
    apex = np.array([0.5, 1.5])
    assert np.allclose(left[1], apex, atol=1e-12)
    assert np.allclose(right[0], apex, atol=1e-12)
    for child in (left, right):
        assert np.linalg.norm(child[1] - child[0]) == pytest.approx(
            math.sqrt(0.5), abs=1e-12
        )


@pytest.mark.parametrize("depth", [0, 1, 2, 5, 10, 13, 16])
def test_quad_count(depth):
    g = grow(params(e=2.0, b=1.3, angle_deg=80, v=1.1, depth=depth, seed=4))
    assert g.n_quads == 2 ** (depth + 1) - 1
    counts = np.bincount(g.depths, minlength=depth + 1)
    assert counts.tolist() == [2**k for k in range(depth + 1)]


def test_quad_count_random_draws():
    rng = np.random.default_rng(77)
    for _ in range(10):
        depth = int(rng.integers(0, 12))
        g = grow(params(
            e=float(rng.uniform(0.1, 10)),
            b=float(rng.uniform(1, 8)),
            angle_deg=float(rng.uniform(20, 160)),
            v=float(rng.uniform(0.7, 1.4)),
            depth=depth,
            seed=int(rng.integers(0, 2**63)),
        ))
        assert g.n_quads == 2 ** (depth + 1) - 1


def test_matches_affine_reference():
    p = params(e=4.0, b=1.8, angle_deg=72, v=1.15, depth=6, seed=31)
    g = grow(p)
    ref = reference_tree(p)
    assert g.n_quads == len(ref)
    for i, quad in enumerate(ref):
        assert g.depths[i] == quad.depth
        np.testing.assert_allclose(g.xy[i], quad.xy, atol=1e-12)


@pytest.mark.parametrize("flip_prob", [0.0, 0.5, 1.0])
def test_junction_connectivity(flip_prob):
    p = params(e=3.0, b=2.2, angle_deg=105, v=0.9, depth=6, seed=8, flip_prob=flip_prob)
    g = grow(p)
    f = derive_transforms(p).f
    levels = preorder_level_positions(p.depth)
    for k in range(p.depth):
        parents = g.xy[levels[k]]
        lefts = g.xy[levels[k + 1][0::2]]
        rights = g.xy[levels[k + 1][1::2]]
        # Children stay anchored to the parent's top corners.
        np.testing.assert_allclose(lefts[:, 0], parents[:, 3], atol=1e-9)
        np.testing.assert_allclose(rights[:, 1], parents[:, 2], atol=1e-9)
        # The branching triangle closes: undoing the da Vinci factor on
        # each child's base edge recovers a single shared apex.  (With
        # f != 1 the drawn quads deliberately overlap or part.)
        apex_l = parents[:, 3] + (lefts[:, 1] - lefts[:, 0]) / f
        apex_r = parents[:, 2] + (rights[:, 0] - rights[:, 1]) / f
        np.testing.assert_allclose(apex_l, apex_r, atol=1e-9)


@pytest.mark.parametrize("flip_prob", [0.0, 0.5, 1.0])
def test_children_share_apex_when_unnormalized(flip_prob):
    # f == 1 (right-angle branching, v=1): children meet at one point.
    p = params(e=2.0, b=1.5, angle_deg=90, v=1.0, depth=5, seed=21, flip_prob=flip_prob)
    assert derive_transforms(p).f == pytest.approx(1.0, abs=1e-12)
    g = grow(p)
    levels = preorder_level_positions(p.depth)
    for k in range(p.depth):
        lefts = g.xy[levels[k + 1][0::2]]
        rights = g.xy[levels[k + 1][1::2]]
        np.testing.assert_allclose(lefts[:, 1], rights[:, 0], atol=1e-9)


def test_elongation_inherited_by_every_quad():
    p = params(e=5.0, b=1.6, angle_deg=67, depth=7, seed=12)
    g = grow(p)
    base = np.linalg.norm(g.xy[:, 1] - g.xy[:, 0], axis=1)
    side = np.linalg.norm(g.xy[:, 3] - g.xy[:, 0], axis=1)
    np.testing.assert_allclose(side / base, 5.0, rtol=1e-9)


def test_determinism_same_params():
    p = params(e=2.0, b=1.7, angle_deg=75, v=1.05, depth=9, seed=1234)
    a, b = grow(p), grow(p)
    assert np.array_equal(a.xy, b.xy)
    assert np.array_equal(a.depths, b.depths)


def test_seed_changes_geometry():
    p1 = params(b=1.5, angle_deg=80, depth=8, seed=1)
    p2 = params(b=1.5, angle_deg=80, depth=8, seed=2)
    assert not np.array_equal(grow(p1).xy, grow(p2).xy)


def test_streaming_equivalence_small():
    p = params(e=2.5, b=1.4, angle_deg=85, v=1.1, depth=5, seed=77)
    g = grow(p)
    got_xy, got_depth = [], []

    def sink(xy, depths):
        got_xy.append(xy.copy())
        got_depth.append(depths.copy())

    summary = grow_streaming(p, sink, chunk_levels=2)
    assert summary.count == 63 == g.n_quads
    assert np.array_equal(np.concatenate(got_xy), g.xy)
    assert np.array_equal(np.concatenate(got_depth), g.depths)
    assert summary.bbox == g.bounding_box()


def test_streaming_chunk_size_invariant():
    p = params(e=1.5, b=1.9, angle_deg=95, depth=8, seed=5)
    outputs = []
    for chunk_levels in (1, 3, 8, 20):
        chunks = []
        grow_streaming(p, lambda xy, d: chunks.append(xy.copy()), chunk_levels)
        outputs.append(np.concatenate(chunks))
    for other in outputs[1:]:
        assert np.array_equal(outputs[0], other)


def test_streaming_count_depth20():
    p = params(e=5.0, b=1.618, angle_deg=67, depth=20, seed=3)
    summary = grow_streaming(p, lambda xy, d: None)
    assert summary.count == 2_097_151


def test_bounding_boxes_nest_across_depths():
    boxes = []
    for depth in (5, 10, 15):
        p = params(e=1.0, b=1.0, angle_deg=90, depth=depth, seed=42)
        boxes.append(grow_streaming(p, lambda xy, d: None).bbox)
    for small, big in zip(boxes, boxes[1:]):
        assert big[0] <= small[0] and big[1] <= small[1]
        assert big[2] >= small[2] and big[3] >= small[3]


def test_depth_cap_enforced():
    with pytest.raises(DepthCapError):
        grow(params(depth=29))
    with pytest.raises(DepthCapError):
        grow_streaming(params(depth=29), lambda xy, d: None)
    # Explicit cap override is honored.
    g = grow(params(depth=3), depth_cap=3)
    assert g.n_quads == 15


def test_sink_errors_propagate():
    def bad_sink(xy, depths):
        raise RuntimeError("disk full")

    with pytest.raises(RuntimeError, match="disk full"):
        grow_streaming(params(depth=4), bad_sink)


def test_preorder_level_positions_shape():
    levels = preorder_level_positions(3)
    assert [len(lv) for lv in levels] == [1, 2, 4, 8]
    # Root first, left child immediately after.
    assert levels[0][0] == 0
    assert levels[1].tolist() == [1, 8]
    assert levels[2].tolist() == [2, 5, 9, 12]
    flat = np.concatenate(levels)
    assert sorted(flat.tolist()) == list(range(15))
