"""Audits generated geometry against the branching rules.

The audit reconstructs parentage from the preorder emission contract,
measures per-junction children-to-parent squared-width ratios (which
must all equal the da Vinci factor v) and per-level shoelace area sums
(which must follow e * v**k).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import StructuralError
from .generator import TreeGeometry, preorder_level_positions
from .geometry import shoelace_area

DEFAULT_RATIO_TOL = 1e-6


@dataclass
class JunctionAudit:
    """Audit result: per-junction ratios, per-level sums, global stats."""

    v_expected: float
    tolerance: float
    parent_width: np.ndarray  # (n_junctions,)
    left_width: np.ndarray
    right_width: np.ndarray
    ratio: np.ndarray  # (w_l^2 + w_r^2) / w_p^2 per junction
    violations: np.ndarray  # indices into the junction arrays
    level_count: np.ndarray  # (depth+1,)
    level_area: np.ndarray
    level_area_expected: np.ndarray
    bbox: tuple[float, float, float, float]
    lean: float

    @property
    def n_junctions(self) -> int:
        return self.ratio.shape[0]

    @property
    def n_violations(self) -> int:
        return self.violations.shape[0]

    @property
    def max_ratio_deviation(self) -> float:
        if self.n_junctions == 0:
            return 0.0
        return float(np.abs(self.ratio - self.v_expected).max())


def _infer_depth(n_quads: int) -> int:
    depth = int(n_quads + 1).bit_length() - 2
    if depth < 0 or (1 << (depth + 1)) - 1 != n_quads:
        raise StructuralError(
            f"{n_quads} quads is not a full binary tree (expected 2**(d+1)-1)"
        )
    return depth


def audit(
    geometry: TreeGeometry,
    v_expected: float | None = None,
    tolerance: float = DEFAULT_RATIO_TOL,
) -> JunctionAudit:
    """Exhaustively audit a tree emitted in the standard preorder.

    v_expected defaults to the v the tree was grown with; pass another
    value to audit against a different target (all junctions of a
    well-formed tree will then be flagged).
    """
    n = geometry.n_quads
    depth = _infer_depth(n)
    declared = geometry.params.depth
    if declared != depth:
        raise StructuralError(
            f"geometry declares depth {declared} but holds {n} quads"
        )
    if v_expected is None:
        v_expected = geometry.params.v

    levels = preorder_level_positions(depth)
    for k, positions in enumerate(levels):
        if not np.all(geometry.depths[positions] == k):
            raise StructuralError(f"level {k} quads are not where preorder puts them")

    widths = np.linalg.norm(geometry.xy[:, 1] - geometry.xy[:, 0], axis=1)
    areas = shoelace_area(geometry.xy)

    if depth > 0:
        parent_idx = np.concatenate(levels[:-1])
        left_idx = np.concatenate([lv[0::2] for lv in levels[1:]])
        right_idx = np.concatenate([lv[1::2] for lv in levels[1:]])
        w_p = widths[parent_idx]
        w_l = widths[left_idx]
        w_r = widths[right_idx]
        ratio = (w_l**2 + w_r**2) / w_p**2
        violations = np.flatnonzero(np.abs(ratio - v_expected) > tolerance)
    else:
        w_p = w_l = w_r = ratio = np.empty(0, dtype=np.float64)
        violations = np.empty(0, dtype=np.int64)

    level_count = np.array([lv.size for lv in levels])
    level_area = np.array([float(areas[lv].sum()) for lv in levels])
    e, v = geometry.params.e, geometry.params.v
    level_area_expected = np.array([e * v**k for k in range(depth + 1)])

    lo = geometry.xy.min(axis=(0, 1))
    hi = geometry.xy.max(axis=(0, 1))
    bbox = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    # Lean: area-weighted horizontal centroid offset from the root base
    # center, per unit of tree height.  Invented convenience metric.
    centroids_x = geometry.xy[:, :, 0].mean(axis=1)
    root_center_x = float(geometry.xy[0, :2, 0].mean())
    height = hi[1] - geometry.xy[0, :2, 1].min()
    if height > 0 and areas.sum() > 0:
        lean = float(
            ((centroids_x - root_center_x) * areas).sum() / areas.sum() / height
        )
    else:
        lean = 0.0

    return JunctionAudit(
        v_expected=float(v_expected),
        tolerance=tolerance,
        parent_width=w_p,
        left_width=w_l,
        right_width=w_r,
        ratio=ratio,
        violations=violations,
        level_count=level_count,
        level_area=level_area,
        level_area_expected=level_area_expected,
        bbox=bbox,
        lean=lean,
    )


def level_area(geometry: TreeGeometry, k: int) -> float:
    """Total shoelace area of the level-k quads."""
    depth = _infer_depth(geometry.n_quads)
    if not 0 <= k <= depth:
        raise ValueError(f"level {k} out of range 0..{depth}")
    mask = geometry.depths == k
    return float(shoelace_area(geometry.xy[mask]).sum())


def _summary_dict(a: JunctionAudit) -> dict:
    return {
        "v_expected": a.v_expected,
        "tolerance": a.tolerance,
        "n_junctions": a.n_junctions,
        "n_violations": a.n_violations,
        "max_ratio_deviation": a.max_ratio_deviation,
        "bbox": list(a.bbox),
        "lean": a.lean,
    }


def write_report_json(a: JunctionAudit, path: str | Path) -> None:
    report = {
        "summary": _summary_dict(a),
        "levels": [
            {
                "level": k,
                "count": int(a.level_count[k]),
                "area": a.level_area[k],
                "expected_area": a.level_area_expected[k],
                "relative_error": abs(a.level_area[k] - a.level_area_expected[k])
                / a.level_area_expected[k],
            }
            for k in range(a.level_count.size)
        ],
    }
    Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")


def write_report_csv(a: JunctionAudit, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "count", "area", "expected_area", "relative_error"])
        for k in range(a.level_count.size):
            rel = abs(a.level_area[k] - a.level_area_expected[k]) / a.level_area_expected[k]
            writer.writerow(
                [k, int(a.level_count[k]), repr(a.level_area[k]),
                 repr(a.level_area_expected[k]), f"{rel:.3e}"]
            )
        writer.writerow([])
        for key, value in _summary_dict(a).items():
            writer.writerow([key, value])


def describe(a: JunctionAudit) -> str:
    """One-paragraph human summary used by the CLI."""
    lines = [
        f"junctions audited: {a.n_junctions}",
        f"violations (|ratio - {a.v_expected:g}| > {a.tolerance:g}): {a.n_violations}",
        f"max junction ratio deviation: {a.max_ratio_deviation:.3e}",
        f"bbox: ({a.bbox[0]:.4f}, {a.bbox[1]:.4f}) .. ({a.bbox[2]:.4f}, {a.bbox[3]:.4f})",
        f"lean: {a.lean:+.4f}",
    ]
    worst = 0.0
    for k in range(a.level_count.size):
        worst = max(
            worst,
            abs(a.level_area[k] - a.level_area_expected[k]) / a.level_area_expected[k],
        )
    lines.append(f"max level-area relative error: {worst:.3e}")
    return "\n".join(lines)
