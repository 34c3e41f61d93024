"""Per-parameter-cell aggregation of score records.

Cells group records by a chosen subset of parameters; each cell gets
the mean and standard deviation of p_tree across everything that landed
in it (repetitions, and multiple models when score files are pooled).
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .scoring import PARAM_FIELDS, ScoreRecord


@dataclass(frozen=True)
class CellAggregate:
    cell: tuple[tuple[str, str], ...]  # ((param, value), ...) in by-order
    n: int
    mean_p_tree: float
    std_p_tree: float

    def cell_dict(self) -> dict[str, str]:
        return dict(self.cell)


def aggregate(records: list[ScoreRecord], by: tuple[str, ...] = ("e", "b")) -> list[CellAggregate]:
    """Group records by parameter values; permutation-invariant.

    Groups left empty after dropping errored records are excluded with a
    warning.  Standard deviation is the population std (a single record
    gives 0).
    """
    for key in by:
        if key not in PARAM_FIELDS:
            raise ValueError(f"cannot group by {key!r}; choose from {PARAM_FIELDS}")
    groups: dict[tuple, list[float]] = {}
    for r in records:
        cell = tuple((k, str(r.params.get(k, ""))) for k in by)
        groups.setdefault(cell, [])
        if r.ok and r.p_tree is not None:
            groups[cell].append(r.p_tree)

    out = []
    for cell in sorted(groups):
        values = groups[cell]
        if not values:
            warnings.warn(f"cell {dict(cell)} has no scored images; excluded")
            continue
        # Reduce in sorted order so the result is exactly
        # permutation-invariant (float sums are order-sensitive).
        arr = np.sort(np.asarray(values))
        out.append(
            CellAggregate(
                cell=cell,
                n=arr.size,
                mean_p_tree=float(arr.mean()),
                std_p_tree=float(arr.std()),
            )
        )
    return out


def write_aggregates_csv(cells: list[CellAggregate], path: str | Path) -> None:
    """Cells sorted by descending mean, the usual ranking view."""
    if not cells:
        raise ValueError("nothing to write: no aggregated cells")
    by = [k for k, _ in cells[0].cell]
    ordered = sorted(cells, key=lambda c: (-c.mean_p_tree, c.cell))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(by + ["n", "mean_p_tree", "std_p_tree"])
        for c in ordered:
            values = [v for _, v in c.cell]
            writer.writerow(values + [c.n, repr(c.mean_p_tree), repr(c.std_p_tree)])


def grid_data(cells: list[CellAggregate]) -> dict:
    """Surface-plot grid over the first two grouping axes.

    Cells missing from the value product are null in the grid.
    """
    if not cells:
        raise ValueError("nothing to grid: no aggregated cells")
    by = [k for k, _ in cells[0].cell]
    if len(by) < 2:
        raise ValueError("grid output needs two grouping parameters")
    row_key, col_key = by[0], by[1]

    def axis_values(key_index):
        return sorted({c.cell[key_index][1] for c in cells}, key=float)

    rows, cols = axis_values(0), axis_values(1)
    mean = [[None] * len(cols) for _ in rows]
    std = [[None] * len(cols) for _ in rows]
    count = [[0] * len(cols) for _ in rows]
    for c in cells:
        i = rows.index(c.cell[0][1])
        j = cols.index(c.cell[1][1])
        mean[i][j] = c.mean_p_tree
        std[i][j] = c.std_p_tree
        count[i][j] = c.n
    return {
        "axes": [row_key, col_key],
        "rows": [float(r) for r in rows],
        "cols": [float(c) for c in cols],
        "mean": mean,
        "std": std,
        "n": count,
    }


def write_grid_json(cells: list[CellAggregate], path: str | Path) -> None:
    Path(path).write_text(json.dumps(grid_data(cells), indent=2) + "\n",
                          encoding="utf-8")
