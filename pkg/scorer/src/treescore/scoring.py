"""Batch scoring of exported tree images with a pluggable classifier.

Consumes the dataset layout written by the generator's export command
(a directory of PNGs plus ``labels.csv``) and emits one record per
image: the probability of the designated tree class and the top-3
classes.  Records are written as CSV sorted by descending p_tree.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import ConfigError
from .models import ImageClassifier

PARAM_FIELDS = ["e", "b", "angle", "v", "depth", "seed", "rep"]
EXPECTED_SIZE = (224, 224)


@dataclass
class ScoreRecord:
    """One scored image: provenance params, p(tree) and the top-3 classes."""

    file: str
    params: dict = field(default_factory=dict)
    p_tree: float | None = None
    top: list[tuple[str, float]] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def read_labels(labels_csv: str | Path) -> list[dict]:
    """Rows of the generator's labels.csv (file plus parameter columns)."""
    with open(labels_csv, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def score_directory(
    images_dir: str | Path,
    model: ImageClassifier,
    labels_csv: str | Path | None = None,
    tree_class: str = "tree",
    batch_size: int = 64,
    expected_size: tuple[int, int] | None = EXPECTED_SIZE,
) -> list[ScoreRecord]:
    """Score every labeled image; unreadable files become error records.

    Deterministic for a fixed model and input set.  Raises ConfigError
    when the model does not expose ``tree_class``.
    """
    class_names = list(model.class_names)
    if tree_class not in class_names:
        raise ConfigError(
            f"model classes {class_names} do not include {tree_class!r}; "
            "set --tree-class to the model's tree-like class"
        )
    tree_idx = class_names.index(tree_class)
    images_dir = Path(images_dir)

    if labels_csv is not None:
        rows = read_labels(labels_csv)
        jobs = [
            (row["file"], {k: row[k] for k in PARAM_FIELDS if k in row})
            for row in rows
        ]
    else:
        jobs = [(p.name, {}) for p in sorted(images_dir.glob("*.png"))]

    records: list[ScoreRecord] = []
    batch: list[np.ndarray] = []
    pending: list[ScoreRecord] = []

    def flush() -> None:
        if not pending:
            return
        probs = np.asarray(model.predict(np.stack(batch)))
        for record, p in zip(pending, probs):
            order = np.argsort(p)[::-1][:3]
            record.p_tree = float(p[tree_idx])
            record.top = [(class_names[i], float(p[i])) for i in order]
        records.extend(pending)
        batch.clear()
        pending.clear()

    for name, params in jobs:
        record = ScoreRecord(file=name, params=params)
        try:
            with Image.open(images_dir / name) as img:
                rgb = img.convert("RGB")
                if expected_size is not None and rgb.size != expected_size:
                    raise ValueError(
                        f"expected {expected_size[0]}x{expected_size[1]} input, "
                        f"got {rgb.size[0]}x{rgb.size[1]}"
                    )
                arr = np.asarray(rgb, dtype=np.uint8)
        except (OSError, ValueError) as exc:
            record.error = str(exc)
            records.append(record)
            continue
        batch.append(arr)
        pending.append(record)
        if len(batch) >= batch_size:
            flush()
    flush()
    return records


def write_scores_csv(records: list[ScoreRecord], path: str | Path) -> None:
    """Table of results, descending by p_tree (errors last)."""
    ordered = sorted(
        records, key=lambda r: (r.p_tree is None, -(r.p_tree or 0.0), r.file)
    )
    fields = (
        ["file"] + PARAM_FIELDS + ["p_tree"]
        + [f"class{i}" for i in (1, 2, 3)]
        + [f"p_class{i}" for i in (1, 2, 3)]
        + ["error"]
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for r in ordered:
            row = {"file": r.file, "error": r.error or ""}
            row.update({k: r.params.get(k, "") for k in PARAM_FIELDS})
            if r.ok:
                row["p_tree"] = repr(r.p_tree)
                for i, (name, p) in enumerate(r.top, start=1):
                    row[f"class{i}"] = name
                    row[f"p_class{i}"] = repr(p)
            writer.writerow(row)


def read_scores_csv(path: str | Path) -> list[ScoreRecord]:
    """Inverse of write_scores_csv."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            record = ScoreRecord(
                file=row["file"],
                params={k: row[k] for k in PARAM_FIELDS if row.get(k, "") != ""},
                error=row["error"] or None,
            )
            if record.error is None:
                record.p_tree = float(row["p_tree"])
                record.top = [
                    (row[f"class{i}"], float(row[f"p_class{i}"]))
                    for i in (1, 2, 3)
                    if row.get(f"class{i}", "")
                ]
            records.append(record)
    return records
