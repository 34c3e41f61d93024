"""Parameter-grid sweeps: batch generation, manifests, montages and the
224x224 dataset export.

Every (cell, repetition) gets a seed derived from (base seed, cell
index, repetition index), so sweeps are reproducible file-for-file and
independent of worker count or scheduling order.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

from .branching import TreeParams
from .errors import ValidationError
from .generator import GENERATOR_VERSION, grow
from .render import EXPORT_224, RenderConfig, tree_filename, write_png, write_svg
from .seeding import derive_seed
from .serialize import write_geometry

MANIFEST_SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"
LABELS_NAME = "labels.csv"
LABELS_FIELDS = ["file", "e", "b", "angle", "v", "depth", "seed", "rep"]

#: Axes in sweep order; also the montage row/column priority.
AXES = ("e", "b", "angle", "v")


@dataclass(frozen=True)
class SweepSpec:
    """Value grid for a sweep: the cross product of the four parameter
    lists, repeated ``repetitions`` times per cell."""

    es: tuple[float, ...]
    bs: tuple[float, ...]
    angles_deg: tuple[float, ...]
    vs: tuple[float, ...]
    depth: int = 12
    repetitions: int = 1
    base_seed: int = 0
    golden_mode: bool = False
    flip_prob: float = 0.5

    def __post_init__(self) -> None:
        for name in ("es", "bs", "angles_deg", "vs"):
            values = tuple(float(x) for x in getattr(self, name))
            if not values:
                raise ValidationError(f"sweep axis {name} must be non-empty")
            object.__setattr__(self, name, values)
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")

    @property
    def axis_values(self) -> dict[str, tuple[float, ...]]:
        return {
            "e": self.es, "b": self.bs, "angle": self.angles_deg, "v": self.vs,
        }

    @property
    def n_cells(self) -> int:
        return len(self.es) * len(self.bs) * len(self.angles_deg) * len(self.vs)

    def cells(self):
        """Yield (cell_index, e, b, angle_deg, v) in grid order."""
        index = 0
        for e in self.es:
            for b in self.bs:
                for angle in self.angles_deg:
                    for v in self.vs:
                        yield index, e, b, angle, v
                        index += 1

    def cell_params(self, cell_index: int, e: float, b: float, angle_deg: float,
                    v: float, rep: int) -> TreeParams:
        return TreeParams(
            e=e,
            b=b,
            branching_angle=math.radians(angle_deg),
            v=v,
            depth=self.depth,
            seed=derive_seed(self.base_seed, cell_index, rep),
            golden_mode=self.golden_mode,
            flip_prob=self.flip_prob,
        )

    def to_dict(self) -> dict:
        return {
            "e": list(self.es),
            "b": list(self.bs),
            "angle": list(self.angles_deg),
            "v": list(self.vs),
            "depth": self.depth,
            "repetitions": self.repetitions,
            "base_seed": self.base_seed,
            "golden_mode": self.golden_mode,
            "flip_prob": self.flip_prob,
        }


def _render_cell(job: tuple) -> dict:
    """Worker: grow and write one (cell, repetition). Returns a manifest entry."""
    (spec, cell_index, e, b, angle, v, rep, out_dir, formats, cfg) = job
    entry = {
        "cell": cell_index, "e": e, "b": b, "angle": angle, "v": v, "rep": rep,
    }
    try:
        params = spec.cell_params(cell_index, e, b, angle, v, rep)
        entry["seed"] = params.seed
        geometry = grow(params)
        files = []
        for fmt in formats:
            name = tree_filename(params, fmt)
            path = Path(out_dir) / name
            if fmt == "png":
                write_png(geometry, path, cfg)
            elif fmt == "svg":
                write_svg(geometry, path, cfg)
            elif fmt == "bin":
                write_geometry(geometry, path)
            else:
                raise ValidationError(f"unknown sweep format {fmt!r}")
            files.append(name)
        entry["files"] = files
        entry["status"] = "ok"
    except Exception as exc:  # recorded per cell; the sweep keeps going
        entry["status"] = "error"
        entry["error"] = f"{type(exc).__name__}: {exc}"
    return entry


@dataclass
class SweepResult:
    manifest_path: Path
    entries: list[dict]
    montage_path: Path | None = None

    @property
    def n_failed(self) -> int:
        return sum(1 for e in self.entries if e["status"] != "ok")

    @property
    def files(self) -> list[str]:
        return [f for e in self.entries if e["status"] == "ok" for f in e["files"]]


def run_sweep(
    spec: SweepSpec,
    out_dir: str | Path,
    formats: tuple[str, ...] = ("png",),
    cfg: RenderConfig = RenderConfig(width=512, height=512),
    workers: int = 1,
    montage: bool = False,
) -> SweepResult:
    """Render the whole grid; write a manifest; optionally a montage."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    jobs = [
        (spec, idx, e, b, angle, v, rep, str(out), tuple(formats), cfg)
        for idx, e, b, angle, v in spec.cells()
        for rep in range(spec.repetitions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_render_cell, jobs))
    else:
        entries = [_render_cell(job) for job in jobs]

    montage_path = None
    if montage:
        montage_path = _write_montage(spec, entries, out)

    manifest = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "generator_version": GENERATOR_VERSION,
        "spec": spec.to_dict(),
        "formats": list(formats),
        "n_entries": len(entries),
        "n_ok": sum(1 for e in entries if e["status"] == "ok"),
        "n_failed": sum(1 for e in entries if e["status"] != "ok"),
        "montage": montage_path.name if montage_path else None,
        "entries": entries,
    }
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return SweepResult(manifest_path=manifest_path, entries=entries,
                       montage_path=montage_path)


def montage_axes(spec: SweepSpec) -> tuple[str, str] | None:
    """(row_axis, col_axis) when at most two axes vary, else None.

    Rows take the first varying axis in (e, b, angle, v) priority, so
    an elongation-by-imbalance grid lays out rows=e, columns=b.
    """
    varying = [name for name, vals in spec.axis_values.items() if len(vals) > 1]
    if len(varying) > 2:
        return None
    row = varying[0] if varying else "e"
    col = varying[1] if len(varying) > 1 else ("b" if row != "b" else "v")
    return row, col


def _write_montage(spec: SweepSpec, entries: list[dict], out: Path) -> Path | None:
    axes = montage_axes(spec)
    if axes is None:
        print("montage skipped: more than two parameter axes vary")
        return None
    row_axis, col_axis = axes
    rows = spec.axis_values[row_axis]
    cols = spec.axis_values[col_axis]

    by_key = {}
    for entry in entries:
        if entry["status"] == "ok" and entry["rep"] == 0:
            pngs = [f for f in entry["files"] if f.endswith(".png")]
            if pngs:
                by_key[(entry[row_axis], entry[col_axis])] = pngs[0]
    if not by_key:
        print("montage skipped: no PNG cells rendered")
        return None

    sample = Image.open(out / next(iter(by_key.values())))
    cell_w, cell_h = sample.size
    label_h = 18
    font = ImageFont.load_default()
    canvas = Image.new(
        "RGB", (cell_w * len(cols), (cell_h + label_h) * len(rows)), (255, 255, 255)
    )
    draw = ImageDraw.Draw(canvas)
    for r, rv in enumerate(rows):
        for c, cv in enumerate(cols):
            name = by_key.get((rv, cv))
            if name is None:
                continue
            x, y = c * cell_w, r * (cell_h + label_h)
            canvas.paste(Image.open(out / name), (x, y))
            entry = next(
                e for e in entries
                if e["status"] == "ok" and e["rep"] == 0
                and e[row_axis] == rv and e[col_axis] == cv
            )
            label = "T({:g}, {:g}, {:g}°, {:g})".format(
                entry["e"], entry["b"], entry["angle"], entry["v"]
            )
            draw.text((x + 4, y + cell_h + 2), label, fill=(0, 0, 0), font=font)
    path = out / "montage.png"
    canvas.save(path, format="PNG")
    return path


def export_dataset(
    spec: SweepSpec, out_dir: str | Path, workers: int = 1
) -> SweepResult:
    """Write the classifier dataset: 224x224 PNGs plus labels.csv."""
    result = run_sweep(spec, out_dir, formats=("png",), cfg=EXPORT_224,
                       workers=workers, montage=False)
    labels_path = Path(out_dir) / LABELS_NAME
    with open(labels_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=LABELS_FIELDS)
        writer.writeheader()
        for entry in result.entries:
            if entry["status"] != "ok":
                continue
            writer.writerow(
                {
                    "file": entry["files"][0],
                    "e": entry["e"],
                    "b": entry["b"],
                    "angle": entry["angle"],
                    "v": entry["v"],
                    "depth": spec.depth,
                    "seed": entry["seed"],
                    "rep": entry["rep"],
                }
            )
    return result
