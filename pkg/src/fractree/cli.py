"""Command-line front end: grow, render, audit, sweep, export-dataset.

Option precedence: explicit flags override values from --config (a JSON
file with one section per subcommand), which override built-in
defaults.  FRACTREE_OUT_DIR sets the default output directory.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from .branching import TreeParams, derive_transforms
from .errors import FormatError, StructuralError, ValidationError
from .generator import grow
from .metrics import audit as run_audit
from .metrics import describe, write_report_csv, write_report_json
from .render import ColorMap, RenderConfig, tree_filename, write_png, write_svg
from .serialize import read_geometry, read_jsonl, write_geometry, write_jsonl
from .sweep import SweepSpec, export_dataset, run_sweep

EXIT_VIOLATIONS = 1
EXIT_STRUCTURAL = 3


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        values = tuple(float(x) for x in str(value).split(",") if x.strip() != "")
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")
    if not values:
        raise click.BadParameter("expected at least one value")
    return values


def _load_config(ctx, param, value):
    if value:
        with open(value, encoding="utf-8") as fh:
            ctx.default_map = json.load(fh)
    return value


@click.group()
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    expose_value=False,
    is_eager=True,
    help="JSON config file; one section per subcommand, keys = option names.",
)
def main() -> None:
    """Generalized Pythagorean fractal tree engine."""


def _tree_options(fn):
    fn = click.option("--e", "e", type=float, default=1.0, show_default=True,
                      help="Trunk elongation (height/width).")(fn)
    fn = click.option("--b", "b", type=float, default=1.0, show_default=True,
                      help="Branch imbalance (larger/smaller width).")(fn)
    fn = click.option("--angle", type=float, default=90.0, show_default=True,
                      help="Angle between child branches, degrees.")(fn)
    fn = click.option("--v", "v", type=float, default=1.0, show_default=True,
                      help="da Vinci factor (children/parent squared widths).")(fn)
    fn = click.option("--depth", type=int, default=8, show_default=True)(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--golden", is_flag=True,
                      help="Golden mode: b = g, rotations locked to the golden ratio.")(fn)
    fn = click.option("--flip-prob", type=float, default=0.5, show_default=True,
                      help="Per-junction triangle flip probability.")(fn)
    return fn


def _render_options(fn):
    fn = click.option("--width", type=int, default=1024, show_default=True)(fn)
    fn = click.option("--height", type=int, default=1024, show_default=True)(fn)
    fn = click.option("--margin", type=float, default=0.04, show_default=True)(fn)
    fn = click.option("--end-color", type=str, default="00ff00", show_default=True,
                      help="Deepest-level fill, hex RGB.")(fn)
    return fn


def _out_option(fn):
    return click.option(
        "--out", type=click.Path(file_okay=False), default=".", show_default=True,
        envvar="FRACTREE_OUT_DIR",
        help="Output directory (or set FRACTREE_OUT_DIR).",
    )(fn)


def _parse_color(value: str) -> tuple[int, int, int]:
    value = value.lstrip("#")
    if len(value) != 6:
        raise click.BadParameter(f"expected 6 hex digits, got {value!r}")
    return tuple(int(value[i : i + 2], 16) for i in (0, 2, 4))


def _make_params(e, b, angle, v, depth, seed, golden, flip_prob) -> TreeParams:
    try:
        return TreeParams(
            e=e, b=b, branching_angle=math.radians(angle), v=v, depth=depth,
            seed=seed, golden_mode=golden, flip_prob=flip_prob,
        )
    except ValidationError as exc:
        raise click.UsageError(str(exc))


def _make_config(width, height, margin, end_color) -> RenderConfig:
    try:
        return RenderConfig(
            width=width, height=height, margin=margin,
            colormap=ColorMap(end=_parse_color(end_color)),
        )
    except ValidationError as exc:
        raise click.UsageError(str(exc))


def _echo_transforms(params: TreeParams) -> None:
    t = derive_transforms(params)
    click.echo(
        "T(e={:g}, b={:g}, angle={:g}°, v={:g}) depth={} seed={}{}".format(
            params.e, params.b, params.branching_angle_deg, params.v,
            params.depth, params.seed, " [golden]" if params.golden_mode else "",
        )
    )
    click.echo(f"scales: s_l={t.s_l:.4f} s_r={t.s_r:.4f} f={t.f:.4f}")
    click.echo(
        f"effective: f*s_l={t.effective_s_l:.4f} f*s_r={t.effective_s_r:.4f}"
    )
    click.echo(
        "rotations: gamma={:.2f}° beta={:.2f}°".format(
            math.degrees(t.gamma), math.degrees(t.beta)
        )
    )


@main.command("grow")
@_tree_options
@_render_options
@_out_option
@click.option(
    "--format", "formats", multiple=True, default=("png",), show_default=True,
    type=click.Choice(["png", "svg", "bin", "jsonl"]),
    help="Output formats; repeatable.",
)
def cmd_grow(e, b, angle, v, depth, seed, golden, flip_prob,
             width, height, margin, end_color, out, formats):
    """Grow one tree, print its transform constants and write files."""
    params = _make_params(e, b, angle, v, depth, seed, golden, flip_prob)
    cfg = _make_config(width, height, margin, end_color)
    _echo_transforms(params)
    geometry = grow(params)
    click.echo(f"quads: {geometry.n_quads}")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    writers = {
        "png": lambda path: write_png(geometry, path, cfg),
        "svg": lambda path: write_svg(geometry, path, cfg),
        "bin": lambda path: write_geometry(geometry, path),
        "jsonl": lambda path: write_jsonl(geometry, path),
    }
    for fmt in formats:
        path = out_dir / tree_filename(params, fmt)
        writers[fmt](path)
        click.echo(f"wrote: {path}")


@main.command("render")
@click.argument("geometry_file", type=click.Path(exists=True, dir_okay=False))
@_render_options
@_out_option
@click.option(
    "--format", "formats", multiple=True, default=("png",), show_default=True,
    type=click.Choice(["png", "svg"]),
)
def cmd_render(geometry_file, width, height, margin, end_color, out, formats):
    """Re-render a serialized geometry file (.bin or .jsonl)."""
    cfg = _make_config(width, height, margin, end_color)
    try:
        if geometry_file.endswith(".jsonl"):
            geometry = read_jsonl(geometry_file)
        else:
            geometry = read_geometry(geometry_file)
    except FormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STRUCTURAL)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for fmt in formats:
        path = out_dir / tree_filename(geometry.params, fmt)
        (write_png if fmt == "png" else write_svg)(geometry, path, cfg)
        click.echo(f"wrote: {path}")


@main.command("audit")
@click.option("--geometry", "geometry_file",
              type=click.Path(exists=True, dir_okay=False),
              help="Audit a serialized geometry instead of regrowing.")
@_tree_options
@click.option("--expect-v", type=float, default=None,
              help="Audit against this v instead of the tree's own.")
@click.option("--tolerance", type=float, default=1e-6, show_default=True)
@click.option("--report-json", type=click.Path(dir_okay=False), default=None)
@click.option("--report-csv", type=click.Path(dir_okay=False), default=None)
def cmd_audit(geometry_file, e, b, angle, v, depth, seed, golden, flip_prob,
              expect_v, tolerance, report_json, report_csv):
    """Verify junction ratios and level areas; exit 1 on violations."""
    try:
        if geometry_file:
            if geometry_file.endswith(".jsonl"):
                geometry = read_jsonl(geometry_file)
            else:
                geometry = read_geometry(geometry_file)
        else:
            geometry = grow(
                _make_params(e, b, angle, v, depth, seed, golden, flip_prob)
            )
        result = run_audit(geometry, v_expected=expect_v, tolerance=tolerance)
    except (FormatError, StructuralError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_STRUCTURAL)
    click.echo(f"{result.n_violations} violations")
    click.echo(describe(result))
    if report_json:
        write_report_json(result, report_json)
        click.echo(f"wrote: {report_json}")
    if report_csv:
        write_report_csv(result, report_csv)
        click.echo(f"wrote: {report_csv}")
    if result.n_violations:
        sys.exit(EXIT_VIOLATIONS)


def _sweep_options(fn):
    fn = click.option("--e", "e", default="1", show_default=True,
                      callback=_float_list, help="Comma-separated elongations.")(fn)
    fn = click.option("--b", "b", default="1", show_default=True,
                      callback=_float_list, help="Comma-separated imbalances.")(fn)
    fn = click.option("--angle", "angle", default="90", show_default=True,
                      callback=_float_list, help="Comma-separated angles, degrees.")(fn)
    fn = click.option("--v", "v", default="1", show_default=True,
                      callback=_float_list, help="Comma-separated da Vinci factors.")(fn)
    fn = click.option("--depth", type=int, default=12, show_default=True)(fn)
    fn = click.option("--reps", type=int, default=1, show_default=True,
                      help="Repetitions per cell (fresh seed each).")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="Base seed; cell seeds derive from it.")(fn)
    fn = click.option("--golden", is_flag=True)(fn)
    fn = click.option("--flip-prob", type=float, default=0.5, show_default=True)(fn)
    fn = click.option("--workers", type=int, default=1, show_default=True)(fn)
    return fn


def _make_spec(e, b, angle, v, depth, reps, seed, golden, flip_prob) -> SweepSpec:
    try:
        return SweepSpec(
            es=e, bs=b, angles_deg=angle, vs=v, depth=depth,
            repetitions=reps, base_seed=seed, golden_mode=golden,
            flip_prob=flip_prob,
        )
    except ValidationError as exc:
        raise click.UsageError(str(exc))


def _finish_sweep(result) -> None:
    click.echo(f"manifest: {result.manifest_path}")
    click.echo(f"files: {len(result.files)} ok, {result.n_failed} failed")
    if result.montage_path:
        click.echo(f"montage: {result.montage_path}")
    if result.n_failed:
        sys.exit(1)


@main.command("sweep")
@_sweep_options
@click.option("--format", "formats", multiple=True, default=("png",),
              show_default=True, type=click.Choice(["png", "svg", "bin"]))
@click.option("--size", type=int, default=512, show_default=True,
              help="Square render size per cell, pixels.")
@click.option("--montage/--no-montage", default=False, show_default=True)
@_out_option
def cmd_sweep(e, b, angle, v, depth, reps, seed, golden, flip_prob,
              workers, formats, size, montage, out):
    """Render the full parameter grid with a manifest."""
    spec = _make_spec(e, b, angle, v, depth, reps, seed, golden, flip_prob)
    cfg = RenderConfig(width=size, height=size)
    result = run_sweep(spec, out, formats=formats, cfg=cfg, workers=workers,
                       montage=montage)
    _finish_sweep(result)


@main.command("export-dataset")
@_sweep_options
@_out_option
def cmd_export_dataset(e, b, angle, v, depth, reps, seed, golden,
                       flip_prob, workers, out):
    """Export 224x224 classifier inputs plus labels.csv."""
    spec = _make_spec(e, b, angle, v, depth, reps, seed, golden, flip_prob)
    result = export_dataset(spec, out, workers=workers)
    click.echo(f"labels: {Path(out) / 'labels.csv'}")
    _finish_sweep(result)


if __name__ == "__main__":
    main()
