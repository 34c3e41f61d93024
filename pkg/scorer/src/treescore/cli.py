"""Scorer CLI: batch-score exported images, then aggregate by cell."""

from __future__ import annotations

import sys

import click

from .aggregate import aggregate, write_aggregates_csv, write_grid_json
from .errors import ConfigError
from .models import load_classifier
from .scoring import read_scores_csv, score_directory, write_scores_csv


@click.group()
def main() -> None:
    """Realism scoring for exported fractal-tree images."""


@main.command("score")
@click.option("--images", "images_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory of exported 224x224 PNGs.")
@click.option("--labels", "labels_csv", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="labels.csv from the exporter; defaults to scoring "
                   "every PNG in the directory.")
@click.option("--model", "model_spec", default="treescore.models:demo_classifier",
              show_default=True,
              help="Classifier as module.path:attr (instance or factory).")
@click.option("--tree-class", default="tree", show_default=True,
              help="Name of the model's tree-like class.")
@click.option("--out", "out_csv", required=True,
              type=click.Path(dir_okay=False), help="Scores CSV to write.")
def cmd_score(images_dir, labels_csv, model_spec, tree_class, out_csv):
    """Score a dataset directory and write the per-image table."""
    try:
        model = load_classifier(model_spec)
        records = score_directory(images_dir, model, labels_csv, tree_class)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    write_scores_csv(records, out_csv)
    n_err = sum(1 for r in records if not r.ok)
    click.echo(f"scored {len(records) - n_err} images ({n_err} errors) -> {out_csv}")
    for r in records:
        if not r.ok:
            click.echo(f"  skipped {r.file}: {r.error}", err=True)


@main.command("aggregate")
@click.option("--scores", "score_files", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Scores CSV; repeat to pool several models.")
@click.option("--by", default="e,b", show_default=True,
              help="Comma-separated parameter names to group by.")
@click.option("--out", "out_csv", required=True, type=click.Path(dir_okay=False))
@click.option("--grid", "grid_json", default=None, type=click.Path(dir_okay=False),
              help="Optional surface-plot grid JSON (first two axes).")
def cmd_aggregate(score_files, by, out_csv, grid_json):
    """Pool score files and aggregate p_tree per parameter cell."""
    records = [r for path in score_files for r in read_scores_csv(path)]
    keys = tuple(k.strip() for k in by.split(",") if k.strip())
    try:
        cells = aggregate(records, by=keys)
        write_aggregates_csv(cells, out_csv)
        if grid_json:
            write_grid_json(cells, grid_json)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"aggregated {len(records)} records into {len(cells)} cells -> {out_csv}")
    if grid_json:
        click.echo(f"grid: {grid_json}")


if __name__ == "__main__":
    main()
