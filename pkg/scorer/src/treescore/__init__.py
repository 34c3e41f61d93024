"""treescore: realism scoring for exported fractal-tree images."""

from .aggregate import CellAggregate, aggregate, grid_data, write_aggregates_csv, write_grid_json
from .errors import ConfigError, TreescoreError
from .models import HeuristicTreeClassifier, demo_classifier, load_classifier
from .scoring import (
    ScoreRecord,
    read_labels,
    read_scores_csv,
    score_directory,
    write_scores_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CellAggregate",
    "ConfigError",
    "HeuristicTreeClassifier",
    "ScoreRecord",
    "TreescoreError",
    "aggregate",
    "demo_classifier",
    "grid_data",
    "load_classifier",
    "read_labels",
    "read_scores_csv",
    "score_directory",
    "write_aggregates_csv",
    "write_grid_json",
    "write_scores_csv",
]
