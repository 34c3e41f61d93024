"""Batch scoring: records, errors, determinism, CSV round-trip."""

import numpy as np
import pytest
from PIL import Image

from treescore import (
    ConfigError,
    HeuristicTreeClassifier,
    read_scores_csv,
    score_directory,
    write_scores_csv,
)


@pytest.fixture
def model():
    return HeuristicTreeClassifier()


def test_one_record_per_image(plateau_dir, model):
    records = score_directory(plateau_dir, model, plateau_dir / "labels.csv")
    assert len(records) == 10
    assert all(r.ok for r in records)
    assert all(0.0 <= r.p_tree <= 1.0 for r in records)
    assert all(len(r.top) == 3 for r in records)


def test_top3_sorted_descending(plateau_dir, model):
    records = score_directory(plateau_dir, model, plateau_dir / "labels.csv")
    for r in records:
        probs = [p for _, p in r.top]
        assert probs == sorted(probs, reverse=True)


def test_params_carried_from_labels(plateau_dir, model):
    records = score_directory(plateau_dir, model, plateau_dir / "labels.csv")
    for r in records:
        assert r.params["angle"] == "70.0"
        assert float(r.params["e"]) in (2.0, 2.5, 3.0, 3.5, 4.0)


def test_scoring_deterministic(plateau_dir, model, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_scores_csv(score_directory(plateau_dir, model, plateau_dir / "labels.csv"), a)
    write_scores_csv(score_directory(plateau_dir, model, plateau_dir / "labels.csv"), b)
    assert a.read_text() == b.read_text()


def test_csv_round_trip(plateau_dir, model, tmp_path):
    records = score_directory(plateau_dir, model, plateau_dir / "labels.csv")
    path = tmp_path / "scores.csv"
    write_scores_csv(records, path)
    back = read_scores_csv(path)
    by_file = {r.file: r for r in records}
    assert len(back) == len(records)
    for r in back:
        orig = by_file[r.file]
        assert r.p_tree == orig.p_tree
        assert r.top == orig.top
        assert r.params == orig.params


def test_csv_sorted_by_p_tree(plateau_dir, model, tmp_path):
    records = score_directory(plateau_dir, model, plateau_dir / "labels.csv")
    path = tmp_path / "scores.csv"
    write_scores_csv(records, path)
    p_trees = [r.p_tree for r in read_scores_csv(path)]
    assert p_trees == sorted(p_trees, reverse=True)


def test_missing_tree_class_rejected(plateau_dir):
    class NoTreeModel:
        class_names = ("cat", "dog")

        def predict(self, images):
            return np.full((len(images), 2), 0.5)

    with pytest.raises(ConfigError, match="do not include"):
        score_directory(plateau_dir, NoTreeModel())


def test_unreadable_image_recorded_and_run_continues(tmp_path, model):
    img = np.full((224, 224, 3), 255, np.uint8)
    Image.fromarray(img).save(tmp_path / "good.png")
    (tmp_path / "bad.png").write_bytes(b"this is not a png")
    records = score_directory(tmp_path, model)
    by_file = {r.file: r for r in records}
    assert by_file["bad.png"].error is not None
    assert by_file["good.png"].ok


def test_all_white_image_scores_without_error(tmp_path, model):
    Image.fromarray(np.full((224, 224, 3), 255, np.uint8)).save(tmp_path / "w.png")
    records = score_directory(tmp_path, model)
    assert len(records) == 1 and records[0].ok
    assert records[0].p_tree < 0.1


def test_wrong_size_recorded_as_error(tmp_path, model):
    Image.fromarray(np.full((100, 100, 3), 255, np.uint8)).save(tmp_path / "s.png")
    records = score_directory(tmp_path, model)
    assert records[0].error is not None
    assert "224" in records[0].error


def test_errors_written_and_read_back(tmp_path, model):
    (tmp_path / "bad.png").write_bytes(b"nope")
    records = score_directory(tmp_path, model)
    path = tmp_path / "scores.csv"
    write_scores_csv(records, path)
    back = read_scores_csv(path)
    assert back[0].error is not None
    assert back[0].p_tree is None
