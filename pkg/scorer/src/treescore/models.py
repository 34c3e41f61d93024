"""Classifier plumbing: the model interface, a dotted-path loader, and a
small built-in heuristic classifier for smoke tests and demos.

A model is any object with a ``class_names`` sequence and a
``predict(images)`` method taking a uint8 batch of shape
(n, height, width, 3) and returning (n, n_classes) probabilities.
Serious use plugs in an externally trained network; the built-in
classifier only reads simple image statistics.
"""

from __future__ import annotations

import importlib
import math
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import ConfigError


@runtime_checkable
class ImageClassifier(Protocol):
    class_names: Sequence[str]

    def predict(self, images: np.ndarray) -> np.ndarray: ...


def load_classifier(spec: str) -> ImageClassifier:
    """Load a classifier from a ``module.path:attribute`` spec.

    The attribute may be a ready instance or a zero-argument factory.
    """
    module_name, sep, attr = spec.partition(":")
    if not sep or not attr:
        raise ConfigError(f"model spec must look like 'pkg.module:attr', got {spec!r}")
    try:
        module = importlib.import_module(module_name)
    except ImportError as exc:
        raise ConfigError(f"cannot import model module {module_name!r}: {exc}") from exc
    try:
        obj = getattr(module, attr)
    except AttributeError as exc:
        raise ConfigError(f"{module_name!r} has no attribute {attr!r}") from exc
    model = obj() if callable(obj) and not isinstance(obj, ImageClassifier) else obj
    if not isinstance(model, ImageClassifier):
        raise ConfigError(f"{spec!r} is not an image classifier (class_names + predict)")
    return model


def _gauss(x: float, center: float, sigma: float) -> float:
    return math.exp(-((x - center) / sigma) ** 2 / 2.0)


def _log_gauss(x: float, center: float, sigma: float) -> float:
    if x <= 0:
        return 0.0
    return math.exp(-((math.log(x / center)) / sigma) ** 2 / 2.0)


class HeuristicTreeClassifier:
    """Pixel-statistics stand-in for a trained network.

    Scores five coarse shape classes from ink coverage, bounding-box
    aspect, perimeter-to-area ratio (branching fineness) and how far the
    green mass sits above the dark mass (canopy over trunk).  Intended
    for pipeline tests and demos, not as a serious tree detector.
    """

    class_names = ("tree", "blob", "stick", "slab", "other")

    def predict(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images)
        if images.ndim != 4 or images.shape[-1] != 3:
            raise ValueError(f"expected (n, h, w, 3) uint8 batch, got {images.shape}")
        return np.stack([self._predict_one(img) for img in images])

    def _predict_one(self, img: np.ndarray) -> np.ndarray:
        scores = dict.fromkeys(self.class_names, 0.02)
        f = self._features(img)
        if f is not None:
            ink, aspect, edge, rise = f
            scores["tree"] = (
                _log_gauss(aspect, 1.05, 0.22)
                * _gauss(ink, 0.12, 0.05)
                * _gauss(edge, 0.52, 0.10)
                * _gauss(rise, 37.0, 10.0)
            )
            scores["blob"] = _gauss(ink, 0.45, 0.20) * _gauss(edge, 0.15, 0.10)
            scores["stick"] = _log_gauss(aspect, 4.0, 0.50)
            scores["slab"] = _log_gauss(aspect, 0.5, 0.30) * _gauss(rise, 15.0, 10.0)
            scores = {k: v + 1e-4 for k, v in scores.items()}
        else:
            scores["other"] = 0.9
        total = sum(scores.values())
        return np.array([scores[c] / total for c in self.class_names])

    @staticmethod
    def _features(img: np.ndarray) -> tuple[float, float, float, float] | None:
        a = img.astype(np.int16)
        ink = (a < 250).any(axis=2)
        n_ink = int(ink.sum())
        if n_ink == 0:
            return None
        ys, xs = np.nonzero(ink)
        aspect = (np.ptp(ys) + 1) / (np.ptp(xs) + 1)
        pad = np.pad(ink, 1)
        interior = (
            pad[:-2, 1:-1] & pad[2:, 1:-1] & pad[1:-1, :-2] & pad[1:-1, 2:]
        )
        edge = float((ink & ~interior).sum()) / n_ink
        green = ink & (a[..., 1] > a[..., 0] + 20) & (a[..., 1] > a[..., 2] + 20)
        dark = ink & (a[..., 1] <= 128)
        mid = img.shape[0] / 2.0
        y_green = float(ys[green[ys, xs]].mean()) if green.any() else mid
        y_dark = float(ys[dark[ys, xs]].mean()) if dark.any() else mid
        rise = y_dark - y_green  # canopy above trunk => positive
        return n_ink / ink.size, float(aspect), edge, rise


def demo_classifier() -> HeuristicTreeClassifier:
    """Factory used by docs and tests: ``treescore.models:demo_classifier``."""
    return HeuristicTreeClassifier()
