"""Array-in, array-out binding over the opforest classifier.

The binding keeps no numerics of its own: fit, predict, distance, and split
all delegate to the core package, so every number returned here is
bitwise-identical to what the core (and its command line) produces. Calls
are blocking; long fits spend their time inside the core's vectorized
kernels, which release the interpreter lock, and a BoundModel may be shared
across threads for prediction.

Distances are selected by canonical snake-case name (e.g. "euclidean",
"bray_curtis"). Input arrays are never mutated.
"""

from __future__ import annotations

import numpy as np

import opforest
from opforest import Backend, Dataset, SplitSpec
from opforest.classifier import fit as _core_fit
from opforest.classifier import predict_batch as _core_predict_batch
from opforest.distances import distance_by_name, evaluate
from opforest.errors import ShapeError
from opforest.graph import Node, Subgraph

__version__ = opforest.__version__

__all__ = [
    "__version__",
    "BoundModel",
    "ReleasedModelError",
    "distance",
    "fit",
    "load_dataset",
    "predict",
    "split",
]


class ReleasedModelError(RuntimeError):
    """Raised when a BoundModel is used after release()."""


class BoundModel:
    """Opaque handle to a trained core model plus the distance it was fit with."""

    __slots__ = ("_handle", "distance_name")

    def __init__(self, handle, distance_name: str) -> None:
        self._handle = handle
        self.distance_name = distance_name

    @property
    def handle(self):
        if self._handle is None:
            raise ReleasedModelError("this model has been released")
        return self._handle

    def release(self) -> None:
        """Drop the core model; any later use raises ReleasedModelError."""
        self._handle = None

    def __repr__(self) -> str:
        state = "released" if self._handle is None else "live"
        return f"BoundModel(distance={self.distance_name!r}, {state})"


def _as_features(features, name: str = "features") -> np.ndarray:
    arr = np.asarray(features, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D array, got shape {arr.shape}")
    return arr


def _as_labels(labels, n: int) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ShapeError(f"labels must be a 1-D array of length {n}")
    return arr.astype(np.int64)


def fit(features, labels, distance: str = "euclidean") -> BoundModel:
    """Train on (features, labels); returns a BoundModel wrapping the core fit."""
    X = _as_features(features)
    y = _as_labels(labels, X.shape[0])
    did = distance_by_name(distance)
    nodes = [Node(i, X[i].copy(), int(y[i])) for i in range(X.shape[0])]
    model = _core_fit(Subgraph(nodes), did, backend=Backend.OPTIMIZED)
    return BoundModel(model, distance)


def predict(model: BoundModel, features) -> np.ndarray:
    """Predicted labels for each feature row, identical to core predict_batch."""
    X = _as_features(features)
    predictions, _ = _core_predict_batch(model.handle, X)
    return np.array([p.label for p in predictions], dtype=np.int64)


def distance(name: str, x, y) -> float:
    """One distance value by canonical name; the core optimized kernel path."""
    return evaluate(distance_by_name(name), x, y, backend=Backend.OPTIMIZED)


def load_dataset(path) -> tuple[np.ndarray, np.ndarray]:
    """Load any supported dataset file; returns writable (features, labels)."""
    ds = opforest.load(path)
    return ds.features.copy(), ds.labels.copy()


def split(features, labels, fraction: float = 0.5, seed: int = 0,
          stratified: bool = True):
    """Seeded train/test split; returns (x_train, y_train, x_test, y_test)."""
    X = _as_features(features)
    y = _as_labels(labels, X.shape[0])
    ds = Dataset(np.arange(X.shape[0]), y.copy(), X.copy())
    first, second = opforest.split(ds, SplitSpec(fraction, seed, stratified))
    return (first.features.copy(), first.labels.copy(),
            second.features.copy(), second.labels.copy())
