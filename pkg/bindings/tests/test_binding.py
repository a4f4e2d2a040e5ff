from __future__ import annotations

import io
import threading

import numpy as np
import pytest

import opfbind
import opforest
from opforest.classifier import fit as core_fit
from opforest.classifier import save_model
from opforest.distances import Backend, DistanceId
from opforest.errors import DegenerateTrainingError, ParameterError, ShapeError
from opforest.graph import Node, Subgraph


LINE_X = np.array([[0.0], [1.0], [10.0], [11.0]])
LINE_Y = np.array([1, 1, 2, 2])


def _serialize(core_model) -> str:
    buf = io.StringIO()
    save_model(core_model, buf)
    return buf.getvalue()


def test_version_mirrors_core():
    assert opfbind.__version__ == opforest.__version__


def test_fit_matches_core_on_line_fixture():
    bound = opfbind.fit(LINE_X, LINE_Y, distance="manhattan")
    core = core_fit(
        Subgraph([Node(i, LINE_X[i], int(LINE_Y[i])) for i in range(4)]),
        DistanceId.D6,
        backend=Backend.OPTIMIZED,
    )
    assert _serialize(bound.handle) == _serialize(core)
    assert bound.distance_name == "manhattan"


def test_distance_name_resolution():
    bound = opfbind.fit(LINE_X, LINE_Y, distance="euclidean")
    assert bound.handle.distance is DistanceId.D3
    with pytest.raises(ParameterError, match="valid names"):
        opfbind.fit(LINE_X, LINE_Y, distance="euclid")


def test_single_class_raises_degenerate_error():
    with pytest.raises(DegenerateTrainingError):
        opfbind.fit(LINE_X, np.array([1, 1, 1, 1]))


def test_predict_line_fixture_and_training_set():
    bound = opfbind.fit(LINE_X, LINE_Y, distance="manhattan")
    assert opfbind.predict(bound, [[5.0]]).tolist() == [1]
    got = opfbind.predict(bound, LINE_X)
    want = [n.conquered_label for n in bound.handle.subgraph.nodes]
    assert got.tolist() == want
    assert got.dtype == np.int64


def test_shape_errors():
    with pytest.raises(ShapeError):
        opfbind.fit(np.ones(4), LINE_Y)
    with pytest.raises(ShapeError):
        opfbind.fit(LINE_X, np.array([1, 2]))
    bound = opfbind.fit(LINE_X, LINE_Y)
    with pytest.raises(ShapeError):
        opfbind.predict(bound, np.ones((2, 3)))


def test_release_lifecycle():
    bound = opfbind.fit(LINE_X, LINE_Y)
    bound.release()
    with pytest.raises(opfbind.ReleasedModelError):
        opfbind.predict(bound, [[5.0]])
    with pytest.raises(opfbind.ReleasedModelError):
        bound.handle
    assert "released" in repr(bound)
    bound.release()  # idempotent


def test_distance_anchors():
    assert opfbind.distance("euclidean", (0, 0), (3, 4)) == 5.0
    assert opfbind.distance("hamming", (1, 0, 1), (1, 1, 1)) == 1.0
    with pytest.raises(ParameterError, match="valid names"):
        opfbind.distance("downtown", (0,), (1,))


def test_inputs_are_not_mutated():
    X = np.array([[0.5, 1.0], [2.0, 0.25], [4.0, 4.0], [5.0, 3.0]])
    y = np.array([1, 1, 2, 2])
    x_copy, y_copy = X.copy(), y.copy()
    bound = opfbind.fit(X, y)
    opfbind.predict(bound, X)
    opfbind.split(X, y, fraction=0.5, seed=3)
    assert np.array_equal(X, x_copy) and np.array_equal(y, y_copy)
    assert X.flags.writeable and y.flags.writeable
    X[0, 0] = 9.0  # still usable by the caller


def test_load_dataset_and_split(tmp_path):
    rng = np.random.default_rng(5)
    X = rng.normal(0, 1, (20, 3))
    y = 1 + np.arange(20) % 2
    ds = opforest.Dataset(np.arange(20), y, X)
    path = tmp_path / "data.csv"
    opforest.save(ds, path)

    feats, labels = opfbind.load_dataset(path)
    assert np.array_equal(feats, X) and np.array_equal(labels, y)
    assert feats.flags.writeable

    x_tr, y_tr, x_te, y_te = opfbind.split(feats, labels, fraction=0.5, seed=11)
    assert len(x_tr) + len(x_te) == 20
    assert len(x_tr) == len(y_tr) and len(x_te) == len(y_te)
    core_first, core_second = opforest.split(
        ds, opforest.SplitSpec(0.5, 11, stratified=True))
    assert np.array_equal(x_tr, core_first.features)
    assert np.array_equal(y_te, core_second.labels)


def test_concurrent_prediction_matches_serial():
    rng = np.random.default_rng(6)
    X = rng.normal(0, 1, (60, 4))
    y = 1 + np.arange(60) % 3
    bound = opfbind.fit(X, y)
    queries = rng.normal(0, 1, (40, 4))
    want = opfbind.predict(bound, queries).tolist()
    results: dict[int, list[int]] = {}

    def worker(k: int) -> None:
        results[k] = opfbind.predict(bound, queries).tolist()

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(results[k] == want for k in range(4))
