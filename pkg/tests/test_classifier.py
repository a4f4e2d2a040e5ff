from __future__ import annotations

import io
import json
import math

import numpy as np
import pytest

import opforest.classifier as classifier_mod
from opforest.classifier import (
    Prediction,
    find_prototypes,
    fit,
    load_model,
    predict,
    predict_batch,
    save_model,
)
from opforest.distances import Backend, DistanceId, pairwise_matrix
from opforest.errors import (
    DegenerateTrainingError,
    DomainError,
    ParameterError,
    ParseError,
    ShapeError,
    VersionError,
)
from opforest.graph import Node, Subgraph

from oracles import full_scan_predict, minimax_costs

BOTH = (Backend.REFERENCE, Backend.OPTIMIZED)


def _subgraph(points, labels):
    return Subgraph([Node(i, p, lab) for i, (p, lab) in enumerate(zip(points, labels))])


def _line_fixture():
    # 1-D points 0, 1, 10, 11; first two class 1, last two class 2
    return _subgraph([[0.0], [1.0], [10.0], [11.0]], [1, 1, 2, 2])


def _random_subgraph(rng, n, classes, features):
    X = rng.random((n, features))
    labels = [1 + i % classes for i in range(n)]
    return _subgraph(X.tolist(), labels)


# ------------------------------------------------------------ prototypes

@pytest.mark.parametrize("backend", BOTH)
def test_line_fixture_prototypes(backend):
    protos = find_prototypes(_line_fixture(), DistanceId.D6, backend=backend)
    assert protos == {1, 2}


def test_two_nodes_two_classes_both_prototypes():
    sg = _subgraph([[0.0], [5.0]], [1, 2])
    assert find_prototypes(sg, DistanceId.D3) == {0, 1}


def test_single_class_is_degenerate():
    sg = _subgraph([[0.0], [1.0]], [1, 1])
    with pytest.raises(DegenerateTrainingError):
        find_prototypes(sg, DistanceId.D3)
    with pytest.raises(DegenerateTrainingError):
        fit(sg, DistanceId.D3)


# ------------------------------------------------------------ fit

@pytest.mark.parametrize("backend", BOTH)
def test_line_fixture_fit(backend):
    model = fit(_line_fixture(), DistanceId.D6, backend=backend)
    sg = model.subgraph
    assert [n.cost for n in sg.nodes] == [1.0, 0.0, 0.0, 1.0]
    assert [n.conquered_label for n in sg.nodes] == [1, 1, 2, 2]
    assert [n.is_prototype for n in sg.nodes] == [False, True, True, False]
    assert sg.nodes[1].predecessor is None and sg.nodes[2].predecessor is None
    assert sg.nodes[0].predecessor == 1 and sg.nodes[3].predecessor == 2
    assert sg.ordered_ids == [1, 2, 0, 3]
    assert model.train_seconds > 0.0


@pytest.mark.parametrize("backend", BOTH)
def test_path_consistency_invariants(backend):
    rng = np.random.default_rng(11)
    for trial in range(10):
        sg = _random_subgraph(rng, int(rng.integers(6, 30)), 3, 4)
        model = fit(sg, DistanceId.D3, backend=backend)
        eng = model.engine(False)
        for node in model.subgraph.nodes:
            if node.is_prototype:
                assert node.cost == 0.0
                assert node.predecessor is None
                assert node.conquered_label == node.true_label
                continue
            p = node.predecessor
            assert p is not None
            pred = model.subgraph.nodes[p]
            d = (eng.dists_from(p)[node.id] if backend is Backend.OPTIMIZED
                 else eng.pair(p, node.id))
            want = max(pred.cost, d)
            assert abs(node.cost - want) <= 1e-12 * max(1.0, want)
            assert pred.cost <= node.cost
            assert node.conquered_label == pred.conquered_label
        model.subgraph.check_ordered()


@pytest.mark.parametrize("backend", BOTH)
@pytest.mark.parametrize("did", [DistanceId.D3, DistanceId.D6, DistanceId.D11])
def test_costs_match_minimax_oracle(backend, did):
    rng = np.random.default_rng(23 + int(did))
    for _ in range(8):
        sg = _random_subgraph(rng, int(rng.integers(5, 26)), 3, 8)
        model = fit(sg, did, backend=backend)
        weights = pairwise_matrix(did, sg.feature_matrix, backend=backend)
        want = minimax_costs(weights, set(sg.prototypes()))
        got = np.array([n.cost for n in model.subgraph.nodes])
        assert np.array_equal(got, want)


def test_fit_is_deterministic():
    rng = np.random.default_rng(31)
    sg1 = _random_subgraph(rng, 20, 3, 5)
    sg2 = _subgraph(sg1.feature_matrix.tolist(), sg1.labels.tolist())
    blobs = []
    for sg in (sg1, sg2):
        model = fit(sg, DistanceId.D3, backend=Backend.OPTIMIZED)
        buf = io.StringIO()
        save_model(model, buf)
        blobs.append(buf.getvalue())
    assert blobs[0] == blobs[1]


def test_precompute_path_matches_on_the_fly():
    rng = np.random.default_rng(37)
    sg1 = _random_subgraph(rng, 18, 2, 3)
    sg2 = _subgraph(sg1.feature_matrix.tolist(), sg1.labels.tolist())
    blobs = []
    for sg, pre in ((sg1, False), (sg2, True)):
        model = fit(sg, DistanceId.D6, backend=Backend.REFERENCE, precompute=pre)
        buf = io.StringIO()
        save_model(model, buf)
        blobs.append(buf.getvalue())
    assert blobs[0] == blobs[1]


def test_precompute_refuses_large_inputs(monkeypatch):
    monkeypatch.setattr(classifier_mod, "PRECOMPUTE_LIMIT", 10)
    rng = np.random.default_rng(41)
    sg = _random_subgraph(rng, 12, 2, 3)
    with pytest.raises(ParameterError, match="precomputed"):
        fit(sg, DistanceId.D3, precompute=True)


# ------------------------------------------------------------ predict

@pytest.mark.parametrize("backend", BOTH)
def test_line_fixture_prediction(backend):
    model = fit(_line_fixture(), DistanceId.D6, backend=backend)
    got = predict(model, [5.0])
    assert got == Prediction(label=1, cost=4.0, conqueror_id=1)


@pytest.mark.parametrize("backend", BOTH)
def test_training_samples_predict_themselves(backend):
    rng = np.random.default_rng(47)
    sg = _random_subgraph(rng, 25, 3, 4)
    model = fit(sg, DistanceId.D3, backend=backend)
    for node in model.subgraph.nodes:
        got = predict(model, node.features)
        assert got.cost == node.cost
        assert got.label == node.conquered_label


@pytest.mark.parametrize("backend", BOTH)
def test_early_stop_equals_full_scan(backend):
    rng = np.random.default_rng(53)
    for _ in range(5):
        sg = _random_subgraph(rng, int(rng.integers(10, 120)), 3, 6)
        model = fit(sg, DistanceId.D3, backend=backend)
        for _ in range(20):
            q = rng.random(6)
            got = predict(model, q)
            label, cost, node = full_scan_predict(model, q)
            assert got == Prediction(label, cost, node)


def test_backend_neutrality_on_clear_margins():
    rng = np.random.default_rng(59)
    sg1 = _random_subgraph(rng, 40, 3, 5)
    sg2 = _subgraph(sg1.feature_matrix.tolist(), sg1.labels.tolist())
    ref = fit(sg1, DistanceId.D3, backend=Backend.REFERENCE)
    opt = fit(sg2, DistanceId.D3, backend=Backend.OPTIMIZED)
    eng = ref.engine(False)
    costs = [n.cost for n in ref.subgraph.nodes]
    for _ in range(200):
        q = rng.random(5)
        qa = eng.query_vector(q)
        cands = sorted(max(costs[i], eng.pair_to(i, qa)) for i in range(len(costs)))
        gap = (cands[1] - cands[0]) / max(1.0, cands[0])
        a = predict(ref, q)
        b = predict(opt, q)
        assert abs(a.cost - b.cost) <= 1e-9 * max(1.0, a.cost)
        if gap > 1e-6:
            assert a.label == b.label


def test_predict_shape_and_domain_errors():
    model = fit(_line_fixture(), DistanceId.D6)
    with pytest.raises(ShapeError):
        predict(model, [1.0, 2.0])
    with pytest.raises(DomainError):
        predict(model, [math.nan])
    positive = fit(_subgraph([[1.0], [2.0]], [1, 2]), DistanceId.D33)
    with pytest.raises(DomainError):
        predict(positive, [-1.0], strict=True)
    assert predict(positive, [-1.0], strict=False).label in (1, 2)


# ------------------------------------------------------------ batch

def test_empty_batch():
    model = fit(_line_fixture(), DistanceId.D6)
    preds, seconds = predict_batch(model, np.empty((0, 1)))
    assert preds == []
    assert 0.0 <= seconds < 0.1


@pytest.mark.parametrize("backend", BOTH)
def test_batch_of_training_set(backend):
    rng = np.random.default_rng(61)
    sg = _random_subgraph(rng, 30, 3, 4)
    model = fit(sg, DistanceId.D3, backend=backend)
    preds, seconds = predict_batch(model, sg.feature_matrix)
    assert [p.label for p in preds] == [n.conquered_label for n in sg.nodes]
    assert seconds >= 0.0


def test_parallel_batch_matches_serial():
    rng = np.random.default_rng(67)
    sg = _random_subgraph(rng, 40, 3, 5)
    model = fit(sg, DistanceId.D3, backend=Backend.OPTIMIZED)
    queries = rng.random((64, 5))
    serial, _ = predict_batch(model, queries, workers=1)
    parallel, _ = predict_batch(model, queries, workers=4)
    assert serial == parallel


def test_batch_errors_carry_row_index():
    model = fit(_subgraph([[1.0], [2.0]], [1, 2]), DistanceId.D33)
    bad = np.array([[1.0], [-5.0], [2.0]])
    with pytest.raises(DomainError, match="row 1"):
        predict_batch(model, bad, strict=True)
    with pytest.raises(ShapeError):
        predict_batch(model, np.ones((2, 3)))
    with pytest.raises(ShapeError):
        predict_batch(model, np.ones(4))


# ------------------------------------------------------------ save/load

def test_round_trip_is_byte_identical():
    model = fit(_line_fixture(), DistanceId.D6)
    first = io.StringIO()
    save_model(model, first)
    reloaded = load_model(io.StringIO(first.getvalue()))
    second = io.StringIO()
    save_model(reloaded, second)
    assert first.getvalue() == second.getvalue()
    assert first.getvalue().endswith("\n")


def test_round_trip_preserves_predictions():
    rng = np.random.default_rng(71)
    sg = _random_subgraph(rng, 30, 3, 4)
    model = fit(sg, DistanceId.D3, backend=Backend.OPTIMIZED)
    buf = io.StringIO()
    save_model(model, buf)
    clone = load_model(io.StringIO(buf.getvalue()))
    queries = rng.random((100, 4))
    before, _ = predict_batch(model, queries)
    after, _ = predict_batch(clone, queries)
    assert before == after


def test_save_to_path_and_load_from_path(tmp_path):
    model = fit(_line_fixture(), DistanceId.D6)
    target = tmp_path / "model.json"
    save_model(model, target)
    clone = load_model(target)
    assert predict(clone, [5.0]) == predict(model, [5.0])


def _saved_payload():
    model = fit(_line_fixture(), DistanceId.D6)
    buf = io.StringIO()
    save_model(model, buf)
    return json.loads(buf.getvalue())


def _load_mutated(payload):
    return load_model(io.StringIO(json.dumps(payload)))


def test_load_rejects_malformed_payloads():
    with pytest.raises(ParseError):
        load_model(io.StringIO("not json {"))

    p = _saved_payload()
    p["format_version"] = 2
    with pytest.raises(VersionError):
        _load_mutated(p)

    p = _saved_payload()
    p["format_version"] = "one"
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    p["distance"] = "warp"
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    del p["nodes"][2]["cost"]
    with pytest.raises(ParseError, match=r"nodes\[2\]"):
        _load_mutated(p)

    p = _saved_payload()
    p["n_features"] = 7
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    p["nodes"] = p["nodes"][:3]
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    p["ordered_ids"] = [0, 1, 2]
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    p["ordered_ids"] = [3, 0, 2, 1]
    with pytest.raises(ParseError):
        _load_mutated(p)

    p = _saved_payload()
    p["nodes"][0]["features"] = [math.inf]
    with pytest.raises(ParseError):
        _load_mutated(p)


def test_load_enforces_forest_structure():
    # a predecessor cycle between non-prototypes
    p = _saved_payload()
    p["nodes"][0]["predecessor"] = 3
    p["nodes"][3]["predecessor"] = 0
    with pytest.raises(ParseError):
        _load_mutated(p)

    # prototype with a predecessor
    p = _saved_payload()
    p["nodes"][1]["predecessor"] = 0
    with pytest.raises(ParseError):
        _load_mutated(p)

    # non-prototype without a predecessor
    p = _saved_payload()
    p["nodes"][0]["predecessor"] = None
    with pytest.raises(ParseError):
        _load_mutated(p)

    # class 2 loses its prototype while the chains stay well formed
    p = _saved_payload()
    p["nodes"][2]["is_prototype"] = False
    p["nodes"][2]["predecessor"] = 1
    with pytest.raises(ParseError, match="prototype"):
        _load_mutated(p)
