"""Supervised optimum-path forest classifier.

Training builds a complete graph over the samples weighted by one distance
measure, finds prototypes as both endpoints of every inter-class edge of the
minimum spanning tree (Prim from node 0, ties to the smaller id), then runs
cost propagation from the prototypes with the bottleneck path cost
max(cost(s), d(s, t)) on a decrease-key heap. Each node keeps the conquering
label, its predecessor, and its optimal cost; the heap removal order is kept
as ordered_ids. Prediction scans ordered_ids, maintaining the best
max(stored cost, distance) seen, and stops as soon as the next stored cost
already matches or exceeds the running best, which is safe because the
candidate value of a node is never below its stored cost.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .distances import (
    Backend,
    DistanceId,
    PairEngine,
    RowEngine,
    as_backend,
    distance_by_name,
    registry_lookup,
    resolve_threads,
)
from .errors import (
    DegenerateTrainingError,
    DomainError,
    ParameterError,
    ParseError,
    ShapeError,
    VersionError,
)
from .graph import Node, Subgraph
from .heap import CostHeap

MODEL_FORMAT_VERSION = 1

# opt-in pairwise precompute is refused at or above this many samples
PRECOMPUTE_LIMIT = 5000


class Prediction(NamedTuple):
    label: int
    cost: float
    conqueror_id: int


def _build_engine(distance: DistanceId, backend: Backend, X: np.ndarray, strict: bool):
    if backend is Backend.OPTIMIZED:
        return RowEngine(distance, X, strict)
    return PairEngine(distance, X, strict)


def _prim_parents(engine, n: int, precomputed: np.ndarray | None) -> np.ndarray:
    """Prim from node 0 over the complete graph; returns parent per node."""
    key = np.full(n, np.inf)
    key[0] = 0.0
    parent = np.full(n, -1, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    masked = np.empty(n)
    if precomputed is not None or isinstance(engine, RowEngine):
        for _ in range(n):
            np.copyto(masked, key)
            masked[in_tree] = np.inf
            u = int(np.argmin(masked))
            in_tree[u] = True
            row = precomputed[u] if precomputed is not None else engine.dists_from(u)
            better = (row < key) & ~in_tree
            key[better] = row[better]
            parent[better] = u
        return parent
    pending = list(range(n))
    for _ in range(n):
        np.copyto(masked, key)
        masked[in_tree] = np.inf
        u = int(np.argmin(masked))
        in_tree[u] = True
        pending.remove(u)
        for t in pending:
            d = engine.pair(u, t)
            if d < key[t]:
                key[t] = d
                parent[t] = u
    return parent


def _prototypes(engine, labels: np.ndarray, precomputed: np.ndarray | None) -> set[int]:
    n = labels.size
    parent = _prim_parents(engine, n, precomputed)
    protos: set[int] = set()
    for u in range(1, n):
        p = int(parent[u])
        if labels[p] != labels[u]:
            protos.add(u)
            protos.add(p)
    if not protos:
        raise DegenerateTrainingError("training data has a single class; no prototypes exist")
    return protos


def _pairwise_rows(engine, n: int) -> np.ndarray:
    M = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        M[i, :] = engine.dists_from(i)
    return M


def find_prototypes(subgraph: Subgraph, distance: DistanceId, backend=Backend.REFERENCE,
                    strict: bool = False, precompute: bool = False) -> set[int]:
    """Both endpoints of every inter-class MST edge of the complete graph."""
    if subgraph.n_classes < 2:
        raise DegenerateTrainingError("training data has a single class; no prototypes exist")
    did = DistanceId(distance)
    b = as_backend(backend)
    engine = _build_engine(did, b, subgraph.feature_matrix, strict)
    M = _precompute_matrix(engine, subgraph.n_samples, precompute)
    return _prototypes(engine, subgraph.labels, M)


def _precompute_matrix(engine, n: int, precompute: bool) -> np.ndarray | None:
    if not precompute:
        return None
    if n >= PRECOMPUTE_LIMIT:
        raise ParameterError(
            f"precomputed pairwise matrix is limited to n < {PRECOMPUTE_LIMIT}, got n = {n}"
        )
    return _pairwise_rows(engine, n)


def _propagate(engine, protos: set[int], labels: np.ndarray,
               precomputed: np.ndarray | None) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[int]]:
    n = labels.size
    heap = CostHeap(n)
    keys = np.full(n, np.inf)
    for i in range(n):
        if i in protos:
            heap.insert(i, 0.0)
            keys[i] = 0.0
        else:
            heap.insert(i, np.inf)
    cost = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    conquered = labels.astype(np.int64).copy()
    in_heap = np.ones(n, dtype=bool)
    ordered: list[int] = []
    vector_rows = precomputed is not None or isinstance(engine, RowEngine)
    pending = None if vector_rows else [i for i in range(n)]
    while len(heap):
        u, c = heap.pop_min()
        ordered.append(u)
        cost[u] = c
        in_heap[u] = False
        if vector_rows:
            row = precomputed[u] if precomputed is not None else engine.dists_from(u)
            cand = np.maximum(c, row)
            for t in np.nonzero((cand < keys) & in_heap)[0]:
                t = int(t)
                v = float(cand[t])
                heap.decrease_key(t, v)
                keys[t] = v
                pred[t] = u
                conquered[t] = conquered[u]
        else:
            pending.remove(u)
            for t in pending:
                d = engine.pair(u, t)
                v = c if c > d else d
                if v < keys[t]:
                    heap.decrease_key(t, v)
                    keys[t] = v
                    pred[t] = u
                    conquered[t] = conquered[u]
    return cost, pred, conquered, ordered


class TrainedModel:
    """A fitted forest: the trained subgraph plus its distance and backend."""

    def __init__(self, subgraph: Subgraph, distance: DistanceId, backend: Backend,
                 format_version: int = MODEL_FORMAT_VERSION, train_seconds: float = 0.0) -> None:
        self.subgraph = subgraph
        self.distance = DistanceId(distance)
        self.backend = as_backend(backend)
        self.format_version = format_version
        self.train_seconds = train_seconds
        self._engines: dict[bool, object] = {}
        self._costs = np.array([node.cost for node in subgraph.nodes], dtype=np.float64)
        self._conquered = np.array([node.conquered_label for node in subgraph.nodes], dtype=np.int64)
        self._cost_list = self._costs.tolist()
        self._conquered_list = [int(v) for v in self._conquered]

    @property
    def n_features(self) -> int:
        return self.subgraph.n_features

    @property
    def n_classes(self) -> int:
        return self.subgraph.n_classes

    def engine(self, strict: bool = False):
        eng = self._engines.get(strict)
        if eng is None:
            eng = _build_engine(self.distance, self.backend,
                                self.subgraph.feature_matrix, strict)
            self._engines[strict] = eng
        return eng


def fit(train: Subgraph, distance: DistanceId, backend=Backend.REFERENCE,
        strict: bool = False, precompute: bool = False) -> TrainedModel:
    """Train a forest on the subgraph; records wall-clock training seconds."""
    if train.n_classes < 2:
        raise DegenerateTrainingError("training data has a single class; no prototypes exist")
    did = DistanceId(distance)
    b = as_backend(backend)
    labels = train.labels
    t0 = time.perf_counter()
    engine = _build_engine(did, b, train.feature_matrix, strict)
    M = _precompute_matrix(engine, train.n_samples, precompute)
    protos = _prototypes(engine, labels, M)
    cost, pred, conquered, ordered = _propagate(engine, protos, labels, M)
    elapsed = time.perf_counter() - t0
    for node in train.nodes:
        i = node.id
        node.cost = float(cost[i])
        node.predecessor = None if pred[i] < 0 else int(pred[i])
        node.conquered_label = int(conquered[i])
        node.is_prototype = i in protos
    train.ordered_ids = [int(u) for u in ordered]
    train.check_ordered()
    model = TrainedModel(train, did, b, train_seconds=elapsed)
    model._engines[strict] = engine
    return model


def _scan_optimized(model: TrainedModel, engine: RowEngine, q: np.ndarray) -> Prediction:
    dists = engine.dists_to(q).tolist()
    costs = model._cost_list
    best = np.inf
    best_node = -1
    for t in model.subgraph.ordered_ids:
        c = costs[t]
        if c >= best:
            break
        d = dists[t]
        v = c if c > d else d
        if v < best:
            best = v
            best_node = t
    return Prediction(model._conquered_list[best_node], float(best), best_node)


def _scan_reference(model: TrainedModel, engine: PairEngine, qa: np.ndarray) -> Prediction:
    costs = model._cost_list
    best = np.inf
    best_node = -1
    for t in model.subgraph.ordered_ids:
        c = costs[t]
        if c >= best:
            break
        d = engine.pair_to(t, qa)
        v = c if c > d else d
        if v < best:
            best = v
            best_node = t
    return Prediction(model._conquered_list[best_node], float(best), best_node)


def _predict_one(model: TrainedModel, engine, q: np.ndarray) -> Prediction:
    if isinstance(engine, RowEngine):
        return _scan_optimized(model, engine, q)
    return _scan_reference(model, engine, engine.query_vector(q))


def predict(model: TrainedModel, sample_features, strict: bool = False) -> Prediction:
    """Classify one sample by its cheapest bottleneck path into the forest."""
    q = np.asarray(sample_features, dtype=np.float64)
    if q.ndim != 1 or q.size != model.n_features:
        raise ShapeError(
            f"sample must be a vector of {model.n_features} features, got shape {q.shape}"
        )
    return _predict_one(model, model.engine(strict), q)


def predict_batch(model: TrainedModel, samples, strict: bool = False,
                  workers: int | None = None) -> tuple[list[Prediction], float]:
    """Element-wise predictions plus wall-clock prediction seconds."""
    Q = np.asarray(samples, dtype=np.float64)
    if Q.ndim != 2:
        raise ShapeError(f"samples must be 2-D, got shape {Q.shape}")
    if Q.shape[0] == 0:
        t0 = time.perf_counter()
        return [], time.perf_counter() - t0
    if Q.shape[1] != model.n_features:
        raise ShapeError(f"samples have {Q.shape[1]} features, model expects {model.n_features}")
    engine = model.engine(strict)
    m = Q.shape[0]
    out: list[Prediction | None] = [None] * m

    def run(i: int) -> None:
        try:
            out[i] = _predict_one(model, engine, Q[i])
        except DomainError as e:
            raise DomainError(f"row {i}: {e}") from e

    w = min(resolve_threads(workers), m)
    t0 = time.perf_counter()
    if w <= 1:
        for i in range(m):
            run(i)
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=w) as pool:
            list(pool.map(run, range(m)))
    elapsed = time.perf_counter() - t0
    return out, elapsed


def save_model(model: TrainedModel, sink) -> None:
    """Serialize the model as deterministic structured text."""
    sg = model.subgraph
    payload = {
        "format_version": model.format_version,
        "distance": registry_lookup(model.distance).name,
        "backend": model.backend.value,
        "n_features": sg.n_features,
        "n_classes": sg.n_classes,
        "nodes": [
            {
                "id": node.id,
                "true_label": node.true_label,
                "conquered_label": node.conquered_label,
                "cost": node.cost,
                "predecessor": node.predecessor,
                "is_prototype": node.is_prototype,
                "features": node.features.tolist(),
            }
            for node in sg.nodes
        ],
        "ordered_ids": list(sg.ordered_ids),
    }
    text = json.dumps(payload, indent=1) + "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8")


def _require(mapping: dict, key: str, where: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"{where}: missing field {key!r}")
    return mapping[key]


def load_model(source) -> TrainedModel:
    """Parse and fully validate a serialized model."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"model payload is not valid structured text: {e}") from e
    if not isinstance(payload, dict):
        raise ParseError("model payload must be a mapping at top level")
    version = _require(payload, "format_version", "model")
    if not isinstance(version, int):
        raise ParseError("model: format_version must be an integer")
    if version != MODEL_FORMAT_VERSION:
        raise VersionError(f"unsupported model format_version {version}")
    try:
        distance = distance_by_name(str(_require(payload, "distance", "model")))
    except ParameterError as e:
        raise ParseError(f"model: {e}") from e
    try:
        backend = Backend(str(_require(payload, "backend", "model")))
    except ValueError:
        raise ParseError(f"model: unknown backend {payload.get('backend')!r}") from None
    n_features = _require(payload, "n_features", "model")
    n_classes = _require(payload, "n_classes", "model")
    raw_nodes = _require(payload, "nodes", "model")
    raw_order = _require(payload, "ordered_ids", "model")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise ParseError("model: nodes must be a non-empty list")
    nodes = []
    for k, item in enumerate(raw_nodes):
        where = f"nodes[{k}]"
        nid = _require(item, "id", where)
        true_label = _require(item, "true_label", where)
        feats = _require(item, "features", where)
        try:
            node = Node(int(nid), np.asarray(feats, dtype=np.float64), int(true_label))
        except (TypeError, ValueError, ParameterError, ShapeError) as e:
            raise ParseError(f"{where}: {e}") from e
        if not np.isfinite(node.features).all():
            raise ParseError(f"{where}: non-finite feature value")
        cost = _require(item, "cost", where)
        if not isinstance(cost, (int, float)) or not np.isfinite(cost):
            raise ParseError(f"{where}: cost must be a finite number")
        node.cost = float(cost)
        predecessor = _require(item, "predecessor", where)
        if predecessor is not None:
            if not isinstance(predecessor, int):
                raise ParseError(f"{where}: predecessor must be an integer or null")
            node.predecessor = predecessor
        conquered = _require(item, "conquered_label", where)
        if not isinstance(conquered, int) or conquered < 1:
            raise ParseError(f"{where}: conquered_label must be a positive integer")
        node.conquered_label = conquered
        proto = _require(item, "is_prototype", where)
        if not isinstance(proto, bool):
            raise ParseError(f"{where}: is_prototype must be a boolean")
        node.is_prototype = proto
        nodes.append(node)
    try:
        sg = Subgraph(nodes)
    except Exception as e:
        raise ParseError(f"model: inconsistent node set: {e}") from e
    if sg.n_features != n_features:
        raise ParseError(f"model: n_features says {n_features}, nodes have {sg.n_features}")
    if sg.n_classes != n_classes:
        raise ParseError(f"model: n_classes says {n_classes}, nodes have {sg.n_classes}")
    if not isinstance(raw_order, list) or not all(isinstance(v, int) for v in raw_order):
        raise ParseError("model: ordered_ids must be a list of integers")
    sg.ordered_ids = list(raw_order)
    try:
        sg.check_ordered()
    except Exception as e:
        raise ParseError(f"model: bad ordered_ids: {e}") from e
    _check_forest(sg)
    return TrainedModel(sg, distance, backend, format_version=version)


def _check_forest(sg: Subgraph) -> None:
    n = sg.n_samples
    proto_classes = set()
    for node in sg.nodes:
        if node.is_prototype:
            proto_classes.add(node.true_label)
            if node.predecessor is not None:
                raise ParseError(f"model: prototype {node.id} has a predecessor")
        else:
            if node.predecessor is None:
                raise ParseError(f"model: non-prototype {node.id} has no predecessor")
    missing = set(range(1, sg.n_classes + 1)) - proto_classes
    if missing:
        raise ParseError(f"model: classes without a prototype: {sorted(missing)}")
    for node in sg.nodes:
        seen = 0
        cur = node
        while cur.predecessor is not None:
            nxt = cur.predecessor
            if nxt < 0 or nxt >= n:
                raise ParseError(f"model: node {cur.id} predecessor {nxt} out of range")
            cur = sg.nodes[nxt]
            seen += 1
            if seen > n:
                raise ParseError(f"model: predecessor chain from node {node.id} does not terminate")
        if not cur.is_prototype:
            raise ParseError(f"model: chain from node {node.id} ends at non-prototype {cur.id}")
