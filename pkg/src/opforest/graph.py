"""Sample nodes and the subgraph container used by training and prediction.

A Node carries one sample's features and true class label plus the quantities
training fills in: the optimum-path cost, the predecessor on that path, the
conquered (propagated) label, and the prototype flag. A Subgraph owns the node
list, knows the class and feature counts, and after training also holds
ordered_ids: every node id sorted by non-decreasing trained cost.

Labels are 1-based throughout, matching the interchange formats. Node ids are
the dense indices 0..n-1 within their subgraph.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import MissingClassError, ParameterError, ShapeError


class Node:
    __slots__ = (
        "id",
        "features",
        "true_label",
        "cost",
        "predecessor",
        "conquered_label",
        "is_prototype",
    )

    def __init__(self, id: int, features, true_label: int):
        if id < 0:
            raise ParameterError(f"node id must be >= 0, got {id}")
        if true_label < 1:
            raise ParameterError(f"class labels are 1-based, got {true_label}")
        self.id = int(id)
        self.features = np.asarray(features, dtype=np.float64)
        if self.features.ndim != 1 or self.features.size < 1:
            raise ShapeError("node features must be a non-empty 1-D vector")
        self.true_label = int(true_label)
        self.cost = math.inf
        self.predecessor: int | None = None
        self.conquered_label = int(true_label)
        self.is_prototype = False

    def __repr__(self) -> str:
        return (
            f"Node(id={self.id}, label={self.true_label}, cost={self.cost!r}, "
            f"conquered={self.conquered_label}, prototype={self.is_prototype})"
        )


class Subgraph:
    """Container of nodes with consistent feature width and a 1..k class range.

    Construction validates the structural invariants: ids are exactly 0..n-1,
    every feature vector has the same length, and every class in [1, max label]
    occurs at least once.
    """

    def __init__(self, nodes: list[Node]):
        if not nodes:
            raise ParameterError("a subgraph needs at least one node")
        self.nodes = list(nodes)
        self.n_features = int(self.nodes[0].features.size)
        for i, node in enumerate(self.nodes):
            if node.id != i:
                raise ParameterError(
                    f"node ids must be the dense indices 0..n-1; position {i} has id {node.id}"
                )
            if node.features.size != self.n_features:
                raise ShapeError(
                    f"node {i} has {node.features.size} features, expected {self.n_features}"
                )
        labels = {node.true_label for node in self.nodes}
        self.n_classes = max(labels)
        for label in range(1, self.n_classes + 1):
            if label not in labels:
                raise MissingClassError(f"class {label} is absent from the data")
        self.ordered_ids: list[int] = []
        self._matrix: np.ndarray | None = None
        self._labels: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def n_samples(self) -> int:
        return len(self.nodes)

    @property
    def feature_matrix(self) -> np.ndarray:
        """All node features stacked as an (n, n_features) float64 matrix."""
        if self._matrix is None:
            self._matrix = np.vstack([node.features for node in self.nodes])
        return self._matrix

    @property
    def labels(self) -> np.ndarray:
        """True labels as an int64 vector aligned with node ids."""
        if self._labels is None:
            self._labels = np.array([node.true_label for node in self.nodes], dtype=np.int64)
        return self._labels

    def prototypes(self) -> list[int]:
        return [node.id for node in self.nodes if node.is_prototype]

    def check_ordered(self) -> None:
        """Raise if ordered_ids is not a cost-sorted permutation of all ids."""
        if sorted(self.ordered_ids) != list(range(len(self.nodes))):
            raise ParameterError("ordered_ids is not a permutation of node ids")
        costs = [self.nodes[i].cost for i in self.ordered_ids]
        for a, b in zip(costs, costs[1:]):
            if a > b:
                raise ParameterError("costs along ordered_ids must be non-decreasing")
