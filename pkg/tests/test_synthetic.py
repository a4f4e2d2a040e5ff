from __future__ import annotations

import numpy as np
import pytest

from opforest.errors import ParameterError
from opforest.synthetic import BlobSpec, generate_synthetic


def test_shape_and_labels():
    ds = generate_synthetic(BlobSpec(classes=3, per_class=5, features=4, seed=0))
    assert ds.n_samples == 15 and ds.n_features == 4 and ds.n_classes == 3
    assert ds.labels.tolist() == [1] * 5 + [2] * 5 + [3] * 5
    assert ds.ids.tolist() == list(range(15))


def test_seed_determinism():
    a = generate_synthetic(BlobSpec(classes=2, per_class=10, features=3, seed=7))
    b = generate_synthetic(BlobSpec(classes=2, per_class=10, features=3, seed=7))
    c = generate_synthetic(BlobSpec(classes=2, per_class=10, features=3, seed=8))
    assert np.array_equal(a.features, b.features)
    assert not np.array_equal(a.features, c.features)


def test_separation_moves_class_centers():
    ds = generate_synthetic(BlobSpec(classes=2, per_class=200, features=2,
                                     seed=1, separation=50.0))
    first = ds.features[ds.labels == 1, 0].mean()
    second = ds.features[ds.labels == 2, 0].mean()
    assert second - first > 40.0


def test_nonnegative_shift():
    ds = generate_synthetic(BlobSpec(classes=2, per_class=20, features=3,
                                     seed=2, nonnegative_shift=True))
    assert ds.features.min() == 0.0


def test_spec_validation():
    with pytest.raises(ParameterError):
        BlobSpec(classes=1, per_class=5, features=2, seed=0)
    with pytest.raises(ParameterError):
        BlobSpec(classes=2, per_class=0, features=2, seed=0)
    with pytest.raises(ParameterError):
        BlobSpec(classes=2, per_class=5, features=0, seed=0)
    with pytest.raises(ParameterError):
        BlobSpec(classes=2, per_class=5, features=2, seed=-1)
    with pytest.raises(ParameterError):
        BlobSpec(classes=2, per_class=5, features=2, seed=0, spread=0.0)
    with pytest.raises(ParameterError):
        BlobSpec(classes=2, per_class=5, features=2, seed=0, separation=-1.0)
