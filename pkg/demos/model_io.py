#!/usr/bin/env python3
"""Save a trained model, reload it, and verify predictions survive the trip.

The model file is a single JSON document: every training node with its
features, conquered label, bottleneck cost, and predecessor, plus the cost-
sorted evaluation order the early-stopping predictor walks.
"""
from __future__ import annotations

import json
import tempfile
from pathlib import Path

import numpy as np

from opforest import (
    BlobSpec,
    fit,
    generate_synthetic,
    load_model,
    parse,
    predict_batch,
    save_model,
)
from opforest.distances import DistanceId


def main() -> None:
    dataset = generate_synthetic(BlobSpec(classes=2, per_class=25, features=3, seed=42))
    model = fit(parse(dataset), DistanceId.D6)

    path = Path(tempfile.mkdtemp(prefix="opf_model_")) / "blobs.model"
    save_model(model, path)
    print(f"saved {path.stat().st_size} bytes to {path.name}")

    payload = json.loads(path.read_text())
    print(f"format version {payload['format_version']}, distance {payload['distance']}, "
          f"{len(payload['nodes'])} nodes, "
          f"{sum(n['is_prototype'] for n in payload['nodes'])} prototypes")

    reloaded = load_model(path)
    rng = np.random.default_rng(0)
    queries = rng.normal(0.0, 2.0, (100, 3))
    before, _ = predict_batch(model, queries)
    after, _ = predict_batch(reloaded, queries)
    same = before == after
    print(f"100 query predictions preserved: {same}")

    # saving the reloaded model reproduces the file byte for byte
    second = path.with_suffix(".model2")
    save_model(reloaded, second)
    print(f"re-save byte-identical: {second.read_bytes() == path.read_bytes()}")


if __name__ == "__main__":
    main()
