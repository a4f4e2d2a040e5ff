#!/usr/bin/env python3
"""Same workflow through the opfbind wrapper: arrays in, arrays out.

The binding keeps no numerics of its own; fit and predict delegate to the
core engine, so results are identical to the library and CLI routes.
Requires the opfbind package from bindings/ to be installed.
"""
from __future__ import annotations

import numpy as np

import opfbind


def main() -> None:
    rng = np.random.default_rng(11)
    features = np.vstack([rng.normal(0.0, 1.0, (30, 4)),
                          rng.normal(8.0, 1.0, (30, 4))])
    labels = np.repeat([1, 2], 30)

    x_tr, y_tr, x_te, y_te = opfbind.split(features, labels, fraction=0.5, seed=2)
    model = opfbind.fit(x_tr, y_tr, distance="euclidean")
    print(f"bound model: {model!r}")

    got = opfbind.predict(model, x_te)
    print(f"held-out accuracy: {float(np.mean(got == y_te)):.3f}")
    print(f"euclidean((0,0),(3,4)) = {opfbind.distance('euclidean', (0, 0), (3, 4))}")

    model.release()
    try:
        opfbind.predict(model, x_te)
    except opfbind.ReleasedModelError as err:
        print(f"after release: {err}")


if __name__ == "__main__":
    main()
