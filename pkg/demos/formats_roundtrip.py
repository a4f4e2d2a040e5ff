#!/usr/bin/env python3
"""Move one dataset through every supported container: txt, csv, json, opf.

The three text formats hold full float64 precision; the binary .opf format
stores float32 features, so converting into it can quantize. The report
returned by convert() says when that happened.
"""
from __future__ import annotations

import tempfile
from pathlib import Path

import numpy as np

from opforest import BlobSpec, convert, generate_synthetic, load, save


def main() -> None:
    dataset = generate_synthetic(BlobSpec(classes=2, per_class=5, features=3, seed=21))
    workdir = Path(tempfile.mkdtemp(prefix="opf_formats_"))

    paths = {fmt: workdir / f"blobs.{fmt}" for fmt in ("txt", "csv", "json", "opf")}
    for path in paths.values():
        save(dataset, path)
        print(f"wrote {path.name:<11} {path.stat().st_size:>5} bytes")

    print("\ncross-loaded labels equal:", all(
        np.array_equal(load(p).labels, dataset.labels) for p in paths.values()))
    print("text features exact:", all(
        np.array_equal(load(paths[fmt]).features, dataset.features)
        for fmt in ("txt", "csv", "json")))

    report = convert(paths["txt"], workdir / "blobs_copy.opf")
    print(f"\nconvert txt -> opf: {report.n_samples} samples, "
          f"{report.n_features} features, quantized={report.quantized}")

    # binary -> text -> binary is byte-stable once features are float32
    round_trip = workdir / "blobs_back.opf"
    convert(paths["opf"], workdir / "blobs_back.txt")
    convert(workdir / "blobs_back.txt", round_trip)
    identical = round_trip.read_bytes() == paths["opf"].read_bytes()
    print(f"opf -> txt -> opf byte-identical: {identical}")


if __name__ == "__main__":
    main()
