"""Dataset ingestion, parsing, seeded splitting, and format conversion.

Four interchange formats:

- txt: one sample per line, space separated: ``id label f1 f2 ... fF``.
- csv: the same columns, comma separated, no header.
- json: object with ``data``: array of {id, label, features}.
- opf: little-endian binary; header of three signed 32-bit integers
  (n_samples, n_classes, n_features), then per sample a 32-bit id, a 32-bit
  label, and n_features 32-bit floats.

Labels are 1-based everywhere. Text floats are written with shortest
round-trip precision, so txt/csv/json cycles are value-exact and an
opf -> txt -> opf cycle is byte-identical. Loaders reject non-finite
features; writing a float64 value that overflows 32-bit storage is a
conversion error.

Splitting uses an explicit 64-bit generator so identical seeds reproduce
identical partitions. The generator is splitmix64: state advances by
0x9E3779B97F4A7C15 per draw and the output mix is
z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB;
z ^= z >> 31 (all modulo 2**64). The permutation is a Fisher-Yates shuffle
drawing j = next() % (i + 1) for i = n-1 .. 1. The first side takes
ceil(fraction * n) samples; stratified mode apportions that count over the
classes by largest remainder (ties to the smaller class id) and fills each
class quota in shuffled draw order, emitting classes in ascending order.
"""

from __future__ import annotations

import enum
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConversionError,
    ParameterError,
    ParseError,
    ShapeError,
    SplitError,
)
from .graph import Node, Subgraph

_MASK64 = (1 << 64) - 1
_INT32_MAX = 2**31 - 1
_INT32_MIN = -(2**31)


class FileFormat(enum.Enum):
    TXT = "txt"
    CSV = "csv"
    JSON = "json"
    OPF_BINARY = "opf"


_EXTENSIONS = {
    ".txt": FileFormat.TXT,
    ".csv": FileFormat.CSV,
    ".json": FileFormat.JSON,
    ".opf": FileFormat.OPF_BINARY,
}


def as_format(value) -> FileFormat:
    if isinstance(value, FileFormat):
        return value
    try:
        return FileFormat(str(value).strip().lower().lstrip("."))
    except ValueError:
        names = ", ".join(f.value for f in FileFormat)
        raise ParameterError(f"unknown format {value!r}; expected one of: {names}") from None


def _infer_format(path: Path, hint=None) -> FileFormat:
    if hint is not None:
        return as_format(hint)
    fmt = _EXTENSIONS.get(path.suffix.lower())
    if fmt is None:
        raise ParameterError(
            f"cannot infer format from {path.name!r}; pass an explicit format"
        )
    return fmt


@dataclass(frozen=True)
class Dataset:
    """Immutable sample table: ids, 1-based labels, float64 features."""

    ids: np.ndarray
    labels: np.ndarray
    features: np.ndarray
    source_format: FileFormat = FileFormat.TXT

    def __post_init__(self) -> None:
        ids = np.asarray(self.ids, dtype=np.int64)
        labels = np.asarray(self.labels, dtype=np.int64)
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise ShapeError(f"features must be 2-D, got shape {features.shape}")
        n = features.shape[0]
        if ids.shape != (n,) or labels.shape != (n,):
            raise ShapeError("ids, labels, and feature rows must have equal length")
        if n == 0 or features.shape[1] == 0:
            raise ShapeError("a dataset needs at least one sample and one feature")
        if len(set(ids.tolist())) != n:
            raise ParameterError("sample ids must be unique")
        if (labels < 1).any():
            raise ParameterError("class labels are 1-based")
        if not np.isfinite(features).all():
            raise ParameterError("features must be finite")
        for arr in (ids, labels, features):
            arr.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "features", features)

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_classes(self) -> int:
        return int(self.labels.max())

    def take(self, rows, source_format: FileFormat | None = None) -> Dataset:
        idx = np.asarray(rows, dtype=np.int64)
        return Dataset(self.ids[idx].copy(), self.labels[idx].copy(),
                       self.features[idx].copy(),
                       source_format if source_format is not None else self.source_format)


@dataclass(frozen=True)
class SplitSpec:
    """Split parameters: first-side fraction, 64-bit seed, stratified flag."""

    fraction: float
    seed: int
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction < 1.0:
            raise ParameterError(f"fraction must lie in (0, 1), got {self.fraction}")
        if not 0 <= self.seed <= _MASK64:
            raise ParameterError("seed must be an unsigned 64-bit integer")


class SplitMix64:
    """splitmix64: the documented deterministic generator behind split()."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def _fisher_yates(n: int, rng: SplitMix64) -> list[int]:
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next() % (i + 1)
        order[i], order[j] = order[j], order[i]
    return order


# ---------------------------------------------------------------- loaders

def _parse_table_line(tokens: list[str], where: str, n_cols: int | None,
                      seen_ids: set[int]) -> tuple[int, int, list[float]]:
    if len(tokens) < 3:
        raise ParseError(f"{where}: expected id, label, and at least one feature")
    if n_cols is not None and len(tokens) != n_cols:
        raise ParseError(f"{where}: ragged row ({len(tokens)} columns, expected {n_cols})")
    try:
        sample_id = int(tokens[0])
    except ValueError:
        raise ParseError(f"{where}: id {tokens[0]!r} is not an integer") from None
    try:
        label = int(tokens[1])
    except ValueError:
        raise ParseError(f"{where}: label {tokens[1]!r} is not an integer") from None
    if label < 1:
        raise ParseError(f"{where}: label must be >= 1, got {label}")
    if sample_id in seen_ids:
        raise ParseError(f"{where}: duplicate id {sample_id}")
    seen_ids.add(sample_id)
    feats = []
    for tok in tokens[2:]:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"{where}: feature {tok!r} is not numeric") from None
        if v != v or v in (float("inf"), float("-inf")):
            raise ParseError(f"{where}: non-finite feature {tok!r}")
        feats.append(v)
    return sample_id, label, feats


def _load_table(path: Path, sep: str | None, strict: bool, fmt: FileFormat) -> Dataset:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    ids: list[int] = []
    labels: list[int] = []
    rows: list[list[float]] = []
    seen: set[int] = set()
    n_cols: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        where = f"{path.name} line {lineno}"
        if strict:
            tokens = line.split(sep if sep is not None else " ")
            if any(t == "" for t in tokens):
                raise ParseError(f"{where}: empty field or stray separator")
        else:
            stripped = line.strip()
            if not stripped:
                continue
            # empty fields from doubled or trailing separators are tolerated
            tokens = [t for t in (t.strip() for t in stripped.split(sep)) if t]
        sample_id, label, feats = _parse_table_line(tokens, where, n_cols, seen)
        n_cols = len(tokens)
        ids.append(sample_id)
        labels.append(label)
        rows.append(feats)
    if not rows:
        raise ParseError(f"{path.name}: no samples")
    return Dataset(np.array(ids), np.array(labels), np.array(rows), fmt)


def _load_json(path: Path) -> Dataset:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path.name}: invalid structured text: {e}") from e
    if not isinstance(payload, dict) or "data" not in payload:
        raise ParseError(f"{path.name}: top-level object must carry a 'data' array")
    data = payload["data"]
    if not isinstance(data, list) or not data:
        raise ParseError(f"{path.name}: 'data' must be a non-empty array")
    ids, labels, rows = [], [], []
    seen: set[int] = set()
    n_cols = None
    for k, item in enumerate(data):
        where = f"{path.name} data[{k}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: each sample must be an object")
        for field in ("id", "label", "features"):
            if field not in item:
                raise ParseError(f"{where}: missing field {field!r}")
        if not isinstance(item["id"], int) or isinstance(item["id"], bool):
            raise ParseError(f"{where}: id must be an integer")
        if not isinstance(item["label"], int) or isinstance(item["label"], bool):
            raise ParseError(f"{where}: label must be an integer")
        if item["label"] < 1:
            raise ParseError(f"{where}: label must be >= 1, got {item['label']}")
        if item["id"] in seen:
            raise ParseError(f"{where}: duplicate id {item['id']}")
        seen.add(item["id"])
        feats = item["features"]
        if not isinstance(feats, list) or not feats:
            raise ParseError(f"{where}: features must be a non-empty array")
        if n_cols is not None and len(feats) != n_cols:
            raise ParseError(f"{where}: ragged row ({len(feats)} features, expected {n_cols})")
        n_cols = len(feats)
        vals = []
        for v in feats:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"{where}: feature {v!r} is not numeric")
            if v != v or v in (float("inf"), float("-inf")):
                raise ParseError(f"{where}: non-finite feature")
            vals.append(float(v))
        ids.append(item["id"])
        labels.append(item["label"])
        rows.append(vals)
    return Dataset(np.array(ids), np.array(labels), np.array(rows), FileFormat.JSON)


def _load_opf(path: Path) -> Dataset:
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    if len(blob) < 12:
        raise ParseError(f"{path.name}: truncated header at byte {len(blob)} (need 12)")
    n, n_classes, f = struct.unpack_from("<iii", blob, 0)
    if n < 1 or n_classes < 1 or f < 1:
        raise ParseError(f"{path.name}: non-positive header field (n={n}, classes={n_classes}, features={f})")
    record = 8 + 4 * f
    expected = 12 + n * record
    if len(blob) != expected:
        raise ParseError(
            f"{path.name}: size mismatch at byte {len(blob)}; header implies {expected} bytes"
        )
    ids = np.empty(n, dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    features = np.empty((n, f), dtype=np.float64)
    seen: set[int] = set()
    for k in range(n):
        off = 12 + k * record
        sample_id, label = struct.unpack_from("<ii", blob, off)
        if label < 1:
            raise ParseError(f"{path.name}: sample at byte {off}: label must be >= 1, got {label}")
        if sample_id in seen:
            raise ParseError(f"{path.name}: sample at byte {off}: duplicate id {sample_id}")
        seen.add(sample_id)
        row = np.frombuffer(blob, dtype="<f4", count=f, offset=off + 8)
        if not np.isfinite(row).all():
            raise ParseError(f"{path.name}: sample at byte {off}: non-finite feature")
        ids[k] = sample_id
        labels[k] = label
        features[k] = row.astype(np.float64)
    if int(labels.max()) != n_classes:
        raise ParseError(
            f"{path.name}: header says {n_classes} classes but the highest label is {int(labels.max())}"
        )
    return Dataset(ids, labels, features, FileFormat.OPF_BINARY)


def load(path, format=None, strict: bool = False) -> Dataset:
    """Read a dataset; the format comes from the extension unless hinted."""
    p = Path(path)
    fmt = _infer_format(p, format)
    if fmt is FileFormat.TXT:
        return _load_table(p, None if not strict else " ", strict, FileFormat.TXT)
    if fmt is FileFormat.CSV:
        return _load_table(p, ",", strict, FileFormat.CSV)
    if fmt is FileFormat.JSON:
        return _load_json(p)
    return _load_opf(p)


# ---------------------------------------------------------------- writers

def _float_text(v: float) -> str:
    return repr(float(v))


def _save_table(ds: Dataset, path: Path, sep: str) -> None:
    lines = []
    for i in range(ds.n_samples):
        parts = [str(int(ds.ids[i])), str(int(ds.labels[i]))]
        parts.extend(_float_text(v) for v in ds.features[i])
        lines.append(sep.join(parts))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _save_json(ds: Dataset, path: Path) -> None:
    payload = {
        "data": [
            {
                "id": int(ds.ids[i]),
                "label": int(ds.labels[i]),
                "features": [float(v) for v in ds.features[i]],
            }
            for i in range(ds.n_samples)
        ]
    }
    path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def _save_opf(ds: Dataset, path: Path) -> None:
    if ds.n_samples > _INT32_MAX or ds.n_features > _INT32_MAX or ds.n_classes > _INT32_MAX:
        raise ConversionError("dataset dimensions do not fit 32-bit binary storage")
    for i in range(ds.n_samples):
        for v in (int(ds.ids[i]), int(ds.labels[i])):
            if not _INT32_MIN <= v <= _INT32_MAX:
                raise ConversionError(f"id or label {v} does not fit 32-bit binary storage")
    with np.errstate(over="ignore"):
        quantized = ds.features.astype(np.float32)
    if not np.isfinite(quantized).all():
        raise ConversionError("a feature value overflows 32-bit floating point storage")
    out = bytearray()
    out += struct.pack("<iii", ds.n_samples, ds.n_classes, ds.n_features)
    for i in range(ds.n_samples):
        out += struct.pack("<ii", int(ds.ids[i]), int(ds.labels[i]))
        out += quantized[i].tobytes()
    path.write_bytes(bytes(out))


def save(dataset: Dataset, path, format=None) -> None:
    """Write a dataset; deterministic bytes for identical inputs."""
    p = Path(path)
    fmt = _infer_format(p, format)
    if fmt is FileFormat.TXT:
        _save_table(dataset, p, " ")
    elif fmt is FileFormat.CSV:
        _save_table(dataset, p, ",")
    elif fmt is FileFormat.JSON:
        _save_json(dataset, p)
    else:
        _save_opf(dataset, p)


# ------------------------------------------------------------- operations

def parse(dataset: Dataset) -> Subgraph:
    """One node per row, in row order; rejects gaps in the class range."""
    nodes = [
        Node(i, dataset.features[i], int(dataset.labels[i]))
        for i in range(dataset.n_samples)
    ]
    return Subgraph(nodes)


def split(dataset: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Deterministic seeded partition into (first, second) sides."""
    n = dataset.n_samples
    if n < 2:
        raise SplitError(f"cannot split {n} sample(s)")
    k = int(np.ceil(spec.fraction * n))
    if k <= 0 or k >= n:
        raise SplitError(
            f"fraction {spec.fraction} of {n} samples leaves an empty side ({k} vs {n - k})"
        )
    order = _fisher_yates(n, SplitMix64(spec.seed))
    if not spec.stratified:
        return dataset.take(order[:k]), dataset.take(order[k:])
    labels = dataset.labels
    classes = sorted(set(labels.tolist()))
    for c in classes:
        if int((labels == c).sum()) < 2:
            raise SplitError(f"stratified split needs >= 2 members per class; class {c} is smaller")
    # largest-remainder apportionment of k over classes, ties to smaller id
    counts = {c: int((labels == c).sum()) for c in classes}
    quota = {c: k * counts[c] / n for c in classes}
    base = {c: int(quota[c]) for c in classes}
    left = k - sum(base.values())
    for c in sorted(classes, key=lambda c: (-(quota[c] - base[c]), c)):
        if left <= 0:
            break
        base[c] += 1
        left -= 1
    drawn: dict[int, list[int]] = {c: [] for c in classes}
    for row in order:
        drawn[int(labels[row])].append(row)
    first: list[int] = []
    second: list[int] = []
    for c in classes:
        first.extend(drawn[c][: base[c]])
        second.extend(drawn[c][base[c]:])
    return dataset.take(first), dataset.take(second)


@dataclass(frozen=True)
class ConversionReport:
    source_format: FileFormat
    target_format: FileFormat
    n_samples: int
    n_features: int
    n_classes: int
    quantized: bool

    def __str__(self) -> str:
        note = " (features quantized to 32-bit)" if self.quantized else ""
        return (
            f"converted {self.n_samples} samples x {self.n_features} features "
            f"({self.n_classes} classes) from {self.source_format.value} "
            f"to {self.target_format.value}{note}"
        )


def convert(in_path, out_path, target_format=None, strict: bool = False) -> ConversionReport:
    """Load one format, write another; reports what moved."""
    src = Path(in_path)
    dst = Path(out_path)
    ds = load(src, strict=strict)
    fmt = _infer_format(dst, target_format)
    save(ds, dst, fmt)
    quantized = FileFormat.OPF_BINARY in (ds.source_format, fmt)
    return ConversionReport(ds.source_format, fmt, ds.n_samples, ds.n_features,
                            ds.n_classes, quantized)


def normalize(dataset: Dataset) -> Dataset:
    """Explicit min-max rescale per feature column into [0, 1].

    Constant columns map to zero. Never applied implicitly by any loader.
    """
    lo = dataset.features.min(axis=0)
    hi = dataset.features.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0
    rescaled = (dataset.features - lo) / span
    return Dataset(dataset.ids.copy(), dataset.labels.copy(), rescaled,
                   dataset.source_format)
