"""Benchmark harness: timed train/predict sweeps and equivalence reports.

Protocol: for every (dataset, distance, backend) group, one untimed warm-up
fit, then for each run a seeded 50/50 split (seed = base_seed XOR run index)
used in both directions, so `runs` runs yield 2 x runs timing observations
per group. Splits are stratified. Per-cell failures are recorded as skipped
records with a reason and never abort the plan; emitted records plus skips
always equal the planned cell count exactly.

Timing uses a monotonic clock around fit and predict_batch only. Cells run
sequentially so no two timed sections overlap.

Equivalence between the two backends' training times is judged per
(dataset, distance) with the Wilcoxon signed-rank test: zero differences
are dropped, ties get average ranks, W = min(W+, W-), and the two-sided
p-value is exact (full sign enumeration, evaluated as an integer
convolution) up to 25 nonzero differences, with a tie- and
continuity-corrected normal approximation beyond that. p >= alpha marks the
pair statistically equivalent.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .classifier import fit, predict_batch
from .data import Dataset, SplitSpec, load, parse, split, _fisher_yates, SplitMix64
from .distances import Backend, DistanceId, all_distance_ids, distance_by_name, registry_lookup
from .errors import (
    DegenerateTestError,
    EmptyPlanError,
    EmptySummaryError,
    OPFError,
    ParameterError,
    ShapeError,
    SplitError,
)
from .synthetic import BlobSpec, generate_synthetic

_MASK64 = (1 << 64) - 1

RECORD_COLUMNS = (
    "dataset", "distance", "backend", "run", "fold",
    "train_seconds", "predict_seconds", "accuracy", "skipped_reason",
)


# ------------------------------------------------------------ wilcoxon

def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties sharing the average of their positions."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # positions are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_two_sided_p(doubled_ranks: list[int], w2: int, total2: int) -> float:
    """P(W+ <= w) + P(W+ >= total - w) over all 2^n sign assignments.

    The distribution of the doubled W+ is built by convolving one indicator
    per rank, which tallies exactly the same counts as enumerating every
    sign vector.
    """
    counts = [0] * (total2 + 1)
    counts[0] = 1
    upper = 0
    for r in doubled_ranks:
        upper += r
        for s in range(upper, r - 1, -1):
            counts[s] += counts[s - r]
    denom = float(2 ** len(doubled_ranks))
    low = sum(counts[: w2 + 1])
    high = sum(counts[total2 - w2:])
    p = (low + high) / denom
    return min(p, 1.0)


def wilcoxon_signed_rank(a, b) -> tuple[float, float]:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Returns (W, p) with W = min(W+, W-). Zero differences are dropped;
    fewer than five nonzero differences is degenerate.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.ndim != 1 or bv.ndim != 1:
        raise ShapeError("paired samples must be 1-D vectors")
    if av.size != bv.size:
        raise ShapeError(f"paired samples differ in length: {av.size} vs {bv.size}")
    diffs = av - bv
    diffs = diffs[diffs != 0.0]
    if diffs.size == 0:
        raise DegenerateTestError("all paired differences are zero")
    if diffs.size < 5:
        raise DegenerateTestError(
            f"need at least 5 nonzero differences, got {diffs.size}"
        )
    n = diffs.size
    ranks = _average_ranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    w = min(w_plus, w_minus)
    if n <= 25:
        doubled = [int(round(2.0 * r)) for r in ranks]
        p = _exact_two_sided_p(doubled, int(round(2.0 * w)), sum(doubled))
        return w, p
    mean = n * (n + 1) / 4.0
    tie_term = 0.0
    _, tie_counts = np.unique(np.abs(diffs), return_counts=True)
    for t in tie_counts:
        if t > 1:
            tie_term += float(t) ** 3 - float(t)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    if var <= 0.0:
        raise DegenerateTestError("tie structure leaves the statistic without variance")
    z = (w - mean + 0.5) / math.sqrt(var)
    p = math.erfc(-z / math.sqrt(2.0))
    return w, max(0.0, min(p, 1.0))


# ------------------------------------------------------------ plan types

def _as_distance_tuple(distances) -> tuple[DistanceId, ...]:
    if distances is None:
        return tuple(all_distance_ids())
    out = []
    for d in distances:
        out.append(distance_by_name(d) if isinstance(d, str) else DistanceId(d))
    return tuple(out)


def _as_backend_tuple(backends) -> tuple[Backend, ...]:
    if backends is None:
        return (Backend.OPTIMIZED, Backend.REFERENCE)
    return tuple(Backend(b) if not isinstance(b, Backend) else b for b in backends)


@dataclass(frozen=True)
class BenchPlan:
    datasets: tuple[str, ...]
    distances: tuple[DistanceId, ...] = field(default_factory=lambda: tuple(all_distance_ids()))
    backends: tuple[Backend, ...] = (Backend.OPTIMIZED, Backend.REFERENCE)
    folds: int = 2
    runs: int = 25
    base_seed: int = 0
    strict_domain: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "datasets", tuple(str(d) for d in self.datasets))
        object.__setattr__(self, "distances", _as_distance_tuple(self.distances))
        object.__setattr__(self, "backends", _as_backend_tuple(self.backends))
        if not self.datasets:
            raise EmptyPlanError("a plan needs at least one dataset source")
        if not self.distances:
            raise ParameterError("a plan needs at least one distance")
        if not self.backends:
            raise ParameterError("a plan needs at least one backend")
        if self.folds < 2:
            raise ParameterError(f"folds must be >= 2, got {self.folds}")
        if self.runs < 1:
            raise ParameterError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.base_seed <= _MASK64:
            raise ParameterError("base_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class BenchRecord:
    dataset: str
    distance: DistanceId
    backend: Backend
    run: int
    fold: int
    train_seconds: float | None = None
    predict_seconds: float | None = None
    accuracy: float | None = None
    skipped_reason: str | None = None

    def to_row(self) -> list[str]:
        return [
            self.dataset,
            registry_lookup(self.distance).name,
            self.backend.value,
            str(self.run),
            str(self.fold),
            "" if self.train_seconds is None else repr(self.train_seconds),
            "" if self.predict_seconds is None else repr(self.predict_seconds),
            "" if self.accuracy is None else repr(self.accuracy),
            self.skipped_reason or "",
        ]


@dataclass(frozen=True)
class EquivalenceVerdict:
    dataset: str
    distance: DistanceId
    w_statistic: float
    p_value: float
    equivalent: bool
    alpha: float = 0.05


# ------------------------------------------------------------ sources

def _parse_synthetic_source(text: str) -> tuple[str, Dataset]:
    body = text.split(":", 1)[1]
    params: dict[str, str] = {}
    if body:
        for part in body.split(","):
            if "=" not in part:
                raise ParameterError(f"synthetic spec term {part!r} is not key=value")
            k, v = part.split("=", 1)
            params[k.strip()] = v.strip()
    known = {"classes", "per_class", "features", "seed", "separation", "spread", "shift"}
    unknown = set(params) - known
    if unknown:
        raise ParameterError(f"unknown synthetic spec keys: {sorted(unknown)}")
    spec = BlobSpec(
        classes=int(params.get("classes", 2)),
        per_class=int(params.get("per_class", 100)),
        features=int(params.get("features", 2)),
        seed=int(params.get("seed", 0)),
        separation=float(params.get("separation", 10.0)),
        spread=float(params.get("spread", 1.0)),
        nonnegative_shift=params.get("shift", "0").lower() in ("1", "true", "yes"),
    )
    name = (
        f"synthetic_c{spec.classes}x{spec.per_class}_f{spec.features}_seed{spec.seed}"
        + ("_shifted" if spec.nonnegative_shift else "")
    )
    return name, generate_synthetic(spec)


_DATA_SUFFIXES = {".txt", ".csv", ".json", ".opf"}


def resolve_sources(plan: BenchPlan) -> list[tuple[str, Dataset | None, str | None]]:
    """Expand plan dataset entries to (name, dataset-or-None, failure reason)."""
    entries: list[tuple[str, Path | None]] = []
    for source in plan.datasets:
        if source.startswith("synthetic:") or source == "synthetic":
            entries.append((source, None))
            continue
        p = Path(source)
        if p.is_dir():
            files = sorted(
                child for child in p.iterdir()
                if child.is_file() and child.suffix.lower() in _DATA_SUFFIXES
            )
            if not files:
                raise EmptyPlanError(f"directory {p} holds no dataset files")
            entries.extend((str(child), child) for child in files)
        else:
            entries.append((source, p))
    out: list[tuple[str, Dataset | None, str | None]] = []
    loadable = 0
    for source, path in entries:
        if path is None:
            try:
                name, ds = _parse_synthetic_source(source if ":" in source else source + ":")
                out.append((name, ds, None))
                loadable += 1
            except OPFError as e:
                out.append((source, None, f"{type(e).__name__}: {e}"))
            continue
        try:
            ds = load(path)
            out.append((path.stem, ds, None))
            loadable += 1
        except OPFError as e:
            out.append((path.stem, None, f"{type(e).__name__}: {e}"))
    if loadable == 0:
        raise EmptyPlanError("no dataset source could be loaded")
    return out


# ------------------------------------------------------------ execution

def _fold_pairs(ds: Dataset, folds: int, seed: int) -> list[tuple[Dataset, Dataset]]:
    """(train, test) pairs for one run; 2 folds = one split, both directions."""
    if folds == 2:
        first, second = split(ds, SplitSpec(0.5, seed, stratified=True))
        return [(first, second), (second, first)]
    n = ds.n_samples
    if n < folds:
        raise SplitError(f"cannot form {folds} folds from {n} samples")
    order = _fisher_yates(n, SplitMix64(seed))
    labels = ds.labels
    fold_of = [0] * n
    counters: dict[int, int] = {}
    for row in order:
        c = int(labels[row])
        k = counters.get(c, 0)
        fold_of[row] = k % folds
        counters[c] = k + 1
    pairs = []
    for i in range(folds):
        test_rows = [r for r in order if fold_of[r] == i]
        train_rows = [r for r in order if fold_of[r] != i]
        if not test_rows or not train_rows:
            raise SplitError(f"fold {i} of {folds} is empty")
        pairs.append((ds.take(train_rows), ds.take(test_rows)))
    return pairs


class _RecordSink:
    """Streams records as CSV rows while collecting them in memory."""

    def __init__(self, sink) -> None:
        self.records: list[BenchRecord] = []
        self._own = None
        self._writer = None
        if sink is not None:
            if hasattr(sink, "write"):
                handle = sink
            else:
                self._own = open(sink, "w", encoding="utf-8", newline="")
                handle = self._own
            self._writer = csv.writer(handle, lineterminator="\n")
            self._writer.writerow(RECORD_COLUMNS)

    def emit(self, record: BenchRecord) -> None:
        self.records.append(record)
        if self._writer is not None:
            self._writer.writerow(record.to_row())
            if self._own is not None:
                self._own.flush()

    def close(self) -> None:
        if self._own is not None:
            self._own.close()


def run_plan(plan: BenchPlan, sink=None) -> list[BenchRecord]:
    """Execute every plan cell; skipped cells carry a reason, never abort."""
    sources = resolve_sources(plan)
    out = _RecordSink(sink)
    try:
        for name, ds, load_reason in sources:
            for distance in plan.distances:
                for backend in plan.backends:
                    _run_group(plan, name, ds, load_reason, distance, backend, out)
    finally:
        out.close()
    return out.records


def _skip_group(plan: BenchPlan, name: str, distance: DistanceId, backend: Backend,
                reason: str, out: _RecordSink) -> None:
    for run in range(plan.runs):
        for fold in range(plan.folds):
            out.emit(BenchRecord(name, distance, backend, run, fold,
                                 skipped_reason=reason))


def _run_group(plan: BenchPlan, name: str, ds: Dataset | None, load_reason: str | None,
               distance: DistanceId, backend: Backend, out: _RecordSink) -> None:
    if ds is None:
        _skip_group(plan, name, distance, backend, f"load failed: {load_reason}", out)
        return
    # one untimed warm-up fit per group; its failure skips the whole group
    try:
        warm_train, _ = _fold_pairs(ds, plan.folds, plan.base_seed ^ 0)[0]
        fit(parse(warm_train), distance, backend, strict=plan.strict_domain)
    except OPFError as e:
        _skip_group(plan, name, distance, backend,
                    f"warm-up failed: {type(e).__name__}: {e}", out)
        return
    for run in range(plan.runs):
        seed = (plan.base_seed ^ run) & _MASK64
        try:
            pairs = _fold_pairs(ds, plan.folds, seed)
        except OPFError as e:
            for fold in range(plan.folds):
                out.emit(BenchRecord(name, distance, backend, run, fold,
                                     skipped_reason=f"{type(e).__name__}: {e}"))
            continue
        for fold, (train_ds, test_ds) in enumerate(pairs):
            try:
                model = fit(parse(train_ds), distance, backend,
                            strict=plan.strict_domain)
                preds, predict_seconds = predict_batch(
                    model, test_ds.features, strict=plan.strict_domain)
                hits = sum(
                    1 for p, want in zip(preds, test_ds.labels.tolist())
                    if p.label == want
                )
                out.emit(BenchRecord(
                    name, distance, backend, run, fold,
                    train_seconds=model.train_seconds,
                    predict_seconds=predict_seconds,
                    accuracy=hits / test_ds.n_samples,
                ))
            except OPFError as e:
                out.emit(BenchRecord(name, distance, backend, run, fold,
                                     skipped_reason=f"{type(e).__name__}: {e}"))


def read_records(source) -> list[BenchRecord]:
    """Parse a records.csv stream back into BenchRecords."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != RECORD_COLUMNS:
        raise ParameterError("record stream lacks the documented header row")
    records = []
    for row in rows[1:]:
        if len(row) != len(RECORD_COLUMNS):
            raise ParameterError(f"record row has {len(row)} columns: {row!r}")
        records.append(BenchRecord(
            dataset=row[0],
            distance=distance_by_name(row[1]),
            backend=Backend(row[2]),
            run=int(row[3]),
            fold=int(row[4]),
            train_seconds=float(row[5]) if row[5] else None,
            predict_seconds=float(row[6]) if row[6] else None,
            accuracy=float(row[7]) if row[7] else None,
            skipped_reason=row[8] or None,
        ))
    return records


# ------------------------------------------------------------ summary

@dataclass(frozen=True)
class SummaryGroup:
    dataset: str
    distance: DistanceId
    mean_train: dict[Backend, float]
    mean_predict: dict[Backend, float]
    mean_accuracy: dict[Backend, float]
    cells: dict[Backend, int]
    verdict: EquivalenceVerdict | None


@dataclass(frozen=True)
class Summary:
    alpha: float
    groups: list[SummaryGroup]
    datasets: list[str]
    distances: list[DistanceId]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([
            "dataset", "distance", "backend", "cells", "mean_train_seconds",
            "mean_predict_seconds", "mean_accuracy", "w_statistic", "p_value",
            "equivalent", "marked",
        ])
        for g in self.groups:
            marked = _marked_backends(g)
            for backend in (Backend.OPTIMIZED, Backend.REFERENCE):
                if backend not in g.mean_train:
                    continue
                v = g.verdict
                w.writerow([
                    g.dataset,
                    registry_lookup(g.distance).name,
                    backend.value,
                    str(g.cells[backend]),
                    repr(g.mean_train[backend]),
                    repr(g.mean_predict[backend]),
                    repr(g.mean_accuracy[backend]),
                    "" if v is None else repr(v.w_statistic),
                    "" if v is None else repr(v.p_value),
                    "" if v is None else str(v.equivalent).lower(),
                    "yes" if backend in marked else "no",
                ])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [
            "# Benchmark summary",
            "",
            "Protocol: per run, one stratified seeded 50/50 split used in both",
            "directions (2-fold), so each (dataset, distance, backend) group",
            "aggregates 2 x runs timing observations. Split seeds are",
            "base_seed XOR run. Stratified: true.",
            "",
            "Cells show mean training seconds as `optimized [reference]`.",
            "The faster mean is bolded; both are bolded when the Wilcoxon",
            f"signed-rank test finds the backends equivalent at alpha = {self.alpha}.",
            "",
        ]
        by_key = {(g.dataset, g.distance): g for g in self.groups}
        for start in range(0, len(self.distances), 10):
            chunk = self.distances[start:start + 10]
            names = [registry_lookup(d).name for d in chunk]
            lines.append(
                f"## Training seconds, distances {chunk[0].name}-{chunk[-1].name}"
            )
            lines.append("")
            lines.append("| dataset | " + " | ".join(names) + " |")
            lines.append("|" + "---|" * (len(chunk) + 1))
            for dataset in self.datasets:
                cells = []
                for d in chunk:
                    g = by_key.get((dataset, d))
                    cells.append("skip" if g is None else _cell_text(g))
                lines.append("| " + dataset + " | " + " | ".join(cells) + " |")
            lines.append("")
        return "\n".join(lines)


def _marked_backends(g: SummaryGroup) -> set[Backend]:
    if Backend.OPTIMIZED not in g.mean_train or Backend.REFERENCE not in g.mean_train:
        return set()
    if g.verdict is not None and g.verdict.equivalent:
        return {Backend.OPTIMIZED, Backend.REFERENCE}
    o = g.mean_train[Backend.OPTIMIZED]
    r = g.mean_train[Backend.REFERENCE]
    if o == r:
        return {Backend.OPTIMIZED, Backend.REFERENCE}
    return {Backend.OPTIMIZED} if o < r else {Backend.REFERENCE}


def _cell_text(g: SummaryGroup) -> str:
    marked = _marked_backends(g)

    def fmt(backend: Backend) -> str:
        if backend not in g.mean_train:
            return "-"
        text = f"{g.mean_train[backend]:.3f}"
        return f"**{text}**" if backend in marked else text

    return f"{fmt(Backend.OPTIMIZED)} [{fmt(Backend.REFERENCE)}]"


def summarize(records: list[BenchRecord], alpha: float = 0.05,
              verdicts: dict[tuple[str, DistanceId], EquivalenceVerdict] | None = None) -> Summary:
    """Aggregate records into per-(dataset, distance) means with markings."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    completed = [r for r in records if r.skipped_reason is None]
    if not completed:
        raise EmptySummaryError("no completed cells to summarize")
    datasets: list[str] = []
    distances: list[DistanceId] = []
    per_group: dict[tuple[str, DistanceId], dict[Backend, list[BenchRecord]]] = {}
    for r in completed:
        if r.dataset not in datasets:
            datasets.append(r.dataset)
        if r.distance not in distances:
            distances.append(r.distance)
        per_group.setdefault((r.dataset, r.distance), {}).setdefault(r.backend, []).append(r)
    groups = []
    for (dataset, distance), by_backend in per_group.items():
        mean_train = {}
        mean_predict = {}
        mean_accuracy = {}
        cells = {}
        for backend, rs in by_backend.items():
            cells[backend] = len(rs)
            mean_train[backend] = sum(r.train_seconds for r in rs) / len(rs)
            mean_predict[backend] = sum(r.predict_seconds for r in rs) / len(rs)
            mean_accuracy[backend] = sum(r.accuracy for r in rs) / len(rs)
        verdict = None
        if verdicts is not None and (dataset, distance) in verdicts:
            verdict = verdicts[(dataset, distance)]
        elif Backend.OPTIMIZED in by_backend and Backend.REFERENCE in by_backend:
            opt = {(r.run, r.fold): r.train_seconds for r in by_backend[Backend.OPTIMIZED]}
            ref = {(r.run, r.fold): r.train_seconds for r in by_backend[Backend.REFERENCE]}
            keys = sorted(set(opt) & set(ref))
            if keys:
                try:
                    w, p = wilcoxon_signed_rank(
                        [opt[k] for k in keys], [ref[k] for k in keys])
                    verdict = EquivalenceVerdict(dataset, distance, w, p,
                                                 equivalent=p >= alpha, alpha=alpha)
                except DegenerateTestError:
                    verdict = None
        groups.append(SummaryGroup(dataset, distance, mean_train, mean_predict,
                                   mean_accuracy, cells, verdict))
    return Summary(alpha, groups, datasets, distances)
