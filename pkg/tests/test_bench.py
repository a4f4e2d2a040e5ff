from __future__ import annotations

import io
import random

import numpy as np
import pytest

from opforest.bench import (
    BenchPlan,
    BenchRecord,
    EquivalenceVerdict,
    read_records,
    resolve_sources,
    run_plan,
    summarize,
    wilcoxon_signed_rank,
)
from opforest.data import save
from opforest.distances import Backend, DistanceId
from opforest.errors import (
    DegenerateTestError,
    EmptyPlanError,
    EmptySummaryError,
    ParameterError,
    ShapeError,
)
from opforest.synthetic import BlobSpec, generate_synthetic

from oracles import wilcoxon_enumerated


# ------------------------------------------------------------ wilcoxon

def test_worked_example():
    # paired differences 1, -2, 3, 4, 5: W+ = 13, W- = 2, W = 2
    a = [1.0, 0.0, 3.0, 4.0, 5.0]
    b = [0.0, 2.0, 0.0, 0.0, 0.0]
    w, p = wilcoxon_signed_rank(a, b)
    assert w == 2.0
    assert abs(p - 0.1875) <= 1e-15  # 6 of 32 sign vectors are as extreme


def test_exact_p_matches_enumeration_with_ties():
    rng = random.Random(404)
    checked = 0
    while checked < 60:
        n = rng.randint(5, 12)
        a = [rng.randint(-4, 9) * 0.5 for _ in range(n)]
        b = [rng.randint(-4, 9) * 0.5 for _ in range(n)]
        try:
            w, p = wilcoxon_signed_rank(a, b)
        except DegenerateTestError:
            continue
        w2, p2 = wilcoxon_enumerated(a, b)
        assert w == w2
        assert abs(p - p2) <= 1e-12
        checked += 1


def test_normal_approximation_branch():
    rng = np.random.default_rng(9)
    x = rng.normal(0, 1, 60)
    null = x + rng.normal(0, 1, 60)
    w, p = wilcoxon_signed_rank(x, null)
    assert 0.0 <= p <= 1.0 and p > 0.01
    shifted = x + 5.0
    _, p2 = wilcoxon_signed_rank(x, shifted)
    assert p2 < 1e-9


def test_degenerate_and_shape_errors():
    with pytest.raises(DegenerateTestError, match="zero"):
        wilcoxon_signed_rank([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(DegenerateTestError, match="5"):
        wilcoxon_signed_rank([1, 2, 3, 4], [0, 0, 0, 0])
    with pytest.raises(ShapeError):
        wilcoxon_signed_rank([1, 2, 3], [1, 2])
    with pytest.raises(ShapeError):
        wilcoxon_signed_rank([[1, 2]], [[3, 4]])


# ------------------------------------------------------------ plan

def test_plan_defaults_and_validation():
    plan = BenchPlan(datasets=("synthetic:",))
    assert len(plan.distances) == 47
    assert plan.backends == (Backend.OPTIMIZED, Backend.REFERENCE)
    assert plan.folds == 2 and plan.runs == 25
    with pytest.raises(EmptyPlanError):
        BenchPlan(datasets=())
    with pytest.raises(ParameterError):
        BenchPlan(datasets=("x",), folds=1)
    with pytest.raises(ParameterError):
        BenchPlan(datasets=("x",), runs=0)
    with pytest.raises(ParameterError):
        BenchPlan(datasets=("x",), base_seed=-1)
    plan = BenchPlan(datasets=("x",), distances=("euclidean", "D6"))
    assert plan.distances == (DistanceId.D3, DistanceId.D6)


def test_resolve_sources_directory_and_specs(tmp_path):
    ds = generate_synthetic(BlobSpec(classes=2, per_class=6, features=2, seed=0))
    save(ds, tmp_path / "a.txt")
    save(ds, tmp_path / "b.csv")
    (tmp_path / "notes.md").write_text("not a dataset", encoding="utf-8")
    plan = BenchPlan(datasets=(str(tmp_path), "synthetic:classes=2,per_class=4"))
    sources = resolve_sources(plan)
    names = [name for name, _, _ in sources]
    assert names == ["a", "b", "synthetic_c2x4_f2_seed0"]
    assert all(ds is not None for _, ds, _ in sources)

    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(EmptyPlanError):
        resolve_sources(BenchPlan(datasets=(str(empty),)))
    # a malformed synthetic spec is a load failure, like an unreadable file
    with pytest.raises(EmptyPlanError):
        resolve_sources(BenchPlan(datasets=("synthetic:rows=4",)))
    mixed = resolve_sources(BenchPlan(
        datasets=("synthetic:rows=4", "synthetic:classes=2,per_class=4")))
    assert mixed[0][1] is None and "synthetic" in mixed[0][2]
    assert mixed[1][1] is not None


# ------------------------------------------------------------ run_plan

def _tiny_plan(**kw):
    args = dict(
        datasets=("synthetic:classes=2,per_class=8,features=2,seed=4",),
        distances=(DistanceId.D3, DistanceId.D6),
        backends=(Backend.OPTIMIZED, Backend.REFERENCE),
        folds=2,
        runs=2,
        base_seed=5,
    )
    args.update(kw)
    return BenchPlan(**args)


def test_run_plan_accounting_and_stream(tmp_path):
    sink = tmp_path / "records.csv"
    records = run_plan(_tiny_plan(), sink=sink)
    assert len(records) == 1 * 2 * 2 * 2 * 2
    assert all(r.skipped_reason is None for r in records)
    assert all(r.train_seconds > 0 for r in records)
    assert all(0.0 <= r.accuracy <= 1.0 for r in records)
    back = read_records(sink)
    assert back == records


def test_run_plan_cell_order_is_stable():
    records = run_plan(_tiny_plan())
    key = [(r.distance, r.backend, r.run, r.fold) for r in records]
    want = [
        (d, b, run, fold)
        for d in (DistanceId.D3, DistanceId.D6)
        for b in (Backend.OPTIMIZED, Backend.REFERENCE)
        for run in (0, 1)
        for fold in (0, 1)
    ]
    assert key == want


def test_strict_warm_up_failure_skips_the_group():
    # jeffreys needs positive inputs; the blobs are real-valued
    plan = _tiny_plan(distances=(DistanceId.D33, DistanceId.D3),
                      strict_domain=True)
    records = run_plan(plan)
    assert len(records) == 16
    skipped = [r for r in records if r.distance is DistanceId.D33]
    assert len(skipped) == 8
    assert all(r.skipped_reason and "warm-up failed" in r.skipped_reason
               for r in skipped)
    clean = [r for r in records if r.distance is DistanceId.D3]
    assert all(r.skipped_reason is None for r in clean)


def test_unloadable_dataset_skips_with_reason(tmp_path):
    bad = tmp_path / "broken.txt"
    bad.write_text("0 1\n", encoding="utf-8")
    plan = BenchPlan(
        datasets=(str(bad), "synthetic:classes=2,per_class=6,seed=1"),
        distances=(DistanceId.D3,), runs=1,
    )
    records = run_plan(plan)
    assert len(records) == 2 * 1 * 2 * 1 * 2
    broken = [r for r in records if r.dataset == "broken"]
    assert len(broken) == 4
    assert all(r.skipped_reason.startswith("load failed") for r in broken)


def test_three_fold_round_robin():
    plan = _tiny_plan(folds=3, runs=1,
                      datasets=("synthetic:classes=2,per_class=9,seed=2",),
                      distances=(DistanceId.D6,),
                      backends=(Backend.OPTIMIZED,))
    records = run_plan(plan)
    assert len(records) == 3
    assert [r.fold for r in records] == [0, 1, 2]
    assert all(r.skipped_reason is None for r in records)


def test_file_like_sink():
    buf = io.StringIO()
    records = run_plan(_tiny_plan(runs=1), sink=buf)
    text = buf.getvalue()
    assert text.startswith("dataset,distance,backend,run,fold,")
    assert len(text.strip().splitlines()) == len(records) + 1
    assert read_records(io.StringIO(text)) == records


def test_read_records_rejects_bad_streams():
    with pytest.raises(ParameterError, match="header"):
        read_records(io.StringIO("nope\n"))
    good = "dataset,distance,backend,run,fold,train_seconds,predict_seconds,accuracy,skipped_reason\n"
    with pytest.raises(ParameterError):
        read_records(io.StringIO(good + "a,euclidean,optimized,0\n"))


# ------------------------------------------------------------ summarize

def test_summary_means_rederive_from_stream(tmp_path):
    sink = tmp_path / "records.csv"
    records = run_plan(_tiny_plan(), sink=sink)
    direct = summarize(records)
    reread = summarize(read_records(sink))
    for a, b in zip(direct.groups, reread.groups):
        assert a.mean_train == b.mean_train
        assert a.mean_predict == b.mean_predict
        assert a.mean_accuracy == b.mean_accuracy


def test_summary_marks_faster_backend():
    records = []
    for run in range(3):
        for fold in range(2):
            records.append(BenchRecord("d", DistanceId.D3, Backend.OPTIMIZED,
                                       run, fold, 1.0, 0.1, 1.0))
            records.append(BenchRecord("d", DistanceId.D3, Backend.REFERENCE,
                                       run, fold, 2.0 + run + fold, 0.1, 1.0))
    summary = summarize(records)
    md = summary.to_markdown()
    assert "**1.000** [3.500]" in md
    csv_text = summary.to_csv()
    opt_row = [l for l in csv_text.splitlines() if ",optimized," in l][0]
    ref_row = [l for l in csv_text.splitlines() if ",reference," in l][0]
    assert opt_row.endswith("yes") and ref_row.endswith("no")


def test_equivalent_verdict_marks_both():
    records = []
    for run in range(3):
        for fold in range(2):
            records.append(BenchRecord("d", DistanceId.D3, Backend.OPTIMIZED,
                                       run, fold, 1.0 + 0.01 * run, 0.1, 1.0))
            records.append(BenchRecord("d", DistanceId.D3, Backend.REFERENCE,
                                       run, fold, 1.5, 0.1, 1.0))
    forced = {("d", DistanceId.D3): EquivalenceVerdict("d", DistanceId.D3,
                                                       5.0, 0.6, True, 0.05)}
    md = summarize(records, verdicts=forced).to_markdown()
    assert "**1.010** [**1.500**]" in md


def test_wilcoxon_verdict_computed_from_paired_cells():
    records = []
    for run in range(5):
        for fold in range(2):
            records.append(BenchRecord("d", DistanceId.D3, Backend.OPTIMIZED,
                                       run, fold, 1.0 + 0.001 * (run + fold), 0.1, 1.0))
            records.append(BenchRecord("d", DistanceId.D3, Backend.REFERENCE,
                                       run, fold, 3.0 + 0.002 * run, 0.1, 1.0))
    summary = summarize(records)
    verdict = summary.groups[0].verdict
    assert verdict is not None
    assert verdict.w_statistic == 0.0
    assert not verdict.equivalent


def test_summary_errors():
    skip = BenchRecord("d", DistanceId.D3, Backend.OPTIMIZED, 0, 0,
                       skipped_reason="nope")
    with pytest.raises(EmptySummaryError):
        summarize([skip])
    ok = BenchRecord("d", DistanceId.D3, Backend.OPTIMIZED, 0, 0, 1.0, 0.1, 1.0)
    with pytest.raises(ParameterError):
        summarize([ok], alpha=0.0)
    with pytest.raises(ParameterError):
        summarize([ok], alpha=1.5)


def test_markdown_chunks_distances_in_tens():
    ids = [DistanceId(i) for i in range(1, 13)]
    records = [BenchRecord("d", did, Backend.OPTIMIZED, 0, 0, 1.0, 0.1, 1.0)
               for did in ids]
    md = summarize(records).to_markdown()
    assert "distances D1-D10" in md
    assert "distances D11-D12" in md
    assert md.count("## Training seconds") == 2
    assert "alpha = 0.05" in md
    assert "Stratified: true" in md
