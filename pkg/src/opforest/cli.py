"""Command-line entry point.

Subcommands:
  opf train    --input data.txt --distance euclidean --backend optimized --model m.json
  opf predict  --model m.json --input queries.txt --out predictions.txt
  opf convert  --in a.opf --out a.txt
  opf bench    --data dir_or_synthetic_spec --out report/

Prediction files hold one line per input sample: the sample id, the
predicted label, the path cost at full round-trip precision, and the id of
the conquering training node, space separated.

Domain and I/O failures print `error: ...` to stderr and exit with code 1.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from .classifier import fit, load_model, predict_batch, save_model
from .data import convert, load, parse
from .distances import Backend, distance_by_name, registry_lookup
from .errors import EmptySummaryError, OPFError


def _backend(text: str) -> Backend:
    return Backend(text)


def _cmd_train(args: argparse.Namespace) -> int:
    dataset = load(args.input, strict=args.strict)
    subgraph = parse(dataset)
    distance = distance_by_name(args.distance)
    model = fit(subgraph, distance, _backend(args.backend), strict=args.strict)
    save_model(model, args.model)
    print(
        f"trained {subgraph.n_samples} nodes "
        f"({registry_lookup(distance).name}, {args.backend}) in {model.train_seconds:.3f}s "
        f"-> {args.model}"
    )
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    dataset = load(args.input, strict=args.strict)
    predictions, seconds = predict_batch(model, dataset.features, strict=args.strict)
    with open(args.out, "w", encoding="utf-8") as handle:
        for sample_id, pred in zip(dataset.ids.tolist(), predictions):
            handle.write(
                f"{sample_id} {pred.label} {pred.cost!r} {pred.conqueror_id}\n"
            )
    print(f"predicted {len(predictions)} samples in {seconds:.3f}s -> {args.out}")
    return 0


def _cmd_convert(args: argparse.Namespace) -> int:
    report = convert(args.in_path, args.out, strict=args.strict)
    print(report)
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    distances = None if args.distances == "all" else [
        token.strip() for token in args.distances.split(",") if token.strip()
    ]
    if args.backends == "both":
        backends = (Backend.OPTIMIZED, Backend.REFERENCE)
    else:
        backends = (_backend(args.backends),)
    plan = bench_mod.BenchPlan(
        datasets=tuple(args.data),
        distances=distances,
        backends=backends,
        folds=args.folds,
        runs=args.runs,
        base_seed=args.seed,
        strict_domain=args.strict,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = bench_mod.run_plan(plan, sink=out_dir / "records.csv")
    completed = sum(1 for r in records if r.skipped_reason is None)
    print(f"{len(records)} cells ({completed} completed) -> {out_dir / 'records.csv'}")
    try:
        summary = bench_mod.summarize(records, alpha=args.alpha)
    except EmptySummaryError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    (out_dir / "summary.md").write_text(summary.to_markdown(), encoding="utf-8")
    (out_dir / "summary.csv").write_text(summary.to_csv(), encoding="utf-8")
    print(f"summary -> {out_dir / 'summary.md'}, {out_dir / 'summary.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opf",
        description="Optimum-path forest classification toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a model and write it to disk")
    train.add_argument("--input", required=True, help="training dataset file")
    train.add_argument("--distance", required=True,
                       help="distance name (e.g. euclidean) or code (e.g. D3)")
    train.add_argument("--backend", choices=("reference", "optimized"),
                       default="reference")
    train.add_argument("--model", required=True, help="output model file")
    train.add_argument("--strict", action="store_true",
                       help="strict parsing and strict distance domains")
    train.set_defaults(func=_cmd_train)

    predict = sub.add_parser("predict", help="classify samples with a saved model")
    predict.add_argument("--model", required=True, help="model file from train")
    predict.add_argument("--input", required=True, help="dataset file to classify")
    predict.add_argument("--out", required=True, help="output prediction file")
    predict.add_argument("--strict", action="store_true")
    predict.set_defaults(func=_cmd_predict)

    conv = sub.add_parser("convert", help="convert a dataset between formats")
    conv.add_argument("--in", dest="in_path", required=True, help="input dataset")
    conv.add_argument("--out", required=True,
                      help="output dataset; format inferred from extension")
    conv.add_argument("--strict", action="store_true", help="strict parsing")
    conv.set_defaults(func=_cmd_convert)

    bench = sub.add_parser("bench", help="run a timing and accuracy sweep")
    bench.add_argument("--data", required=True, action="append",
                       help="dataset file, directory, or synthetic:k=v,... spec; "
                            "repeat for several sources")
    bench.add_argument("--distances", default="all",
                       help="'all' or comma-separated names/codes")
    bench.add_argument("--backends", choices=("both", "reference", "optimized"),
                       default="both")
    bench.add_argument("--folds", type=int, default=2)
    bench.add_argument("--runs", type=int, default=25)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--alpha", type=float, default=0.05)
    bench.add_argument("--strict", action="store_true")
    bench.add_argument("--out", required=True, help="report directory")
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OPFError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
