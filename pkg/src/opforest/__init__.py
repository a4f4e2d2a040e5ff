"""Optimum-path forest classification with a 47-measure distance registry.

Training builds a minimum spanning tree over the samples, takes both
endpoints of every edge that joins two classes as prototypes, and grows an
optimum-path forest from them under the max-arc path cost. Prediction
attaches a query to the training node offering the cheapest such path and
inherits that node's conquered label.

Every distance measure ships in two numerically equivalent backends: a
scalar reference implementation and a blocked row-sweep implementation.
"""

from __future__ import annotations

from .bench import (
    BenchPlan,
    BenchRecord,
    EquivalenceVerdict,
    Summary,
    read_records,
    run_plan,
    summarize,
    wilcoxon_signed_rank,
)
from .classifier import (
    Prediction,
    TrainedModel,
    find_prototypes,
    fit,
    load_model,
    predict,
    predict_batch,
    save_model,
)
from .data import (
    ConversionReport,
    Dataset,
    FileFormat,
    SplitMix64,
    SplitSpec,
    convert,
    load,
    normalize,
    parse,
    save,
    split,
)
from .distances import (
    Backend,
    DistanceId,
    DistanceSpec,
    Domain,
    Family,
    all_distance_ids,
    distance_by_name,
    evaluate,
    pairwise_matrix,
    registry_lookup,
    resolve_threads,
)
from .errors import (
    ConversionError,
    DegenerateTestError,
    DegenerateTrainingError,
    DomainError,
    EmptyHeapError,
    EmptyPlanError,
    EmptySummaryError,
    HeapMisuseError,
    MissingClassError,
    OPFError,
    ParameterError,
    ParseError,
    RejectedUpdateError,
    ShapeError,
    SplitError,
    VersionError,
)
from .graph import Node, Subgraph
from .heap import CostHeap
from .synthetic import BlobSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # distances
    "Backend", "DistanceId", "DistanceSpec", "Domain", "Family",
    "all_distance_ids", "distance_by_name", "evaluate", "pairwise_matrix",
    "registry_lookup", "resolve_threads",
    # graph and classifier
    "Node", "Subgraph", "CostHeap", "Prediction", "TrainedModel",
    "find_prototypes", "fit", "predict", "predict_batch",
    "save_model", "load_model",
    # data
    "ConversionReport", "Dataset", "FileFormat", "SplitMix64", "SplitSpec",
    "convert", "load", "normalize", "parse", "save", "split",
    "BlobSpec", "generate_synthetic",
    # bench
    "BenchPlan", "BenchRecord", "EquivalenceVerdict", "Summary",
    "read_records", "run_plan", "summarize", "wilcoxon_signed_rank",
    # errors
    "OPFError", "ParameterError", "HeapMisuseError", "RejectedUpdateError",
    "EmptyHeapError", "ShapeError", "DomainError", "DegenerateTrainingError",
    "ParseError", "VersionError", "MissingClassError", "SplitError",
    "ConversionError", "EmptyPlanError", "EmptySummaryError",
    "DegenerateTestError",
]
