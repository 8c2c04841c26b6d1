"""Size bias of the group h-index: null models, scaling fits, and
size-normalized rankings."""

__version__ = "0.1.0"

from .combinatorics import (
    BasketSpec,
    PoolSpec,
    count_distribution,
    hypergeom_pmf,
    most_likely_black_count,
    share_distribution,
)
from .model import Dataset, Publication, Unit, group_h_index, h_index, productivity
from .nullmodel import (
    ReshuffleConfig,
    ReshuffleResult,
    mean_spearman_vs_real,
    run_null_model,
    spearman,
)
from .scaling import (
    Benchmark,
    FitError,
    NormalizedScore,
    PowerLawFit,
    build_benchmark,
    fit_power_law,
    normalized_ranking,
    normalized_scores,
    slope_significance,
)
from .synth import (
    CitationModel,
    SizeModel,
    build_synthetic_dataset,
    sample_citations,
    sample_sizes,
    verify_beta_relation,
)

__all__ = [
    "__version__",
    "BasketSpec",
    "Benchmark",
    "CitationModel",
    "Dataset",
    "FitError",
    "NormalizedScore",
    "PoolSpec",
    "PowerLawFit",
    "Publication",
    "ReshuffleConfig",
    "ReshuffleResult",
    "SizeModel",
    "Unit",
    "build_benchmark",
    "build_synthetic_dataset",
    "count_distribution",
    "fit_power_law",
    "group_h_index",
    "h_index",
    "hypergeom_pmf",
    "mean_spearman_vs_real",
    "most_likely_black_count",
    "normalized_ranking",
    "normalized_scores",
    "productivity",
    "run_null_model",
    "sample_citations",
    "sample_sizes",
    "share_distribution",
    "slope_significance",
    "spearman",
    "verify_beta_relation",
]
