"""luckmeter: correlation-based evaluation of rank-threshold classifiers.

ROC curves look flattering when positives are rare. This package computes
the phi correlation between sieve membership and the label at every rank
threshold, Fisher intervals for correlations, and simulates the
multiplicative Q-model of creative careers to generate synthetic sieves.
"""
__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402
from .corrstats import (  # noqa: E402
    ConfusionCounts,
    CorrelationEstimate,
    RegressionEstimate,
    binary_rank_ceiling,
    fisher_ci,
    midranks,
    pearson,
    phi_from_counts,
    r_from_rates,
    r_from_regression,
    spearman,
)
from .sieve import (  # noqa: E402
    LabeledRanking,
    SieveReport,
    SparseSieve,
    analyze,
    binary_spearman,
    build_ranking,
    confusion_at,
    correlation_curve,
    precision_curve,
    roc_curve,
)

__all__ = [
    "BACKEND",
    "ConfusionCounts",
    "CorrelationEstimate",
    "LabeledRanking",
    "RegressionEstimate",
    "SieveReport",
    "SparseSieve",
    "analyze",
    "binary_rank_ceiling",
    "binary_spearman",
    "build_ranking",
    "confusion_at",
    "correlation_curve",
    "fisher_ci",
    "midranks",
    "pearson",
    "phi_from_counts",
    "precision_curve",
    "r_from_rates",
    "r_from_regression",
    "roc_curve",
    "spearman",
]
