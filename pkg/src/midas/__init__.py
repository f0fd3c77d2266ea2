"""Academic Midas Touch (AMT) and classical scientometrics.

Library and CLI for researcher-level indicators over bibliometric corpora:
the AMT score (fraction of publications that accumulate at least y citations
within x years), H-index, i10-index and citation counts, an (x, y)
sensitivity sweep with least-squares plane fit, a self-contained statistical
test battery, and an age-and-productivity matched award-vs-control
comparison.
"""
from .corpus import (
    Continent,
    Corpus,
    CorpusSummary,
    EligibilityRule,
    Gender,
    Publication,
    Researcher,
    descriptive_stats,
    filter_eligible,
    load_corpus,
    save_corpus,
)
from .indicators import (
    AmtParams,
    IndicatorReport,
    amt_score,
    citations_as_of,
    h_index,
    i10_index,
    indicator_report,
    is_highly_cited,
)
from .matching import (
    BalanceReport,
    ComparisonReport,
    MatchedPair,
    TimePoint,
    build_matched_control,
    compare_groups,
    emit_distribution_data,
    verify_balance,
)
from .stats import (
    Method,
    PlaneFit,
    TestResult,
    bonferroni,
    erf_cdf_normal,
    fit_plane,
    kruskal_wallis,
    mann_whitney_u,
    pearson,
    regularized_incomplete_beta,
    regularized_incomplete_gamma,
    shapiro_wilk,
    wilcoxon_signed_rank,
)
from .sweep import SweepGrid, emit_heatmap, fit_sweep, normality_check, run_sweep
from .synth import SynthConfig, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AmtParams",
    "BalanceReport",
    "ComparisonReport",
    "Continent",
    "Corpus",
    "CorpusSummary",
    "EligibilityRule",
    "Gender",
    "IndicatorReport",
    "MatchedPair",
    "Method",
    "PlaneFit",
    "Publication",
    "Researcher",
    "SweepGrid",
    "SynthConfig",
    "TestResult",
    "TimePoint",
    "amt_score",
    "bonferroni",
    "build_matched_control",
    "citations_as_of",
    "compare_groups",
    "descriptive_stats",
    "emit_distribution_data",
    "emit_heatmap",
    "erf_cdf_normal",
    "filter_eligible",
    "fit_plane",
    "fit_sweep",
    "generate_synthetic",
    "h_index",
    "i10_index",
    "indicator_report",
    "is_highly_cited",
    "kruskal_wallis",
    "load_corpus",
    "mann_whitney_u",
    "normality_check",
    "pearson",
    "regularized_incomplete_beta",
    "regularized_incomplete_gamma",
    "run_sweep",
    "save_corpus",
    "shapiro_wilk",
    "verify_balance",
    "wilcoxon_signed_rank",
]
