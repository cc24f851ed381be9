from .kfactor import k_factor, k_factor_from_powers
from .lognormal import FitDomain, LogNormalFit, fit_lognormal
from .pathloss import CiFitResult, Reduce, fit_ci, pl_best, pl_omni
from .scattering import ScatteringMatch, match_scatterers, scattering_loss
from .spreads import SpreadDomain, circular_mean_deg, rms_spread, weighted_mean
from .stats import (
    ChannelStats,
    ClusterStats,
    EnsembleSummary,
    characterize_position,
    cluster_stats,
    ensemble_means,
    read_stats_csv,
    summarize,
    write_stats_csv,
)
from .bands import (
    BandTrendRow,
    Trend,
    compare_bands,
    format_band_comparison_text,
    observed_trend,
    write_band_comparison_csv,
)
from .reference import (
    CHARACTERISTIC_UNITS,
    ComparisonRow,
    ReferenceEntry,
    ReferenceTable,
    bundled_reference_path,
    compare_reference,
    comparison_flag,
    format_comparison_text,
    format_value,
    load_reference_table,
    write_comparison_csv,
)

__all__ = [
    "SpreadDomain",
    "circular_mean_deg",
    "rms_spread",
    "weighted_mean",
    "k_factor",
    "k_factor_from_powers",
    "FitDomain",
    "LogNormalFit",
    "fit_lognormal",
    "CiFitResult",
    "Reduce",
    "fit_ci",
    "pl_best",
    "pl_omni",
    "ScatteringMatch",
    "match_scatterers",
    "scattering_loss",
    "ChannelStats",
    "ClusterStats",
    "EnsembleSummary",
    "characterize_position",
    "ensemble_means",
    "cluster_stats",
    "read_stats_csv",
    "summarize",
    "write_stats_csv",
    "CHARACTERISTIC_UNITS",
    "ComparisonRow",
    "ReferenceEntry",
    "ReferenceTable",
    "bundled_reference_path",
    "compare_reference",
    "comparison_flag",
    "format_comparison_text",
    "format_value",
    "load_reference_table",
    "write_comparison_csv",
    "BandTrendRow",
    "Trend",
    "compare_bands",
    "format_band_comparison_text",
    "observed_trend",
    "write_band_comparison_csv",
]
