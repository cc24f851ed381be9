from .calibration import calibrate, calibrate_all
from .clustering import (
    Cluster,
    ClusteringConfig,
    cluster_mpcs,
    default_delay_scale,
    mcd_features,
)
from .drift import (
    DriftModel,
    DriftSample,
    apply_drift_correction,
    correct_drift,
    drift_curve,
    estimate_drift_samples,
    select_reference_records,
)
from .export import (
    read_clusters,
    read_mpc_csv,
    write_cluster_csv,
    write_drift_samples_csv,
    write_mpc_csv,
)
from .extraction import AntennaPair, DirectionLattice, ExtractionConfig, Mpc, extract_mpcs
from .peaks import (
    PathEstimate,
    detect_strongest_path,
    estimate_noise_floor,
    extract_components,
    refine_peak,
)
from .position import PositionResult, postprocess_position

__all__ = [
    "calibrate",
    "calibrate_all",
    "Cluster",
    "ClusteringConfig",
    "cluster_mpcs",
    "default_delay_scale",
    "mcd_features",
    "DriftModel",
    "DriftSample",
    "apply_drift_correction",
    "correct_drift",
    "drift_curve",
    "estimate_drift_samples",
    "select_reference_records",
    "read_clusters",
    "read_mpc_csv",
    "write_cluster_csv",
    "write_drift_samples_csv",
    "write_mpc_csv",
    "AntennaPair",
    "DirectionLattice",
    "ExtractionConfig",
    "Mpc",
    "extract_mpcs",
    "PathEstimate",
    "detect_strongest_path",
    "estimate_noise_floor",
    "extract_components",
    "refine_peak",
    "PositionResult",
    "postprocess_position",
]
