from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy.typing as npt

from thzsounder.postproc.calibration import calibrate
from thzsounder.postproc.clustering import Cluster, ClusteringConfig, cluster_mpcs
from thzsounder.postproc.drift import DriftModel, apply_drift_correction
from thzsounder.postproc.extraction import AntennaPair, ExtractionConfig, Mpc, extract_mpcs
from thzsounder.waveform import CirRecord


@dataclass(frozen=True, slots=True)
class PositionResult:
    position_id: int
    records: tuple[CirRecord, ...]
    mpcs: tuple[Mpc, ...]
    clusters: tuple[Cluster, ...]


def postprocess_position(
    records: Sequence[CirRecord],
    *,
    system_response: npt.ArrayLike | CirRecord | None,
    drift_model: DriftModel | None,
    antennas: AntennaPair,
    extraction: ExtractionConfig | None = None,
    clustering: ClusteringConfig | None = None,
    regularization: float = 1e-6,
) -> PositionResult:
    """Calibrate, drift-correct, extract and cluster one position's direction scan."""
    clustering = clustering or ClusteringConfig()
    processed = list(records)
    if system_response is not None:
        processed = [
            calibrate(record, system_response, regularization=regularization)
            for record in processed
        ]
    if drift_model is not None:
        processed = apply_drift_correction(processed, drift_model)
    mpcs = extract_mpcs(processed, None, antennas, extraction)
    clusters = cluster_mpcs(mpcs, clustering.mcd_threshold, zeta=clustering.zeta)
    position_id = records[0].position_id if records else -1
    return PositionResult(
        position_id=position_id,
        records=tuple(processed),
        mpcs=tuple(mpcs),
        clusters=tuple(clusters),
    )
