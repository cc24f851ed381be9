from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple, TypedDict

import numpy as np
import numpy.typing as npt
from loguru import logger
from result import Err, Ok
from scipy import stats

from thzsounder.constants import SCHEMA_VERSION
from thzsounder.errors import DriftModelError
from thzsounder.postproc.peaks import detect_strongest_path
from thzsounder.scenario import Scenario, angles_to_unit, angular_offset_deg, los_delay
from thzsounder.serializer import Model
from thzsounder.synth.paths import has_line_of_sight
from thzsounder.waveform import CirRecord, fractional_shift


class DriftSample(NamedTuple):
    t_s: float
    delta_s: float


class DriftModelJson(TypedDict):
    schema_version: int
    samples: list[list[float]]
    slope: float
    intercept_s: float


@dataclass(frozen=True, slots=True)
class DriftModel(Model[DriftModelJson]):
    """Clock drift as a function of time since the synchronization epoch.

    Between the first and last sample the drift is interpolated linearly
    between the bracketing samples; outside that span the least-squares line
    over all samples is used.
    """

    samples: tuple[DriftSample, ...]
    slope: float
    intercept_s: float

    @classmethod
    def fit(cls, samples: Sequence[tuple[float, float]]) -> DriftModel:
        ordered = tuple(sorted(DriftSample(float(t), float(d)) for t, d in samples))
        if len(ordered) < 2:
            raise DriftModelError(f"At least two drift samples are required, got {len(ordered)}")
        times = np.array([sample.t_s for sample in ordered])
        deltas = np.array([sample.delta_s for sample in ordered])
        if np.ptp(times) == 0:
            raise DriftModelError("Drift samples must span more than one instant")
        regression = stats.linregress(times, deltas)
        return cls(
            samples=ordered,
            slope=float(regression.slope),
            intercept_s=float(regression.intercept),
        )

    @property
    def rate_ns_per_hour(self) -> float:
        return self.slope * 3600 * 1e9

    @property
    def span(self) -> tuple[float, float]:
        return self.samples[0].t_s, self.samples[-1].t_s

    def __call__(self, t_s: float) -> float:
        return correct_drift(t_s, self)

    def to_json(self) -> DriftModelJson:
        return {
            "schema_version": SCHEMA_VERSION,
            "samples": [[sample.t_s, sample.delta_s] for sample in self.samples],
            "slope": self.slope,
            "intercept_s": self.intercept_s,
        }

    @classmethod
    def from_json(cls, json: DriftModelJson) -> DriftModel:
        samples = tuple(DriftSample(float(t), float(d)) for t, d in json["samples"])
        if len(samples) < 2:
            raise DriftModelError("Stored drift model has fewer than two samples")
        return cls(
            samples=samples,
            slope=float(json["slope"]),
            intercept_s=float(json["intercept_s"]),
        )


def correct_drift(t_s: float, model: DriftModel) -> float:
    if len(model.samples) < 2:
        raise DriftModelError("Drift correction needs at least two samples")
    first, last = model.span
    if first <= t_s <= last:
        times = [sample.t_s for sample in model.samples]
        deltas = [sample.delta_s for sample in model.samples]
        return float(np.interp(t_s, times, deltas))
    return model.slope * t_s + model.intercept_s


def drift_curve(model: DriftModel, times: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.array([correct_drift(float(t), model) for t in np.asarray(times, dtype=np.float64)])


def select_reference_records(records: Sequence[CirRecord], scenario: Scenario) -> list[CirRecord]:
    """Per LoS position, the record steered closest to the Tx."""
    references = []
    tx = scenario.tx.point
    for rx in scenario.rx_list:
        if not has_line_of_sight(scenario, rx.position_id):
            continue
        candidates = [record for record in records if record.position_id == rx.position_id]
        if not candidates:
            continue
        towards_tx = tx - rx.point
        if not np.any(towards_tx):
            continue
        best = min(
            candidates,
            key=lambda record: angular_offset_deg(
                angles_to_unit(record.az_deg, record.el_deg), towards_tx
            ),
        )
        references.append(best)
    return references


def estimate_drift_samples(records: Sequence[CirRecord], scenario: Scenario) -> list[DriftSample]:
    samples = []
    for record in records:
        match detect_strongest_path(record):
            case Ok(estimate):
                period_s = record.period_bins * record.delay_bin_s
                expected = los_delay(scenario.tx, scenario.rx(record.position_id))
                delta = estimate.delay_s(record.delay_bin_s) - expected
                # the correlation is circular, so wrap into the centred period
                delta = (delta + period_s / 2) % period_s - period_s / 2
                samples.append(DriftSample(record.timestamp_s, delta))
            case Err(reason):
                logger.warning(f"Skipping drift sample: {reason}")
    samples.sort()
    return samples


def apply_drift_correction(records: Sequence[CirRecord], model: DriftModel) -> list[CirRecord]:
    corrected = []
    for record in records:
        shift_bins = -correct_drift(record.timestamp_s, model) / record.delay_bin_s
        if math.isclose(shift_bins, 0.0, abs_tol=1e-12):
            corrected.append(record)
            continue
        corrected.append(
            record.with_samples(fractional_shift(record.samples, shift_bins, record.period_bins))
        )
    return corrected
