from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal, TypedDict

import numpy as np

from thzsounder.errors import CharacterizationError
from thzsounder.serializer import Model
from thzsounder.synth.friis import fspl
from thzsounder.waveform import CirRecord

type Reduce = Literal["mean", "energy"]


def pl_best(
    records: Sequence[CirRecord], *, antenna_gain_db: float = 0.0, reduce: Reduce = "mean"
) -> float:
    """Path loss in the steering direction with the strongest received power.

    ``reduce="mean"`` averages |h[k]|^2 over all delay bins; ``"energy"`` sums
    them, which equals the received power for a unit-energy delay kernel.
    ``antenna_gain_db`` is added back so antenna gains do not count as loss.
    """
    if not records:
        raise CharacterizationError("pl_best needs at least one record")
    reducer = np.mean if reduce == "mean" else np.sum
    best = max(float(reducer(np.abs(record.samples) ** 2)) for record in records)
    if not best > 0:
        raise CharacterizationError("No received power in any direction")
    return -10 * math.log10(best) + antenna_gain_db


def pl_omni(mpcs: Sequence) -> float:
    if not mpcs:
        raise CharacterizationError("pl_omni needs at least one MPC")
    total = math.fsum(abs(mpc.gain_linear) ** 2 for mpc in mpcs)
    if not total > 0:
        raise CharacterizationError("MPCs carry no power")
    return -10 * math.log10(total)


class CiFitResultJson(TypedDict):
    ple: float
    sigma_sf_db: float
    d0_m: float
    frequency_hz: float
    residual_mean_db: float
    residuals_db: list[float]
    distances_m: list[float]


@dataclass(frozen=True, slots=True)
class CiFitResult(Model[CiFitResultJson]):
    ple: float
    sigma_sf_db: float
    d0_m: float
    frequency_hz: float
    residual_mean_db: float
    residuals_db: tuple[float, ...]
    distances_m: tuple[float, ...]

    def predict(self, distance_m: float) -> float:
        return fspl(self.d0_m, self.frequency_hz) + 10 * self.ple * math.log10(
            distance_m / self.d0_m
        )

    def to_json(self) -> CiFitResultJson:
        return {
            "ple": self.ple,
            "sigma_sf_db": self.sigma_sf_db,
            "d0_m": self.d0_m,
            "frequency_hz": self.frequency_hz,
            "residual_mean_db": self.residual_mean_db,
            "residuals_db": list(self.residuals_db),
            "distances_m": list(self.distances_m),
        }

    @classmethod
    def from_json(cls, json: CiFitResultJson) -> CiFitResult:
        return cls(
            ple=float(json["ple"]),
            sigma_sf_db=float(json["sigma_sf_db"]),
            d0_m=float(json["d0_m"]),
            frequency_hz=float(json["frequency_hz"]),
            residual_mean_db=float(json["residual_mean_db"]),
            residuals_db=tuple(float(value) for value in json["residuals_db"]),
            distances_m=tuple(float(value) for value in json["distances_m"]),
        )


def fit_ci(
    points: Sequence[tuple[float, float]], frequency_hz: float, d0_m: float = 1.0
) -> CiFitResult:
    """Close-in reference distance fit PL = FSPL(d0) + 10 n log10(d/d0) + X.

    The model has no intercept, so the shadow-fading deviation is the RMS of
    the residuals and their mean is reported separately.
    """
    if len(points) < 2:
        raise CharacterizationError(f"CI fit needs at least two points, got {len(points)}")
    distances = np.array([point[0] for point in points], dtype=np.float64)
    losses = np.array([point[1] for point in points], dtype=np.float64)
    if np.any(distances < d0_m):
        raise CharacterizationError(f"Distances must not be below d0 = {d0_m} m")
    if np.ptp(distances) == 0:
        raise CharacterizationError("CI fit needs at least two distinct distances")
    x = 10 * np.log10(distances / d0_m)
    y = losses - fspl(d0_m, frequency_hz)
    ple = float(np.dot(x, y) / np.dot(x, x))
    residuals = y - ple * x
    return CiFitResult(
        ple=ple,
        sigma_sf_db=float(math.sqrt(float(np.mean(residuals**2)))),
        d0_m=d0_m,
        frequency_hz=frequency_hz,
        residual_mean_db=float(np.mean(residuals)),
        residuals_db=tuple(float(value) for value in residuals),
        distances_m=tuple(float(value) for value in distances),
    )
