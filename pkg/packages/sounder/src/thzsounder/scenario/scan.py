from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TypedDict

import numpy as np

from thzsounder.errors import GridError
from thzsounder.serializer import Model

type Direction = tuple[float, float]

_TOLERANCE = 1e-9


def _axis(start: float, stop: float, step: float, name: str) -> list[float]:
    if stop < start:
        raise GridError(f"{name} stop {stop} is below start {start}")
    if not step > 0:
        raise GridError(f"{name} step must be positive, got {step}")
    span = (stop - start) / step
    count = round(span)
    if abs(span - count) > _TOLERANCE * max(1.0, abs(span)):
        raise GridError(f"{name} range {start}..{stop} is not a multiple of {step}")
    return [float(start + index * step) for index in range(count + 1)]


class ScanGridJson(TypedDict):
    az_start_deg: float
    az_stop_deg: float
    az_step_deg: float
    el_start_deg: float
    el_stop_deg: float
    el_step_deg: float


@dataclass(frozen=True, slots=True)
class ScanGrid(Model[ScanGridJson]):
    az_start_deg: float = 0.0
    az_stop_deg: float = 350.0
    az_step_deg: float = 10.0
    el_start_deg: float = -20.0
    el_stop_deg: float = 20.0
    el_step_deg: float = 10.0

    def __post_init__(self) -> None:
        self.azimuths()
        elevations = self.elevations()
        if elevations[0] < -90 or elevations[-1] > 90:
            raise GridError("elevations must lie within [-90, 90]")
        if self.az_stop_deg - self.az_start_deg >= 360:
            raise GridError("azimuth range must be narrower than 360 degrees")

    def azimuths(self) -> list[float]:
        return _axis(self.az_start_deg, self.az_stop_deg, self.az_step_deg, "azimuth")

    def elevations(self) -> list[float]:
        return _axis(self.el_start_deg, self.el_stop_deg, self.el_step_deg, "elevation")

    @property
    def wraps_azimuth(self) -> bool:
        count = len(self.azimuths())
        return math.isclose(count * self.az_step_deg, 360.0)

    @property
    def size(self) -> int:
        return len(self.azimuths()) * len(self.elevations())

    def index_of(self, direction: Direction) -> int:
        az, el = direction
        azimuths = np.asarray(self.azimuths())
        elevations = np.asarray(self.elevations())
        az_offsets = np.abs((azimuths - az + 180.0) % 360.0 - 180.0)
        az_index = int(np.argmin(az_offsets))
        el_index = int(np.argmin(np.abs(elevations - el)))
        if az_offsets[az_index] > 1e-6 or abs(elevations[el_index] - el) > 1e-6:
            raise GridError(f"direction ({az}, {el}) is not on the scan grid")
        return el_index * len(azimuths) + az_index

    def to_json(self) -> ScanGridJson:
        return {
            "az_start_deg": self.az_start_deg,
            "az_stop_deg": self.az_stop_deg,
            "az_step_deg": self.az_step_deg,
            "el_start_deg": self.el_start_deg,
            "el_stop_deg": self.el_stop_deg,
            "el_step_deg": self.el_step_deg,
        }

    @classmethod
    def from_json(cls, json: ScanGridJson) -> ScanGrid:
        return cls(
            az_start_deg=float(json["az_start_deg"]),
            az_stop_deg=float(json["az_stop_deg"]),
            az_step_deg=float(json["az_step_deg"]),
            el_start_deg=float(json["el_start_deg"]),
            el_stop_deg=float(json["el_stop_deg"]),
            el_step_deg=float(json["el_step_deg"]),
        )


def build_direction_grid(scan: ScanGrid) -> list[Direction]:
    """Elevation-major order: every azimuth of the lowest elevation first."""
    return [(az, el) for el in scan.elevations() for az in scan.azimuths()]
