from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from typing import Literal, NotRequired, TypedDict

from thzsounder.constants import SCHEMA_VERSION
from thzsounder.errors import ScenarioValidationError
from thzsounder.scenario.band import BandConfig, BandConfigJson
from thzsounder.scenario.objects import (
    Placement,
    PlacementJson,
    Room,
    RoomJson,
    ScattererPanel,
    ScattererPanelJson,
)
from thzsounder.scenario.scan import ScanGrid, ScanGridJson
from thzsounder.serializer import Model

type AveragingMode = Literal["equivalent", "explicit"]


class DriftProcessJson(TypedDict):
    rate_ns_per_hour: float
    offset_ns: NotRequired[float]


@dataclass(frozen=True, slots=True)
class DriftProcess(Model[DriftProcessJson]):
    """Linear Tx/Rx clock drift measured from the synchronization epoch (t = 0)."""

    rate_ns_per_hour: float = 0.0
    offset_ns: float = 0.0

    def offset_s(self, timestamp_s: float) -> float:
        return (self.offset_ns + self.rate_ns_per_hour * timestamp_s / 3600.0) * 1e-9

    def to_json(self) -> DriftProcessJson:
        return {"rate_ns_per_hour": self.rate_ns_per_hour, "offset_ns": self.offset_ns}

    @classmethod
    def from_json(cls, json: DriftProcessJson) -> DriftProcess:
        return cls(
            rate_ns_per_hour=float(json["rate_ns_per_hour"]),
            offset_ns=float(json.get("offset_ns", 0.0)),
        )


class NoiseConfigJson(TypedDict):
    power_db: float | None


@dataclass(frozen=True, slots=True)
class NoiseConfig(Model[NoiseConfigJson]):
    """Per-sample noise power of one correlator output, relative to a unit-gain path."""

    power_db: float | None = -160.0

    @property
    def level_db(self) -> float:
        return -math.inf if self.power_db is None else self.power_db

    def to_json(self) -> NoiseConfigJson:
        return {"power_db": self.power_db}

    @classmethod
    def from_json(cls, json: NoiseConfigJson) -> NoiseConfig:
        power = json.get("power_db")
        return cls(power_db=None if power is None else float(power))


class AveragingConfigJson(TypedDict):
    count: int
    mode: NotRequired[AveragingMode]


@dataclass(frozen=True, slots=True)
class AveragingConfig(Model[AveragingConfigJson]):
    count: int = 1000
    mode: AveragingMode = "equivalent"

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be at least 1, got {self.count}")
        if self.mode not in ("equivalent", "explicit"):
            raise ValueError(f"unknown averaging mode {self.mode!r}")

    def to_json(self) -> AveragingConfigJson:
        return {"count": self.count, "mode": self.mode}

    @classmethod
    def from_json(cls, json: AveragingConfigJson) -> AveragingConfig:
        return cls(count=int(json["count"]), mode=json.get("mode", "equivalent"))


class MeasurementScheduleJson(TypedDict):
    start_s: float
    position_duration_s: float
    transition_s: float


@dataclass(frozen=True, slots=True)
class MeasurementSchedule(Model[MeasurementScheduleJson]):
    start_s: float = 0.0
    position_duration_s: float = 1200.0
    transition_s: float = 300.0

    def __post_init__(self) -> None:
        if self.start_s < 0 or self.transition_s < 0:
            raise ValueError("start_s and transition_s must not be negative")
        if not self.position_duration_s > 0:
            raise ValueError("position_duration_s must be positive")

    def timestamp(self, position_index: int, direction_index: int, direction_count: int) -> float:
        position_start = self.start_s + position_index * (
            self.position_duration_s + self.transition_s
        )
        return position_start + direction_index * self.position_duration_s / direction_count

    def to_json(self) -> MeasurementScheduleJson:
        return {
            "start_s": self.start_s,
            "position_duration_s": self.position_duration_s,
            "transition_s": self.transition_s,
        }

    @classmethod
    def from_json(cls, json: MeasurementScheduleJson) -> MeasurementSchedule:
        return cls(
            start_s=float(json.get("start_s", 0.0)),
            position_duration_s=float(json.get("position_duration_s", 1200.0)),
            transition_s=float(json.get("transition_s", 300.0)),
        )


class SystemResponseConfigJson(TypedDict):
    enabled: bool
    insertion_loss_db: NotRequired[float]
    ripple_db: NotRequired[float]
    ripple_period_hz: NotRequired[float]
    delay_bins: NotRequired[int]


@dataclass(frozen=True, slots=True)
class SystemResponseConfig(Model[SystemResponseConfigJson]):
    enabled: bool = False
    insertion_loss_db: float = 3.0
    ripple_db: float = 1.0
    ripple_period_hz: float = 3e8
    delay_bins: int = 0

    def __post_init__(self) -> None:
        if not self.ripple_period_hz > 0:
            raise ValueError("ripple_period_hz must be positive")
        if self.delay_bins < 0:
            raise ValueError("delay_bins must not be negative")

    def to_json(self) -> SystemResponseConfigJson:
        return {
            "enabled": self.enabled,
            "insertion_loss_db": self.insertion_loss_db,
            "ripple_db": self.ripple_db,
            "ripple_period_hz": self.ripple_period_hz,
            "delay_bins": self.delay_bins,
        }

    @classmethod
    def from_json(cls, json: SystemResponseConfigJson) -> SystemResponseConfig:
        return cls(
            enabled=bool(json.get("enabled", False)),
            insertion_loss_db=float(json.get("insertion_loss_db", 3.0)),
            ripple_db=float(json.get("ripple_db", 1.0)),
            ripple_period_hz=float(json.get("ripple_period_hz", 3e8)),
            delay_bins=int(json.get("delay_bins", 0)),
        )


class ScenarioJson(TypedDict):
    schema_version: NotRequired[int]
    name: NotRequired[str]
    room: RoomJson
    objects: list[ScattererPanelJson]
    tx: PlacementJson
    rx: list[PlacementJson]
    bands: list[BandConfigJson]
    scan: ScanGridJson
    drift: DriftProcessJson
    noise: NoiseConfigJson
    averaging: AveragingConfigJson
    seed: int
    schedule: NotRequired[MeasurementScheduleJson]
    system: NotRequired[SystemResponseConfigJson]
    processing: NotRequired[dict[str, float]]


@dataclass(frozen=True, slots=True)
class Scenario(Model[ScenarioJson]):
    room: Room
    objects: tuple[ScattererPanel, ...]
    tx: Placement
    rx_list: tuple[Placement, ...]
    bands: tuple[BandConfig, ...]
    scan: ScanGrid
    drift: DriftProcess = DriftProcess()
    noise: NoiseConfig = NoiseConfig()
    averaging: AveragingConfig = AveragingConfig()
    rng_seed: int = 0
    schedule: MeasurementSchedule = MeasurementSchedule()
    system: SystemResponseConfig = SystemResponseConfig()
    processing: Mapping[str, float] = field(default_factory=dict)
    name: str = "scenario"

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not self.rx_list:
            raise ScenarioValidationError("rx", "at least one Rx placement is required")
        if not self.bands:
            raise ScenarioValidationError("bands", "at least one band is required")
        if not self.room.contains(self.tx.position):
            raise ScenarioValidationError("tx.position", f"{self.tx.position} lies outside the room")
        seen: set[int] = set()
        for index, rx in enumerate(self.rx_list):
            if rx.position_id in seen:
                raise ScenarioValidationError(
                    f"rx[{index}].position_id", f"duplicate position id {rx.position_id}"
                )
            seen.add(rx.position_id)
            if rx.position_id < 0:
                raise ScenarioValidationError(
                    f"rx[{index}].position_id", "position ids must not be negative"
                )
            if not self.room.contains(rx.position):
                raise ScenarioValidationError(
                    f"rx[{index}].position", f"{rx.position} lies outside the room"
                )
        for index, panel in enumerate(self.objects):
            if not self.room.contains(panel.center):
                raise ScenarioValidationError(
                    f"objects[{index}].center", f"{panel.center} lies outside the room"
                )

    @property
    def room_extent(self) -> tuple[float, float, float]:
        return self.room.extent

    @property
    def averaging_count(self) -> int:
        return self.averaging.count

    def rx(self, position_id: int) -> Placement:
        for placement in self.rx_list:
            if placement.position_id == position_id:
                return placement
        raise KeyError(f"No Rx with position id {position_id}")

    def band_index(self, label: str) -> int:
        for index, band in enumerate(self.bands):
            if band.label == label:
                return index
        raise KeyError(f"No band labelled {label}")

    def panel(self, panel_id: str) -> ScattererPanel:
        for panel in self.objects:
            if panel.id == panel_id:
                return panel
        raise KeyError(f"No scatterer with id {panel_id}")

    def with_seed(self, seed: int) -> Scenario:
        return replace(self, rng_seed=seed)

    def to_json(self) -> ScenarioJson:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "room": self.room.to_json(),
            "objects": [panel.to_json() for panel in self.objects],
            "tx": self.tx.to_json(),
            "rx": [rx.to_json() for rx in self.rx_list],
            "bands": [band.to_json() for band in self.bands],
            "scan": self.scan.to_json(),
            "drift": self.drift.to_json(),
            "noise": self.noise.to_json(),
            "averaging": self.averaging.to_json(),
            "seed": self.rng_seed,
            "schedule": self.schedule.to_json(),
            "system": self.system.to_json(),
            "processing": dict(self.processing),
        }

    @classmethod
    def from_json(cls, json: ScenarioJson) -> Scenario:
        from thzsounder.scenario.loader import parse_scenario

        return parse_scenario(json)
