from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import TypedDict

import numpy as np
from loguru import logger

from thzsounder.helper import apply_overrides
from thzsounder.postproc.peaks import estimate_noise_floor, extract_components
from thzsounder.scenario import RX_HORN, TX_WAVEGUIDE, AntennaPattern, Scenario
from thzsounder.serializer import Model
from thzsounder.waveform import CirRecord


@dataclass(frozen=True, slots=True)
class ExtractionConfig:
    margin_db: float = 6.0
    max_components: int = 24
    merge_bins: float = 1.0
    sidelobe_rejection_db: float = 20.0
    dynamic_range_db: float = 60.0
    refine_half_width: int = 8

    @classmethod
    def from_overrides(cls, overrides: Mapping[str, float]) -> ExtractionConfig:
        return apply_overrides(cls(), overrides)


@dataclass(frozen=True, slots=True)
class AntennaPair:
    tx: AntennaPattern = TX_WAVEGUIDE
    rx: AntennaPattern = RX_HORN

    @property
    def boresight_amplitude(self) -> float:
        return self.tx.boresight_amplitude * self.rx.boresight_amplitude

    @property
    def boresight_gain_db(self) -> float:
        return self.tx.boresight_gain_dbi + self.rx.boresight_gain_dbi

    @classmethod
    def of(cls, scenario: Scenario, rx_id: int) -> AntennaPair:
        return cls(tx=scenario.tx.antenna, rx=scenario.rx(rx_id).antenna)


class MpcJson(TypedDict):
    position_id: int
    band_index: int
    delay_s: float
    gain: list[float]
    aoa_az_deg: float
    aoa_el_deg: float


@dataclass(frozen=True, slots=True)
class Mpc(Model[MpcJson]):
    position_id: int
    band_index: int
    delay_s: float
    gain_linear: complex
    aoa_az_deg: float
    aoa_el_deg: float

    @property
    def power_linear(self) -> float:
        return abs(self.gain_linear) ** 2

    @property
    def power_db(self) -> float:
        power = self.power_linear
        return 10 * math.log10(power) if power > 0 else -math.inf

    def to_json(self) -> MpcJson:
        return {
            "position_id": self.position_id,
            "band_index": self.band_index,
            "delay_s": self.delay_s,
            "gain": [self.gain_linear.real, self.gain_linear.imag],
            "aoa_az_deg": self.aoa_az_deg,
            "aoa_el_deg": self.aoa_el_deg,
        }

    @classmethod
    def from_json(cls, json: MpcJson) -> Mpc:
        real, imag = json["gain"]
        return cls(
            position_id=int(json["position_id"]),
            band_index=int(json["band_index"]),
            delay_s=float(json["delay_s"]),
            gain_linear=complex(real, imag),
            aoa_az_deg=float(json["aoa_az_deg"]),
            aoa_el_deg=float(json["aoa_el_deg"]),
        )


class DirectionLattice:
    """Integer (azimuth, elevation) indices of the scanned directions."""

    def __init__(self, records: Sequence[CirRecord]) -> None:
        self.azimuths = sorted({round(record.az_deg % 360.0, 9) for record in records})
        self.elevations = sorted({round(record.el_deg, 9) for record in records})
        steps = np.diff(self.azimuths)
        step = float(steps.min()) if len(steps) else 360.0
        self.wraps = len(self.azimuths) > 2 and math.isclose(len(self.azimuths) * step, 360.0)

    def index(self, record: CirRecord) -> tuple[int, int]:
        return (
            self.azimuths.index(round(record.az_deg % 360.0, 9)),
            self.elevations.index(round(record.el_deg, 9)),
        )

    def adjacent(self, az_index: np.ndarray, el_index: np.ndarray, az: int, el: int) -> np.ndarray:
        az_gap = np.abs(az_index - az)
        if self.wraps:
            az_gap = np.minimum(az_gap, len(self.azimuths) - az_gap)
        return (az_gap <= 1) & (np.abs(el_index - el) <= 1)


def extract_mpcs(
    records: Sequence[CirRecord],
    noise_floor_db: float | None = None,
    antennas: AntennaPair | None = None,
    config: ExtractionConfig | None = None,
) -> list[Mpc]:
    """Multipath components of one position from its full direction scan.

    Components are extracted per record by successive peak subtraction, then
    pooled: a candidate survives only if nothing stronger lies within
    ``merge_bins`` of its delay in the same or an adjacent direction, and it is
    not ``sidelobe_rejection_db`` below the strongest candidate at that delay
    anywhere in the scan. ``noise_floor_db`` of None estimates the floor per record.
    """
    if not records:
        return []
    antennas = antennas or AntennaPair()
    config = config or ExtractionConfig()
    lattice = DirectionLattice(records)
    period = records[0].period_bins

    delays: list[float] = []
    amplitudes: list[complex] = []
    owners: list[int] = []
    for record_index, record in enumerate(records):
        floor = estimate_noise_floor(record.period) if noise_floor_db is None else noise_floor_db
        for estimate in extract_components(
            record.samples,
            record.period_bins,
            floor + config.margin_db,
            max_components=config.max_components,
            dynamic_range_db=config.dynamic_range_db,
            half_width=config.refine_half_width,
        ):
            delays.append(estimate.delay_bins)
            amplitudes.append(estimate.amplitude)
            owners.append(record_index)
    if not delays:
        return []

    delay = np.asarray(delays)
    power = np.abs(np.asarray(amplitudes)) ** 2
    indices = np.array([lattice.index(records[owner]) for owner in owners])
    az_index, el_index = indices[:, 0], indices[:, 1]
    rejection = 10 ** (config.sidelobe_rejection_db / 10)
    order = np.arange(len(delay))

    kept = []
    for i in range(len(delay)):
        gap = np.abs((delay - delay[i] + period / 2) % period - period / 2)
        nearby = gap <= config.merge_bins
        stronger = (power > power[i]) | ((power == power[i]) & (order < i))
        adjacent = lattice.adjacent(az_index, el_index, int(az_index[i]), int(el_index[i]))
        if np.any(nearby & stronger & adjacent):
            continue
        if power[nearby].max() >= power[i] * rejection:
            continue
        kept.append(i)

    position_id = records[0].position_id
    mpcs = [
        Mpc(
            position_id=records[owners[i]].position_id,
            band_index=records[owners[i]].band_index,
            delay_s=float(delay[i]) * records[owners[i]].delay_bin_s,
            gain_linear=complex(amplitudes[i]) / antennas.boresight_amplitude,
            aoa_az_deg=records[owners[i]].az_deg,
            aoa_el_deg=records[owners[i]].el_deg,
        )
        for i in kept
    ]
    mpcs.sort(key=lambda mpc: (-mpc.power_linear, mpc.delay_s))
    logger.debug(
        f"Position {position_id}: {len(mpcs)} MPCs from {len(delay)} candidates "
        f"over {len(records)} directions"
    )
    return mpcs
