from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal, TypedDict

import numpy as np
from loguru import logger

from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.scenario import Placement, ScattererPanel, Scenario, direction_to_angles
from thzsounder.scenario.geometry import Array, distance
from thzsounder.serializer import Model
from thzsounder.synth.friis import path_gain

type PathKind = Literal["los", "once_scattered"]


class PropagationPathJson(TypedDict):
    kind: PathKind
    scatterer_id: str | None
    delay_s: float
    aoa_az_deg: float
    aoa_el_deg: float
    aod_az_deg: float
    aod_el_deg: float
    gain: list[float]


@dataclass(frozen=True, slots=True)
class PropagationPath(Model[PropagationPathJson]):
    kind: PathKind
    scatterer_id: str | None
    delay_s: float
    aoa_az_deg: float
    aoa_el_deg: float
    aod_az_deg: float
    aod_el_deg: float
    gain_linear: complex

    @property
    def length_m(self) -> float:
        return self.delay_s * SPEED_OF_LIGHT

    @property
    def power_db(self) -> float:
        return 20 * float(np.log10(abs(self.gain_linear)))

    def to_json(self) -> PropagationPathJson:
        return {
            "kind": self.kind,
            "scatterer_id": self.scatterer_id,
            "delay_s": self.delay_s,
            "aoa_az_deg": self.aoa_az_deg,
            "aoa_el_deg": self.aoa_el_deg,
            "aod_az_deg": self.aod_az_deg,
            "aod_el_deg": self.aod_el_deg,
            "gain": [self.gain_linear.real, self.gain_linear.imag],
        }

    @classmethod
    def from_json(cls, json: PropagationPathJson) -> PropagationPath:
        real, imag = json["gain"]
        return cls(
            kind=json["kind"],
            scatterer_id=json["scatterer_id"],
            delay_s=float(json["delay_s"]),
            aoa_az_deg=float(json["aoa_az_deg"]),
            aoa_el_deg=float(json["aoa_el_deg"]),
            aod_az_deg=float(json["aod_az_deg"]),
            aod_el_deg=float(json["aod_el_deg"]),
            gain_linear=complex(real, imag),
        )


def is_obstructed(
    start: Array,
    end: Array,
    panels: Sequence[ScattererPanel],
    exclude: ScattererPanel | None = None,
) -> bool:
    return any(
        panel is not exclude and panel.intersect_segment(start, end) is not None
        for panel in panels
    )


def has_line_of_sight(scenario: Scenario, rx_id: int) -> bool:
    return not is_obstructed(scenario.tx.point, scenario.rx(rx_id).point, scenario.objects)


def _make_path(
    kind: PathKind,
    panel: ScattererPanel | None,
    tx: Placement,
    rx: Placement,
    bounce: Array | None,
    length_m: float,
    frequency_hz: float,
) -> PropagationPath | None:
    departure_target = rx.point if bounce is None else bounce
    arrival_source = tx.point if bounce is None else bounce
    if length_m <= 0:
        return None
    aod_az, aod_el = direction_to_angles(departure_target - tx.point)
    aoa_az, aoa_el = direction_to_angles(arrival_source - rx.point)
    loss_db = 0.0 if panel is None else panel.scattering_loss_db
    phase = 0.0 if panel is None else panel.phase_rad
    return PropagationPath(
        kind=kind,
        scatterer_id=None if panel is None else panel.id,
        delay_s=length_m / SPEED_OF_LIGHT,
        aoa_az_deg=aoa_az,
        aoa_el_deg=aoa_el,
        aod_az_deg=aod_az,
        aod_el_deg=aod_el,
        gain_linear=path_gain(length_m, frequency_hz, loss_db, phase),
    )


def _specular_bounce(panel: ScattererPanel, tx: Array, rx: Array) -> Array | None:
    tx_side = panel.signed_distance(tx)
    rx_side = panel.signed_distance(rx)
    if tx_side * rx_side <= 0:
        return None
    image = panel.mirror(tx)
    # the image and rx lie on opposite sides, so the segment crosses the plane
    a = panel.signed_distance(image)
    fraction = a / (a - rx_side)
    bounce = image + fraction * (rx - image)
    return bounce if panel.contains(bounce) else None


def trace_paths(scenario: Scenario, rx_id: int, band: int) -> list[PropagationPath]:
    tx = scenario.tx
    rx = scenario.rx(rx_id)
    frequency = scenario.bands[band].carrier_hz
    max_length = scenario.bands[band].alias_free_delay_s * SPEED_OF_LIGHT
    paths: list[PropagationPath] = []

    if not is_obstructed(tx.point, rx.point, scenario.objects):
        los = _make_path("los", None, tx, rx, None, distance(tx.position, rx.position), frequency)
        if los is not None:
            paths.append(los)

    for panel in scenario.objects:
        bounce = _specular_bounce(panel, tx.point, rx.point)
        if bounce is None:
            continue
        if is_obstructed(tx.point, bounce, scenario.objects, exclude=panel):
            continue
        if is_obstructed(bounce, rx.point, scenario.objects, exclude=panel):
            continue
        length = distance(tx.position, bounce) + distance(bounce, rx.position)
        path = _make_path("once_scattered", panel, tx, rx, bounce, length, frequency)
        if path is not None:
            paths.append(path)

    kept = [path for path in paths if path.length_m < max_length]
    if len(kept) != len(paths):
        logger.debug(f"Rx {rx_id}: dropped {len(paths) - len(kept)} paths beyond {max_length:.1f} m")
    return kept


def trace_all(scenario: Scenario, band: int) -> dict[int, list[PropagationPath]]:
    return {rx.position_id: trace_paths(scenario, rx.position_id, band) for rx in scenario.rx_list}
