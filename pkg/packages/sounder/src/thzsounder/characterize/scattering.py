from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypedDict

from loguru import logger

from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.errors import CharacterizationError
from thzsounder.scenario import Material, Scenario, angles_to_unit, angular_offset_deg
from thzsounder.serializer import Model
from thzsounder.synth.friis import fspl
from thzsounder.synth.observation import pattern_gains_db
from thzsounder.synth.paths import PropagationPath

if TYPE_CHECKING:
    from thzsounder.postproc.clustering import Cluster


def scattering_loss(cluster: Cluster, frequency_hz: float) -> float:
    """Loss of a once-scattering cluster beyond free space over its path length."""
    strongest = cluster.strongest
    magnitude = abs(strongest.gain_linear)
    if magnitude == 0:
        raise CharacterizationError(f"Cluster {cluster.cluster_id} has zero gain")
    if not strongest.delay_s > 0:
        raise CharacterizationError(f"Cluster {cluster.cluster_id} has no positive delay")
    return -20 * math.log10(magnitude) - fspl(SPEED_OF_LIGHT * strongest.delay_s, frequency_hz)


class ScatteringMatchJson(TypedDict):
    position_id: int
    cluster_id: int
    panel_id: str
    material: Material
    delay_ns: float
    configured_loss_db: float
    recovered_loss_db: float


@dataclass(frozen=True, slots=True)
class ScatteringMatch(Model[ScatteringMatchJson]):
    position_id: int
    cluster_id: int
    panel_id: str
    material: Material
    delay_ns: float
    configured_loss_db: float
    recovered_loss_db: float

    @property
    def error_db(self) -> float:
        return self.recovered_loss_db - self.configured_loss_db

    def to_json(self) -> ScatteringMatchJson:
        return {
            "position_id": self.position_id,
            "cluster_id": self.cluster_id,
            "panel_id": self.panel_id,
            "material": self.material,
            "delay_ns": self.delay_ns,
            "configured_loss_db": self.configured_loss_db,
            "recovered_loss_db": self.recovered_loss_db,
        }

    @classmethod
    def from_json(cls, json: ScatteringMatchJson) -> ScatteringMatch:
        return cls(
            position_id=int(json["position_id"]),
            cluster_id=int(json["cluster_id"]),
            panel_id=str(json["panel_id"]),
            material=json["material"],
            delay_ns=float(json["delay_ns"]),
            configured_loss_db=float(json["configured_loss_db"]),
            recovered_loss_db=float(json["recovered_loss_db"]),
        )


def match_scatterers(
    clusters: Sequence[Cluster],
    paths: Sequence[PropagationPath],
    scenario: Scenario,
    rx_id: int,
    band: int,
    *,
    delay_tolerance_bins: float = 1.5,
    angle_tolerance_steps: float = 1.5,
) -> list[ScatteringMatch]:
    """Tie once-scattering clusters to traced paths and recover their losses.

    The cluster gain was normalized by the boresight gains; it is rescaled by
    the actual Tx and Rx pattern gains of the matched path geometry before the
    loss is computed.
    """
    config = scenario.bands[band]
    rx = scenario.rx(rx_id)
    delay_tolerance = delay_tolerance_bins * config.delay_bin_s
    angle_tolerance = angle_tolerance_steps * max(scenario.scan.az_step_deg, scenario.scan.el_step_deg)
    boresight_db = scenario.tx.antenna.boresight_gain_dbi + rx.antenna.boresight_gain_dbi
    available = [path for path in paths if path.kind == "once_scattered"]
    matches = []
    for cluster in sorted(clusters, key=lambda cluster: -cluster.power_linear):
        strongest = cluster.strongest
        arrival = angles_to_unit(strongest.aoa_az_deg, strongest.aoa_el_deg)
        candidates = [
            path
            for path in available
            if abs(path.delay_s - strongest.delay_s) <= delay_tolerance
            and angular_offset_deg(angles_to_unit(path.aoa_az_deg, path.aoa_el_deg), arrival)
            <= angle_tolerance
        ]
        if not candidates:
            continue
        path = min(candidates, key=lambda path: abs(path.delay_s - strongest.delay_s))
        available.remove(path)
        if path.scatterer_id is None:
            raise CharacterizationError(f"Once-scattered path at {path.delay_s * 1e9:.2f} ns has no scatterer")
        panel = scenario.panel(path.scatterer_id)
        tx_gain, rx_gain = pattern_gains_db(
            scenario, rx, path, (strongest.aoa_az_deg, strongest.aoa_el_deg)
        )
        corrected = cluster.with_gain_correction(boresight_db - tx_gain - rx_gain)
        recovered = scattering_loss(corrected, config.carrier_hz)
        logger.debug(
            f"Rx {rx_id}: cluster {cluster.cluster_id} matched {panel.id} "
            f"({recovered:.2f} dB recovered, {panel.scattering_loss_db:.2f} dB configured)"
        )
        matches.append(
            ScatteringMatch(
                position_id=rx_id,
                cluster_id=cluster.cluster_id,
                panel_id=panel.id,
                material=panel.material,
                delay_ns=strongest.delay_s * 1e9,
                configured_loss_db=panel.scattering_loss_db,
                recovered_loss_db=recovered,
            )
        )
    return sorted(matches, key=lambda match: match.cluster_id)
