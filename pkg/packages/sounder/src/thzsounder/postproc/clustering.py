from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.cluster import hierarchy
from scipy.spatial.distance import pdist

from thzsounder.characterize.spreads import circular_mean_deg, rms_spread, weighted_mean
from thzsounder.errors import CharacterizationError
from thzsounder.helper import apply_overrides
from thzsounder.postproc.extraction import Mpc
from thzsounder.scenario import angles_to_unit, direction_to_angles


@dataclass(frozen=True, slots=True)
class ClusteringConfig:
    mcd_threshold: float = 0.35
    zeta: float = 8.0

    @classmethod
    def from_overrides(cls, overrides: Mapping[str, float]) -> ClusteringConfig:
        return apply_overrides(cls(), overrides)


@dataclass(frozen=True, slots=True)
class Cluster:
    cluster_id: int
    members: tuple[Mpc, ...]
    power_linear: float
    delay_s: float
    az_deg: float
    el_deg: float
    cds_s: float
    casa_deg: float
    cesa_deg: float

    @classmethod
    def from_members(cls, cluster_id: int, members: Sequence[Mpc]) -> Cluster:
        if not members:
            raise CharacterizationError("A cluster needs at least one member")
        powers = [mpc.power_linear for mpc in members]
        if not sum(powers) > 0:
            powers = [1.0] * len(members)
        delays = [mpc.delay_s for mpc in members]
        azimuths = [mpc.aoa_az_deg for mpc in members]
        elevations = [mpc.aoa_el_deg for mpc in members]
        return cls(
            cluster_id=cluster_id,
            members=tuple(members),
            power_linear=math.fsum(mpc.power_linear for mpc in members),
            delay_s=weighted_mean(delays, powers),
            az_deg=circular_mean_deg(azimuths, powers),
            el_deg=weighted_mean(elevations, powers),
            cds_s=rms_spread(delays, powers, "delay"),
            casa_deg=rms_spread(azimuths, powers, "azimuth"),
            cesa_deg=rms_spread(elevations, powers, "elevation"),
        )

    @property
    def strongest(self) -> Mpc:
        return max(self.members, key=lambda mpc: (mpc.power_linear, -mpc.delay_s))

    @property
    def power_db(self) -> float:
        return 10 * math.log10(self.power_linear) if self.power_linear > 0 else -math.inf

    def with_gain_correction(self, gain_db: float) -> Cluster:
        """Same cluster with every member gain scaled by ``gain_db``."""
        scale = 10 ** (gain_db / 20)
        members = [
            Mpc(
                position_id=mpc.position_id,
                band_index=mpc.band_index,
                delay_s=mpc.delay_s,
                gain_linear=mpc.gain_linear * scale,
                aoa_az_deg=mpc.aoa_az_deg,
                aoa_el_deg=mpc.aoa_el_deg,
            )
            for mpc in self.members
        ]
        return Cluster.from_members(self.cluster_id, members)


def mcd_features(mpcs: Sequence[Mpc], delay_scale: float) -> np.ndarray:
    """Rows of (arrival unit vector, scaled delay); Euclidean distance between rows is the MCD."""
    return np.array(
        [
            [*angles_to_unit(mpc.aoa_az_deg, mpc.aoa_el_deg), delay_scale * mpc.delay_s]
            for mpc in mpcs
        ]
    )


def default_delay_scale(mpcs: Sequence[Mpc], zeta: float = 8.0) -> float:
    delays = [mpc.delay_s for mpc in mpcs]
    span = max(delays) - min(delays) if delays else 0.0
    return zeta / span if span > 0 else 0.0


def cluster_mpcs(
    mpcs: Sequence[Mpc],
    mcd_threshold: float = 0.35,
    delay_scale: float | None = None,
    *,
    zeta: float = 8.0,
) -> list[Cluster]:
    """Single-linkage clusters under the multipath component distance.

    Members and cluster ids follow power-descending, delay-ascending order,
    so the strongest cluster has id 0.
    """
    if not mpcs:
        return []
    ordered = sorted(mpcs, key=lambda mpc: (-mpc.power_linear, mpc.delay_s, mpc.aoa_az_deg, mpc.aoa_el_deg))
    if len(ordered) == 1:
        return [Cluster.from_members(0, ordered)]
    scale = default_delay_scale(ordered, zeta) if delay_scale is None else delay_scale
    linkage = hierarchy.linkage(pdist(mcd_features(ordered, scale)), method="single")
    labels = hierarchy.fcluster(linkage, t=mcd_threshold, criterion="distance")
    relabel: dict[int, int] = {}
    groups: dict[int, list[Mpc]] = {}
    for label, mpc in zip(labels, ordered, strict=True):
        cluster_id = relabel.setdefault(int(label), len(relabel))
        groups.setdefault(cluster_id, []).append(mpc)
    clusters = [Cluster.from_members(cluster_id, members) for cluster_id, members in groups.items()]
    return sorted(clusters, key=lambda cluster: (-cluster.power_linear, cluster.delay_s))


def cluster_direction(cluster: Cluster) -> tuple[float, float]:
    return direction_to_angles(angles_to_unit(cluster.az_deg, cluster.el_deg))
