from __future__ import annotations

import csv
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, NamedTuple, TypedDict

from loguru import logger

from thzsounder.characterize.kfactor import k_factor
from thzsounder.characterize.lognormal import FitDomain, LogNormalFit, LogNormalFitJson, fit_lognormal
from thzsounder.characterize.pathloss import CiFitResult, CiFitResultJson, fit_ci, pl_best, pl_omni
from thzsounder.characterize.scattering import ScatteringMatch
from thzsounder.characterize.spreads import rms_spread
from thzsounder.constants import SCHEMA_VERSION
from thzsounder.errors import CharacterizationError
from thzsounder.serializer import Model, finite_or_none, none_to_inf
from thzsounder.waveform import CirRecord

if TYPE_CHECKING:
    from thzsounder.postproc.clustering import Cluster


class ClusterStats(NamedTuple):
    count: int
    cds_s: float
    casa_deg: float
    cesa_deg: float


def cluster_stats(clusters: Sequence[Cluster]) -> ClusterStats:
    if not clusters:
        return ClusterStats(0, 0.0, 0.0, 0.0)
    count = len(clusters)
    return ClusterStats(
        count=count,
        cds_s=math.fsum(cluster.cds_s for cluster in clusters) / count,
        casa_deg=math.fsum(cluster.casa_deg for cluster in clusters) / count,
        cesa_deg=math.fsum(cluster.cesa_deg for cluster in clusters) / count,
    )


class ChannelStatsJson(TypedDict):
    position_id: int
    band: str
    distance_m: float
    los: bool
    pl_best_db: float
    pl_omni_db: float
    k_factor_db: float | None
    ds_s: float
    asa_deg: float
    esa_deg: float
    n_clusters: int
    cds_s: float
    casa_deg: float
    cesa_deg: float


@dataclass(frozen=True, slots=True)
class ChannelStats(Model[ChannelStatsJson]):
    position_id: int
    band: str
    distance_m: float
    los: bool
    pl_best_db: float
    pl_omni_db: float
    k_factor_db: float
    ds_s: float
    asa_deg: float
    esa_deg: float
    n_clusters: int
    cds_s: float
    casa_deg: float
    cesa_deg: float

    def to_json(self) -> ChannelStatsJson:
        return {
            "position_id": self.position_id,
            "band": self.band,
            "distance_m": self.distance_m,
            "los": self.los,
            "pl_best_db": self.pl_best_db,
            "pl_omni_db": self.pl_omni_db,
            "k_factor_db": finite_or_none(self.k_factor_db),
            "ds_s": self.ds_s,
            "asa_deg": self.asa_deg,
            "esa_deg": self.esa_deg,
            "n_clusters": self.n_clusters,
            "cds_s": self.cds_s,
            "casa_deg": self.casa_deg,
            "cesa_deg": self.cesa_deg,
        }

    @classmethod
    def from_json(cls, json: ChannelStatsJson) -> ChannelStats:
        return cls(
            position_id=int(json["position_id"]),
            band=str(json["band"]),
            distance_m=float(json["distance_m"]),
            los=bool(json["los"]),
            pl_best_db=float(json["pl_best_db"]),
            pl_omni_db=float(json["pl_omni_db"]),
            k_factor_db=none_to_inf(json["k_factor_db"]),
            ds_s=float(json["ds_s"]),
            asa_deg=float(json["asa_deg"]),
            esa_deg=float(json["esa_deg"]),
            n_clusters=int(json["n_clusters"]),
            cds_s=float(json["cds_s"]),
            casa_deg=float(json["casa_deg"]),
            cesa_deg=float(json["cesa_deg"]),
        )


def characterize_position(
    position_id: int,
    band: str,
    distance_m: float,
    los: bool,
    records: Sequence[CirRecord],
    clusters: Sequence[Cluster],
    *,
    antenna_gain_db: float,
) -> ChannelStats:
    mpcs = [mpc for cluster in clusters for mpc in cluster.members]
    if not mpcs:
        raise CharacterizationError(f"Position {position_id} has no multipath components")
    best = pl_best(records, antenna_gain_db=antenna_gain_db, reduce="energy")
    omni = pl_omni(mpcs)
    if best < omni:
        logger.warning(
            f"Position {position_id} ({band} GHz): best-direction path loss {best:.2f} dB "
            f"is below the omnidirectional {omni:.2f} dB"
        )
    powers = [mpc.power_linear for mpc in mpcs]
    per_cluster = cluster_stats(clusters)
    return ChannelStats(
        position_id=position_id,
        band=band,
        distance_m=distance_m,
        los=los,
        pl_best_db=best,
        pl_omni_db=omni,
        k_factor_db=k_factor(clusters),
        ds_s=rms_spread([mpc.delay_s for mpc in mpcs], powers, "delay"),
        asa_deg=rms_spread([mpc.aoa_az_deg for mpc in mpcs], powers, "azimuth"),
        esa_deg=rms_spread([mpc.aoa_el_deg for mpc in mpcs], powers, "elevation"),
        n_clusters=per_cluster.count,
        cds_s=per_cluster.cds_s,
        casa_deg=per_cluster.casa_deg,
        cesa_deg=per_cluster.cesa_deg,
    )


class EnsembleSummaryJson(TypedDict):
    schema_version: int
    band: str
    frequency_hz: float
    position_count: int
    los_count: int
    ci_best: CiFitResultJson | None
    ci_omni: CiFitResultJson | None
    means: dict[str, float]
    nlos_means: dict[str, float]
    fits: dict[str, LogNormalFitJson]
    scattering_loss_db: dict[str, list[float]]
    scattering_mean_db: dict[str, float]


@dataclass(frozen=True, slots=True)
class EnsembleSummary(Model[EnsembleSummaryJson]):
    """Statistics of one band. Fits and means cover the LoS positions only;
    NLoS positions are summarized separately in ``nlos_means``.
    """

    band: str
    frequency_hz: float
    position_count: int
    ci_best: CiFitResult | None
    ci_omni: CiFitResult | None
    los_count: int = 0
    means: Mapping[str, float] = field(default_factory=dict)
    nlos_means: Mapping[str, float] = field(default_factory=dict)
    fits: Mapping[str, LogNormalFit] = field(default_factory=dict)
    scattering_loss_db: Mapping[str, list[float]] = field(default_factory=dict)

    @property
    def scattering_mean_db(self) -> dict[str, float]:
        return {material: _mean(losses) for material, losses in self.scattering_loss_db.items() if losses}

    def characteristics(self) -> dict[str, float]:
        values: dict[str, float] = {}
        if self.ci_best is not None:
            values["ple_best"] = self.ci_best.ple
            values["sigma_sf_best"] = self.ci_best.sigma_sf_db
        if self.ci_omni is not None:
            values["ple_omni"] = self.ci_omni.ple
            values["sigma_sf_omni"] = self.ci_omni.sigma_sf_db
        values.update(self.means)
        return values

    def to_json(self) -> EnsembleSummaryJson:
        return {
            "schema_version": SCHEMA_VERSION,
            "band": self.band,
            "frequency_hz": self.frequency_hz,
            "position_count": self.position_count,
            "los_count": self.los_count,
            "ci_best": None if self.ci_best is None else self.ci_best.to_json(),
            "ci_omni": None if self.ci_omni is None else self.ci_omni.to_json(),
            "means": dict(self.means),
            "nlos_means": dict(self.nlos_means),
            "fits": {name: fit.to_json() for name, fit in self.fits.items()},
            "scattering_loss_db": {
                material: list(losses) for material, losses in self.scattering_loss_db.items()
            },
            "scattering_mean_db": self.scattering_mean_db,
        }

    @classmethod
    def from_json(cls, json: EnsembleSummaryJson) -> EnsembleSummary:
        ci_best = json["ci_best"]
        ci_omni = json["ci_omni"]
        return cls(
            band=str(json["band"]),
            frequency_hz=float(json["frequency_hz"]),
            position_count=int(json["position_count"]),
            los_count=int(json["los_count"]),
            ci_best=None if ci_best is None else CiFitResult.from_json(ci_best),
            ci_omni=None if ci_omni is None else CiFitResult.from_json(ci_omni),
            means={name: float(value) for name, value in json["means"].items()},
            nlos_means={name: float(value) for name, value in json["nlos_means"].items()},
            fits={name: LogNormalFit.from_json(fit) for name, fit in json["fits"].items()},
            scattering_loss_db={
                material: [float(value) for value in losses]
                for material, losses in json["scattering_loss_db"].items()
            },
        )


def _ci_fit(points: list[tuple[float, float]], frequency_hz: float, name: str) -> CiFitResult | None:
    try:
        return fit_ci(points, frequency_hz)
    except CharacterizationError as e:
        logger.warning(f"Skipping {name} CI fit: {e}")
        return None


def _fit(values: list[float], domain: FitDomain, name: str) -> LogNormalFit | None:
    usable = [value for value in values if math.isfinite(value) and (domain == "db" or value > 0)]
    if len(usable) != len(values):
        logger.info(f"{name}: {len(values) - len(usable)} samples left out of the log-normal fit")
    if not usable:
        return None
    return fit_lognormal(usable, domain=domain)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _series(stats: Sequence[ChannelStats]) -> dict[str, tuple[list[float], FitDomain]]:
    return {
        "k_factor": ([item.k_factor_db for item in stats if math.isfinite(item.k_factor_db)], "db"),
        "ds": ([item.ds_s * 1e9 for item in stats], "linear"),
        "asa": ([item.asa_deg for item in stats], "linear"),
        "esa": ([item.esa_deg for item in stats], "linear"),
    }


def ensemble_means(stats: Sequence[ChannelStats]) -> dict[str, float]:
    """Per-characteristic means in report units (ns, deg, dB); infinite K-factors are left out."""
    if not stats:
        return {}
    means = {name: _mean(values) for name, (values, _) in _series(stats).items() if values}
    means["n_clusters"] = _mean([float(item.n_clusters) for item in stats])
    means["cds"] = _mean([item.cds_s * 1e9 for item in stats])
    means["casa"] = _mean([item.casa_deg for item in stats])
    means["cesa"] = _mean([item.cesa_deg for item in stats])
    return means


def summarize(
    stats: Sequence[ChannelStats],
    band: str,
    frequency_hz: float,
    matches: Sequence[ScatteringMatch] = (),
) -> EnsembleSummary:
    """Ensemble statistics of one band.

    Fits and means are taken over the LoS positions; the CI fits further
    need d >= 1 m. K-factor is fitted in dB over finite values, spreads as
    log-normal over positive values. Without any LoS position the ensemble
    falls back to every position.
    """
    if not stats:
        raise CharacterizationError(f"No per-position statistics for band {band}")
    los = [item for item in stats if item.los]
    nlos = [item for item in stats if not item.los]
    ensemble = los
    if not los:
        logger.warning(f"{band} GHz: no LoS positions, ensemble statistics use all {len(stats)} positions")
        ensemble = list(stats)
    reference_range = [item for item in los if item.distance_m >= 1.0]
    ci_best = _ci_fit([(item.distance_m, item.pl_best_db) for item in reference_range], frequency_hz, "best")
    ci_omni = _ci_fit([(item.distance_m, item.pl_omni_db) for item in reference_range], frequency_hz, "omni")

    fits = {}
    for name, (values, domain) in _series(ensemble).items():
        fit = _fit(values, domain, name)
        if fit is not None:
            fits[name] = fit

    losses: dict[str, list[float]] = {}
    for match in sorted(matches, key=lambda match: (match.material, match.position_id, match.cluster_id)):
        losses.setdefault(match.material, []).append(match.recovered_loss_db)
    return EnsembleSummary(
        band=band,
        frequency_hz=frequency_hz,
        position_count=len(stats),
        ci_best=ci_best,
        ci_omni=ci_omni,
        los_count=len(los),
        means=ensemble_means(ensemble),
        nlos_means=ensemble_means(nlos) if los else {},
        fits=fits,
        scattering_loss_db=losses,
    )


STATS_CSV_COLUMNS = (
    "position_id",
    "band",
    "distance_m",
    "los",
    "pl_best_db",
    "pl_omni_db",
    "k_factor_db",
    "ds_ns",
    "asa_deg",
    "esa_deg",
    "n_clusters",
    "cds_ns",
    "casa_deg",
    "cesa_deg",
)


def write_stats_csv(path: Path, stats: Sequence[ChannelStats]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(STATS_CSV_COLUMNS)
        for item in stats:
            writer.writerow(
                (
                    item.position_id,
                    item.band,
                    repr(item.distance_m),
                    int(item.los),
                    repr(item.pl_best_db),
                    repr(item.pl_omni_db),
                    repr(item.k_factor_db),
                    repr(item.ds_s * 1e9),
                    repr(item.asa_deg),
                    repr(item.esa_deg),
                    item.n_clusters,
                    repr(item.cds_s * 1e9),
                    repr(item.casa_deg),
                    repr(item.cesa_deg),
                )
            )
    return path


def read_stats_csv(path: Path) -> list[ChannelStats]:
    with path.open(encoding="utf-8", newline="") as file:
        return [
            ChannelStats(
                position_id=int(row["position_id"]),
                band=row["band"],
                distance_m=float(row["distance_m"]),
                los=bool(int(row["los"])),
                pl_best_db=float(row["pl_best_db"]),
                pl_omni_db=float(row["pl_omni_db"]),
                k_factor_db=float(row["k_factor_db"]),
                ds_s=float(row["ds_ns"]) * 1e-9,
                asa_deg=float(row["asa_deg"]),
                esa_deg=float(row["esa_deg"]),
                n_clusters=int(row["n_clusters"]),
                cds_s=float(row["cds_ns"]) * 1e-9,
                casa_deg=float(row["casa_deg"]),
                cesa_deg=float(row["cesa_deg"]),
            )
            for row in csv.DictReader(file)
        ]
