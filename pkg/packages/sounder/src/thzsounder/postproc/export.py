from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from pathlib import Path

from thzsounder.postproc.clustering import Cluster
from thzsounder.postproc.drift import DriftSample
from thzsounder.postproc.extraction import Mpc

MPC_CSV_COLUMNS = (
    "position_id",
    "band",
    "delay_ns",
    "power_db",
    "aoa_az_deg",
    "aoa_el_deg",
    "cluster_id",
    "gain_re",
    "gain_im",
)
CLUSTER_CSV_COLUMNS = (
    "position_id",
    "band",
    "cluster_id",
    "member_count",
    "power_db",
    "delay_ns",
    "az_deg",
    "el_deg",
    "cds_ns",
    "casa_deg",
    "cesa_deg",
)


def _writer(path: Path, header: Sequence[str]):
    path.parent.mkdir(parents=True, exist_ok=True)
    file = path.open("w", encoding="utf-8", newline="")
    writer = csv.writer(file, lineterminator="\n")
    writer.writerow(header)
    return file, writer


def write_mpc_csv(path: Path, clusters_by_position: Iterable[Sequence[Cluster]]) -> Path:
    file, writer = _writer(path, MPC_CSV_COLUMNS)
    with file:
        for clusters in clusters_by_position:
            for cluster in clusters:
                for mpc in cluster.members:
                    writer.writerow(
                        (
                            mpc.position_id,
                            mpc.band_index,
                            repr(mpc.delay_s * 1e9),
                            repr(mpc.power_db),
                            repr(mpc.aoa_az_deg),
                            repr(mpc.aoa_el_deg),
                            cluster.cluster_id,
                            repr(mpc.gain_linear.real),
                            repr(mpc.gain_linear.imag),
                        )
                    )
    return path


def read_mpc_csv(path: Path) -> dict[int, dict[int, list[Mpc]]]:
    """MPCs grouped by position id, then by cluster id."""
    grouped: dict[int, dict[int, list[Mpc]]] = {}
    with path.open(encoding="utf-8", newline="") as file:
        for row in csv.DictReader(file):
            mpc = Mpc(
                position_id=int(row["position_id"]),
                band_index=int(row["band"]),
                delay_s=float(row["delay_ns"]) * 1e-9,
                gain_linear=complex(float(row["gain_re"]), float(row["gain_im"])),
                aoa_az_deg=float(row["aoa_az_deg"]),
                aoa_el_deg=float(row["aoa_el_deg"]),
            )
            position = grouped.setdefault(mpc.position_id, {})
            position.setdefault(int(row["cluster_id"]), []).append(mpc)
    return grouped


def read_clusters(path: Path) -> dict[int, list[Cluster]]:
    return {
        position_id: [
            Cluster.from_members(cluster_id, members)
            for cluster_id, members in sorted(clusters.items())
        ]
        for position_id, clusters in read_mpc_csv(path).items()
    }


def write_cluster_csv(path: Path, clusters_by_position: Iterable[Sequence[Cluster]]) -> Path:
    file, writer = _writer(path, CLUSTER_CSV_COLUMNS)
    with file:
        for clusters in clusters_by_position:
            for cluster in clusters:
                first = cluster.members[0]
                writer.writerow(
                    (
                        first.position_id,
                        first.band_index,
                        cluster.cluster_id,
                        len(cluster.members),
                        repr(cluster.power_db),
                        repr(cluster.delay_s * 1e9),
                        repr(cluster.az_deg),
                        repr(cluster.el_deg),
                        repr(cluster.cds_s * 1e9),
                        repr(cluster.casa_deg),
                        repr(cluster.cesa_deg),
                    )
                )
    return path


def write_drift_samples_csv(path: Path, samples: Sequence[DriftSample]) -> Path:
    file, writer = _writer(path, ("t_s", "delta_ns"))
    with file:
        for sample in samples:
            writer.writerow((repr(sample.t_s), repr(sample.delta_s * 1e9)))
    return path
