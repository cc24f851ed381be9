from __future__ import annotations

import csv
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import matplotlib
import numpy as np
from loguru import logger
from matplotlib.figure import Figure
from thzsounder.characterize import ScatteringMatch
from thzsounder.postproc import Cluster, DriftModel, DriftSample, drift_curve
from thzsounder.waveform import CirRecord

from thzlab.errors import PlotInputError

type PlotKind = Literal["drift_curve", "scattering_bars", "power_delay_profile", "delay_angle_map"]

PLOT_KINDS: tuple[PlotKind, ...] = (
    "drift_curve",
    "scattering_bars",
    "power_delay_profile",
    "delay_angle_map",
)
DRIFT_CURVE_POINTS = 101
SVG_HASH_SALT = "thzlab"


@dataclass(frozen=True, slots=True)
class DriftCurveData:
    samples: Sequence[DriftSample]
    model: DriftModel | None = None


@dataclass(frozen=True, slots=True)
class ScatteringBarsData:
    matches: Sequence[ScatteringMatch]


@dataclass(frozen=True, slots=True)
class PowerDelayProfileData:
    records: Sequence[CirRecord]


@dataclass(frozen=True, slots=True)
class DelayAngleMapData:
    clusters: Mapping[int, Sequence[Cluster]]


type PlotData = DriftCurveData | ScatteringBarsData | PowerDelayProfileData | DelayAngleMapData


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _power_db(samples: np.ndarray) -> np.ndarray:
    return 10 * np.log10(np.maximum(np.abs(samples) ** 2, np.finfo(np.float64).tiny))


def _save_svg(figure: Figure, path: Path) -> Path:
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "path"}):
        figure.savefig(path, format="svg", metadata={"Date": None})
    return path


def _drift_curve(data: DriftCurveData, out_dir: Path, svg: bool) -> list[Path]:
    if not data.samples:
        raise PlotInputError("drift_curve needs at least one drift sample")
    rows: list[tuple[object, ...]] = [
        ("sample", repr(sample.t_s), repr(sample.delta_s * 1e9)) for sample in data.samples
    ]
    times = np.linspace(0.0, max(sample.t_s for sample in data.samples), DRIFT_CURVE_POINTS)
    if data.model is not None:
        curve = drift_curve(data.model, times)
        rows.extend(("model", repr(float(t)), repr(float(d) * 1e9)) for t, d in zip(times, curve, strict=True))
    paths = [_write_rows(out_dir / "drift_curve.csv", ("series", "t_s", "delta_ns"), rows)]
    if svg:
        figure = Figure(figsize=(6, 4))
        ax = figure.subplots()
        ax.plot(
            [sample.t_s / 3600 for sample in data.samples],
            [sample.delta_s * 1e9 for sample in data.samples],
            "o",
            label="measured",
        )
        if data.model is not None:
            ax.plot(times / 3600, curve * 1e9, "-", label="interpolated")
        ax.set_xlabel("Time (h)")
        ax.set_ylabel("Delay drift (ns)")
        ax.legend()
        paths.append(_save_svg(figure, out_dir / "drift_curve.svg"))
    return paths


def _scattering_bars(data: ScatteringBarsData, out_dir: Path, svg: bool) -> list[Path]:
    if not data.matches:
        raise PlotInputError("scattering_bars needs at least one matched cluster")
    matches = sorted(data.matches, key=lambda match: (match.material, match.position_id, match.cluster_id))
    rows = [
        (
            match.material,
            match.panel_id,
            match.position_id,
            match.cluster_id,
            repr(match.configured_loss_db),
            repr(match.recovered_loss_db),
        )
        for match in matches
    ]
    header = ("material", "panel_id", "position_id", "cluster_id", "configured_loss_db", "recovered_loss_db")
    paths = [_write_rows(out_dir / "scattering_bars.csv", header, rows)]
    if svg:
        figure = Figure(figsize=(8, 4))
        ax = figure.subplots()
        materials = sorted({match.material for match in matches})
        for material in materials:
            indices = [index for index, match in enumerate(matches) if match.material == material]
            ax.bar(indices, [matches[index].recovered_loss_db for index in indices], label=material)
        ax.set_xticks(range(len(matches)), [f"{match.panel_id}@{match.position_id}" for match in matches], rotation=90)
        ax.set_ylabel("Scattering loss (dB)")
        ax.legend()
        figure.tight_layout()
        paths.append(_save_svg(figure, out_dir / "scattering_bars.svg"))
    return paths


def _strongest_records(records: Sequence[CirRecord]) -> list[CirRecord]:
    strongest: dict[int, CirRecord] = {}
    for record in records:
        current = strongest.get(record.position_id)
        if current is None or float(np.sum(record.power())) > float(np.sum(current.power())):
            strongest[record.position_id] = record
    return [strongest[position_id] for position_id in sorted(strongest)]


def _power_delay_profile(data: PowerDelayProfileData, out_dir: Path, svg: bool) -> list[Path]:
    if not data.records:
        raise PlotInputError("power_delay_profile needs at least one CIR record")
    selected = _strongest_records(data.records)
    rows = []
    for record in selected:
        delays = record.delay_axis() * 1e9
        for delay, power in zip(delays, _power_db(record.samples), strict=True):
            rows.append(
                (record.position_id, repr(record.az_deg), repr(record.el_deg), repr(float(delay)), repr(float(power)))
            )
    header = ("position_id", "az_deg", "el_deg", "delay_ns", "power_db")
    paths = [_write_rows(out_dir / "power_delay_profile.csv", header, rows)]
    if svg:
        figure = Figure(figsize=(8, 4))
        ax = figure.subplots()
        for record in selected:
            ax.plot(
                record.delay_axis() * 1e9,
                _power_db(record.samples),
                linewidth=0.6,
                label=f"Rx{record.position_id}",
            )
        ax.set_xlabel("Delay (ns)")
        ax.set_ylabel("Power (dB)")
        ax.legend(fontsize="small")
        paths.append(_save_svg(figure, out_dir / "power_delay_profile.svg"))
    return paths


def _delay_angle_map(data: DelayAngleMapData, out_dir: Path, svg: bool) -> list[Path]:
    rows = [
        (
            position_id,
            cluster.cluster_id,
            repr(mpc.delay_s * 1e9),
            repr(mpc.aoa_az_deg),
            repr(mpc.aoa_el_deg),
            repr(mpc.power_db),
        )
        for position_id in sorted(data.clusters)
        for cluster in data.clusters[position_id]
        for mpc in cluster.members
    ]
    if not rows:
        raise PlotInputError("delay_angle_map needs at least one clustered component")
    header = ("position_id", "cluster_id", "delay_ns", "aoa_az_deg", "aoa_el_deg", "power_db")
    paths = [_write_rows(out_dir / "delay_angle_map.csv", header, rows)]
    if svg:
        figure = Figure(figsize=(6, 4))
        ax = figure.subplots()
        points = ax.scatter(
            [float(row[3]) for row in rows],
            [float(row[2]) for row in rows],
            c=[float(row[5]) for row in rows],
            s=8,
        )
        figure.colorbar(points, ax=ax, label="Power (dB)")
        ax.set_xlabel("AoA azimuth (deg)")
        ax.set_ylabel("Delay (ns)")
        paths.append(_save_svg(figure, out_dir / "delay_angle_map.svg"))
    return paths


def emit_plot_data(kind: PlotKind, inputs: PlotData, out_dir: Path, *, svg: bool = False) -> list[Path]:
    """Write the CSV series for one figure, plus an SVG rendering when asked."""
    out_dir.mkdir(parents=True, exist_ok=True)
    match kind, inputs:
        case "drift_curve", DriftCurveData():
            paths = _drift_curve(inputs, out_dir, svg)
        case "scattering_bars", ScatteringBarsData():
            paths = _scattering_bars(inputs, out_dir, svg)
        case "power_delay_profile", PowerDelayProfileData():
            paths = _power_delay_profile(inputs, out_dir, svg)
        case "delay_angle_map", DelayAngleMapData():
            paths = _delay_angle_map(inputs, out_dir, svg)
        case _:
            raise PlotInputError(f"{type(inputs).__name__} cannot be drawn as {kind}")
    logger.debug(f"Wrote {kind} to {out_dir}")
    return paths
