from __future__ import annotations

import csv
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Final, Literal

from thzsounder.characterize.reference import CHARACTERISTIC_UNITS, MATCH_TOLERANCE, format_value
from thzsounder.characterize.stats import EnsembleSummary
from thzsounder.errors import CharacterizationError

type Trend = Literal["increase", "decrease", "similar"]

# Expected change from the lower to the higher carrier.
EXPECTED_TRENDS: Final[dict[str, Trend]] = {
    "ple_best": "similar",
    "sigma_sf_best": "similar",
    "ple_omni": "similar",
    "sigma_sf_omni": "similar",
    "k_factor": "increase",
    "ds": "decrease",
    "asa": "decrease",
    "esa": "decrease",
    "n_clusters": "decrease",
    "cds": "decrease",
    "casa": "decrease",
    "cesa": "decrease",
}
SIMILAR_TOLERANCE: Final[dict[str, float]] = {
    "ple_best": 0.2,
    "ple_omni": 0.2,
    "sigma_sf_best": 1.0,
    "sigma_sf_omni": 1.0,
}
SCATTERING_PREFIX = "scattering_loss_"


@dataclass(frozen=True, slots=True)
class BandTrendRow:
    characteristic: str
    unit: str
    low_band: str
    high_band: str
    low: float
    high: float
    delta: float
    expected: Trend
    observed: Trend

    @property
    def agrees(self) -> bool:
        return self.expected == self.observed


def observed_trend(characteristic: str, delta: float) -> Trend:
    tolerance = SIMILAR_TOLERANCE.get(characteristic, MATCH_TOLERANCE)
    if abs(delta) <= tolerance:
        return "similar"
    return "increase" if delta > 0 else "decrease"


def _values(summary: EnsembleSummary) -> dict[str, tuple[float, str]]:
    values = {
        name: (value, CHARACTERISTIC_UNITS[name])
        for name, value in summary.characteristics().items()
        if name in CHARACTERISTIC_UNITS
    }
    for material, loss in summary.scattering_mean_db.items():
        values[f"{SCATTERING_PREFIX}{material}"] = (loss, "dB")
    return values


def compare_bands(summaries: Sequence[EnsembleSummary]) -> list[BandTrendRow]:
    """Rows for every characteristic both bands report, lower carrier first.

    Mean scattering loss per material is expected to shrink with frequency.
    """
    if len(summaries) != 2:
        raise CharacterizationError(f"Band comparison needs two bands, got {len(summaries)}")
    low, high = sorted(summaries, key=lambda summary: summary.frequency_hz)
    if low.frequency_hz == high.frequency_hz:
        raise CharacterizationError(f"Both summaries are at {low.frequency_hz / 1e9:g} GHz")
    low_values = _values(low)
    high_values = _values(high)
    order = [*CHARACTERISTIC_UNITS, *sorted(name for name in low_values if name.startswith(SCATTERING_PREFIX))]
    rows = []
    for name in order:
        if name not in low_values or name not in high_values:
            continue
        (low_value, unit), (high_value, _) = low_values[name], high_values[name]
        delta = high_value - low_value
        rows.append(
            BandTrendRow(
                characteristic=name,
                unit=unit,
                low_band=low.band,
                high_band=high.band,
                low=low_value,
                high=high_value,
                delta=delta,
                expected=EXPECTED_TRENDS.get(name, "decrease"),
                observed=observed_trend(name, delta),
            )
        )
    return rows


BAND_COMPARISON_CSV_COLUMNS = (
    "characteristic",
    "unit",
    "low_band",
    "high_band",
    "low",
    "high",
    "delta",
    "expected",
    "observed",
    "agrees",
)


def write_band_comparison_csv(path: Path, rows: Sequence[BandTrendRow]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(BAND_COMPARISON_CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                (
                    row.characteristic,
                    row.unit,
                    row.low_band,
                    row.high_band,
                    format_value(row.low),
                    format_value(row.high),
                    format_value(row.delta),
                    row.expected,
                    row.observed,
                    int(row.agrees),
                )
            )
    return path


def format_band_comparison_text(rows: Sequence[BandTrendRow]) -> str:
    if not rows:
        return "No characteristics shared by both bands.\n"
    low_band, high_band = rows[0].low_band, rows[0].high_band
    header = ("characteristic", f"{low_band} GHz", f"{high_band} GHz", "delta", "trend", "")
    table = [header] + [
        (
            f"{row.characteristic} [{row.unit}]",
            format_value(row.low),
            format_value(row.high),
            format_value(row.delta),
            f"{row.observed} (expected {row.expected})",
            "ok" if row.agrees else "differs",
        )
        for row in rows
    ]
    widths = [max(len(line[column]) for line in table) for column in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths, strict=True)).rstrip() for line in table]
    agreeing = sum(row.agrees for row in rows)
    lines.append(f"{agreeing}/{len(rows)} characteristics follow the expected trend")
    return "\n".join(lines) + "\n"
