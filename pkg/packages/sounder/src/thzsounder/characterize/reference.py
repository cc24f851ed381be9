from __future__ import annotations

import csv
from collections.abc import Sequence
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Final, NotRequired, TypedDict

from thzsounder.characterize.stats import EnsembleSummary
from thzsounder.constants import SCHEMA_VERSION
from thzsounder.errors import CharacterizationError, UnitMismatchError
from thzsounder.serializer import Model, SerializeError, Serializer

CHARACTERISTIC_UNITS: Final[dict[str, str]] = {
    "ple_best": "1",
    "sigma_sf_best": "dB",
    "ple_omni": "1",
    "sigma_sf_omni": "dB",
    "k_factor": "dB",
    "ds": "ns",
    "asa": "deg",
    "esa": "deg",
    "n_clusters": "1",
    "cds": "ns",
    "casa": "deg",
    "cesa": "deg",
}
MATCH_TOLERANCE = 1e-9


class ReferenceEntryJson(TypedDict):
    band: str | None
    characteristic: str
    value: float
    unit: str


@dataclass(frozen=True, slots=True)
class ReferenceEntry(Model[ReferenceEntryJson]):
    band: str | None
    characteristic: str
    value: float
    unit: str

    def to_json(self) -> ReferenceEntryJson:
        return {
            "band": self.band,
            "characteristic": self.characteristic,
            "value": self.value,
            "unit": self.unit,
        }

    @classmethod
    def from_json(cls, json: ReferenceEntryJson) -> ReferenceEntry:
        band = json.get("band")
        return cls(
            band=None if band is None else str(band),
            characteristic=str(json["characteristic"]),
            value=float(json["value"]),
            unit=str(json["unit"]),
        )


class ReferenceTableJson(TypedDict):
    schema_version: NotRequired[int]
    name: str
    entries: list[ReferenceEntryJson]


@dataclass(frozen=True, slots=True)
class ReferenceTable(Model[ReferenceTableJson]):
    name: str
    entries: tuple[ReferenceEntry, ...] = ()

    def lookup(self, band: str, characteristic: str) -> ReferenceEntry | None:
        """Band-specific entries take precedence over band-independent ones."""
        fallback = None
        for entry in self.entries:
            if entry.characteristic != characteristic:
                continue
            if entry.band == band:
                return entry
            if entry.band is None:
                fallback = entry
        return fallback

    def to_json(self) -> ReferenceTableJson:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "entries": [entry.to_json() for entry in self.entries],
        }

    @classmethod
    def from_json(cls, json: ReferenceTableJson) -> ReferenceTable:
        return cls(
            name=str(json.get("name", "reference")),
            entries=tuple(ReferenceEntry.from_json(entry) for entry in json.get("entries", [])),
        )


REFERENCE_SERIALIZER = Serializer.model(ReferenceTable).to_json()


def load_reference_table(path: Path) -> ReferenceTable:
    try:
        return REFERENCE_SERIALIZER.read(path)
    except OSError as e:
        raise CharacterizationError(f"Cannot read reference table {path}: {e}") from e
    except (SerializeError, KeyError, TypeError, ValueError) as e:
        raise CharacterizationError(f"Malformed reference table {path}: {e}") from e


def bundled_reference_path(name: str = "laboratory_reference") -> Path:
    return Path(str(resources.files("thzsounder") / "data" / f"{name}.json"))


@dataclass(frozen=True, slots=True)
class ComparisonRow:
    band: str
    characteristic: str
    unit: str
    measured: float
    reference: float
    delta: float
    flag: str


def comparison_flag(characteristic: str, delta: float) -> str:
    if abs(delta) <= MATCH_TOLERANCE:
        return "matches reference"
    if characteristic == "k_factor" and delta > 0:
        return "more LoS-dominant than reference"
    if characteristic == "n_clusters" and delta < 0:
        return "sparser than reference"
    return "reference overestimates" if delta < 0 else "reference underestimates"


def compare_reference(
    summaries: Sequence[EnsembleSummary], reference: ReferenceTable
) -> list[ComparisonRow]:
    rows = []
    for summary in summaries:
        measured = summary.characteristics()
        for characteristic, unit in CHARACTERISTIC_UNITS.items():
            if characteristic not in measured:
                continue
            entry = reference.lookup(summary.band, characteristic)
            if entry is None:
                continue
            if entry.unit != unit:
                raise UnitMismatchError(characteristic, unit, entry.unit)
            delta = measured[characteristic] - entry.value
            rows.append(
                ComparisonRow(
                    band=summary.band,
                    characteristic=characteristic,
                    unit=unit,
                    measured=measured[characteristic],
                    reference=entry.value,
                    delta=delta,
                    flag=comparison_flag(characteristic, delta),
                )
            )
    return rows


def format_value(value: float) -> str:
    return f"{round(value, 2):g}"


COMPARISON_CSV_COLUMNS = ("band", "characteristic", "unit", "measured", "reference", "delta", "flag")


def write_comparison_csv(path: Path, rows: Sequence[ComparisonRow]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(COMPARISON_CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                (
                    row.band,
                    row.characteristic,
                    row.unit,
                    format_value(row.measured),
                    format_value(row.reference),
                    format_value(row.delta),
                    row.flag,
                )
            )
    return path


def format_comparison_text(rows: Sequence[ComparisonRow]) -> str:
    if not rows:
        return "No reference values to compare.\n"
    header = ("band", "characteristic", "measured", "reference", "delta", "")
    table = [header] + [
        (
            f"{row.band} GHz",
            f"{row.characteristic} [{row.unit}]",
            format_value(row.measured),
            format_value(row.reference),
            format_value(row.delta),
            row.flag,
        )
        for row in rows
    ]
    widths = [max(len(line[column]) for line in table) for column in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths, strict=True)).rstrip() for line in table]
    return "\n".join(lines) + "\n"
