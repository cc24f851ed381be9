from __future__ import annotations

import csv
from collections.abc import Sequence
from itertools import groupby
from pathlib import Path

import numpy as np

from thzsounder.bytebuffer import ByteReader, ByteWriter
from thzsounder.constants import CONTAINER_MAGIC, CONTAINER_VERSION
from thzsounder.errors import SounderError
from thzsounder.scenario import BandConfig
from thzsounder.waveform import CirRecord

CIR_CSV_COLUMNS = ("position_id", "band", "az_deg", "el_deg", "timestamp_s", "bin", "re", "im")


class StorageError(SounderError):
    pass


def write_cir_csv(path: Path, records: Sequence[CirRecord]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(CIR_CSV_COLUMNS)
        for record in records:
            for index, value in enumerate(record.samples):
                writer.writerow(
                    (
                        record.position_id,
                        record.band_index,
                        repr(record.az_deg),
                        repr(record.el_deg),
                        repr(record.timestamp_s),
                        index,
                        repr(float(value.real)),
                        repr(float(value.imag)),
                    )
                )
    return path


def read_cir_csv(path: Path, band: BandConfig) -> list[CirRecord]:
    with path.open(encoding="utf-8", newline="") as file:
        rows = list(csv.DictReader(file))
    records = []

    def key(row: dict[str, str]) -> tuple[str, ...]:
        return (row["position_id"], row["band"], row["az_deg"], row["el_deg"], row["timestamp_s"])

    for (position_id, band_index, az, el, timestamp), group in groupby(rows, key=key):
        samples = np.zeros(band.sample_count, dtype=np.complex128)
        for row in group:
            samples[int(row["bin"])] = complex(float(row["re"]), float(row["im"]))
        records.append(
            CirRecord(
                position_id=int(position_id),
                band_index=int(band_index),
                az_deg=float(az),
                el_deg=float(el),
                timestamp_s=float(timestamp),
                samples=samples,
                delay_bin_s=band.delay_bin_s,
                period_bins=band.period_bins,
            )
        )
    return records


def encode_cir_container(band: BandConfig, records: Sequence[CirRecord]) -> bytes:
    writer = ByteWriter()
    writer.write(CONTAINER_MAGIC)
    writer.write_short(CONTAINER_VERSION)
    writer.write_double(band.carrier_hz)
    writer.write_double(band.bandwidth_hz)
    writer.write_int(band.sample_count)
    writer.write_int(band.period_bins)
    writer.write_int(len(records))
    for record in records:
        if record.sample_count != band.sample_count:
            raise StorageError(
                f"Record of position {record.position_id} has {record.sample_count} samples, "
                f"expected {band.sample_count}"
            )
        writer.write_int(record.position_id)
        writer.write_byte(record.band_index)
        writer.write_double(record.az_deg)
        writer.write_double(record.el_deg)
        writer.write_double(record.timestamp_s)
        writer.write_complex_array(record.samples)
    return writer.finish()


def decode_cir_container(data: bytes) -> tuple[BandConfig, list[CirRecord]]:
    try:
        with ByteReader(data) as reader:
            if reader.read(len(CONTAINER_MAGIC)) != CONTAINER_MAGIC:
                raise StorageError("Not a CIR container")
            version = reader.read_short()
            if version != CONTAINER_VERSION:
                raise StorageError(f"Unsupported container version {version}")
            carrier = reader.read_double()
            bandwidth = reader.read_double()
            sample_count = reader.read_int()
            period = reader.read_int()
            band = BandConfig(
                carrier_hz=carrier,
                bandwidth_hz=bandwidth,
                sample_count=sample_count,
                zc_length=period,
            )
            count = reader.read_int()
            records = [
                CirRecord(
                    position_id=reader.read_int(),
                    band_index=reader.read_byte(),
                    az_deg=reader.read_double(),
                    el_deg=reader.read_double(),
                    timestamp_s=reader.read_double(),
                    samples=reader.read_complex_array(),
                    delay_bin_s=band.delay_bin_s,
                    period_bins=period,
                )
                for _ in range(count)
            ]
    except ValueError as e:
        raise StorageError(f"Corrupt CIR container: {e}") from e
    return band, records


def write_cir_container(path: Path, band: BandConfig, records: Sequence[CirRecord]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_cir_container(band, records))
    return path


def read_cir_container(path: Path) -> tuple[BandConfig, list[CirRecord]]:
    return decode_cir_container(path.read_bytes())
