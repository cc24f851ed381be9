import math

import numpy as np
import pytest
from thzsounder.bytebuffer import ByteReader, ByteWriter
from thzsounder.postproc import Cluster, Mpc, read_clusters, read_mpc_csv, write_cluster_csv, write_mpc_csv
from thzsounder.scenario import BAND_140, BandConfig
from thzsounder.serializer import SerializeError, Serializer, finite_or_none, none_to_inf
from thzsounder.synth import StorageError, read_cir_container, read_cir_csv, write_cir_container, write_cir_csv
from thzsounder.synth.storage import decode_cir_container, encode_cir_container
from thzsounder.waveform import CirRecord

SMALL_BAND = BandConfig(carrier_hz=140e9, bandwidth_hz=1.536e9, sample_count=16, zc_length=15)


def _records(band: BandConfig = SMALL_BAND) -> list[CirRecord]:
    rng = np.random.default_rng(3)
    return [
        CirRecord(
            position_id=position_id,
            band_index=0,
            az_deg=az,
            el_deg=-5.0,
            timestamp_s=12.5 * index,
            samples=rng.standard_normal(band.sample_count) + 1j * rng.standard_normal(band.sample_count),
            delay_bin_s=band.delay_bin_s,
            period_bins=band.period_bins,
        )
        for index, (position_id, az) in enumerate([(1, 0.0), (1, 10.0), (2, 0.0)])
    ]


def test_container_round_trip(tmp_path):
    records = _records()
    path = write_cir_container(tmp_path / "cir" / "140.thzc", SMALL_BAND, records)
    band, restored = read_cir_container(path)
    assert restored == records
    assert band.sample_count == 16
    assert band.period_bins == 15
    assert band.delay_bin_s == pytest.approx(SMALL_BAND.delay_bin_s)


def test_container_is_deterministic():
    assert encode_cir_container(SMALL_BAND, _records()) == encode_cir_container(SMALL_BAND, _records())


def test_container_rejects_corruption():
    data = encode_cir_container(SMALL_BAND, _records())
    with pytest.raises(StorageError, match="Not a CIR container"):
        decode_cir_container(b"XXXX" + data[4:])
    with pytest.raises(StorageError, match="Corrupt"):
        decode_cir_container(data[:-7])
    with pytest.raises(StorageError, match="Corrupt"):
        decode_cir_container(data + b"\x00")
    with pytest.raises(StorageError, match="version"):
        decode_cir_container(data[:4] + b"\x00\x09" + data[6:])


def test_container_rejects_mismatched_record():
    with pytest.raises(StorageError):
        encode_cir_container(BAND_140, _records())


def test_cir_csv_round_trip(tmp_path):
    records = _records()
    path = write_cir_csv(tmp_path / "cir.csv", records)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "position_id,band,az_deg,el_deg,timestamp_s,bin,re,im"
    assert read_cir_csv(path, SMALL_BAND) == records


def test_byte_reader_consumption():
    data = ByteWriter().write_int(7).write_double(math.pi).finish()
    with ByteReader(data) as reader:
        assert reader.read_int() == 7
        assert reader.read_double() == math.pi
    with pytest.raises(ValueError, match="not fully consumed"):
        with ByteReader(data) as reader:
            reader.read_int()
    with pytest.raises(ValueError, match="u8"):
        ByteWriter().write_byte(256)


def test_json_serializer_is_deterministic(tmp_path):
    serializer = Serializer.json()
    assert serializer.serialize({"b": 1, "a": [1.5]}) == b'{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'
    with pytest.raises(SerializeError):
        serializer.serialize({"value": math.inf})
    path = serializer.write(tmp_path / "nested" / "value.json", {"x": 1})
    assert serializer.read(path) == {"x": 1}


def test_mpc_csv_round_trip(tmp_path):
    def mpc(delay_ns, gain, az):
        return Mpc(1, 0, delay_ns * 1e-9, gain, az, 0.0)

    clusters = [
        Cluster.from_members(0, [mpc(20.0, 1e-4 + 2e-5j, 180.0), mpc(21.0, 3e-5, 190.0)]),
        Cluster.from_members(1, [mpc(60.0, -2e-5j, 90.0)]),
    ]
    path = write_mpc_csv(tmp_path / "mpcs.csv", [clusters])
    grouped = read_mpc_csv(path)
    assert sorted(grouped[1]) == [0, 1]
    assert [item.gain_linear for item in grouped[1][0]] == [1e-4 + 2e-5j, 3e-5]
    (restored,) = read_clusters(path).values()
    assert [cluster.cluster_id for cluster in restored] == [0, 1]
    assert restored[0].power_linear == pytest.approx(clusters[0].power_linear)
    assert restored[0].delay_s == pytest.approx(clusters[0].delay_s)

    cluster_path = write_cluster_csv(tmp_path / "clusters.csv", [clusters])
    lines = cluster_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("1,0,0,2,")


def test_non_finite_values_are_stored_as_null():
    assert finite_or_none(12.5) == 12.5
    assert finite_or_none(math.inf) is None
    assert finite_or_none(-math.inf) is None
    assert finite_or_none(math.nan) is None
    assert none_to_inf(None) == math.inf
    assert none_to_inf(3) == 3.0
