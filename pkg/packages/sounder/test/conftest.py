from collections.abc import Callable, Sequence
from typing import Any

import pytest
from thzsounder.scenario import Scenario, parse_scenario

type Point = tuple[float, float, float]

BAND_140_JSON = {"carrier_hz": 140e9, "bandwidth_hz": 1.536e9, "sample_count": 2048, "zc_length": 2047}
BAND_220_JSON = {"carrier_hz": 220e9, "bandwidth_hz": 1.536e9, "sample_count": 2048, "zc_length": 2047}
RING_SCAN_JSON = {
    "az_start_deg": 0.0,
    "az_stop_deg": 350.0,
    "az_step_deg": 10.0,
    "el_start_deg": 0.0,
    "el_stop_deg": 0.0,
    "el_step_deg": 10.0,
}


def build_scenario(
    rx: Sequence[Point],
    *,
    tx: Point = (1.0, 5.0, 1.6),
    objects: Sequence[dict[str, Any]] = (),
    room: Point = (20.0, 10.0, 4.0),
    bands: Sequence[dict[str, Any]] = (BAND_140_JSON,),
    scan: dict[str, float] | None = None,
    drift_ns_per_hour: float = 0.0,
    noise_db: float | None = -160.0,
    averaging: int = 1000,
    system: bool = False,
    seed: int = 7,
    processing: dict[str, float] | None = None,
) -> Scenario:
    length, width, height = room
    return parse_scenario(
        {
            "name": "test",
            "room": {"length_m": length, "width_m": width, "height_m": height},
            "objects": list(objects),
            "tx": {"position_id": 0, "position": list(tx)},
            "rx": [{"position_id": index + 1, "position": list(point)} for index, point in enumerate(rx)],
            "bands": list(bands),
            "scan": scan or RING_SCAN_JSON,
            "drift": {"rate_ns_per_hour": drift_ns_per_hour},
            "noise": {"power_db": noise_db},
            "averaging": {"count": averaging},
            "seed": seed,
            "system": {"enabled": system},
            "processing": processing or {},
        }
    )


@pytest.fixture
def make_scenario() -> Callable[..., Scenario]:
    return build_scenario
