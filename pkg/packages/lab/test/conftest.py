import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from thzlab.config import PipelineConfig
from thzlab.directories import OutputLayout

BAND_JSON = {"bandwidth_hz": 1.536e9, "sample_count": 2048, "zc_length": 2047}


def scenario_json(*, bands: tuple[float, ...] = (140e9, 220e9), seed: int = 3) -> dict[str, Any]:
    return {
        "name": "bench",
        "room": {"length_m": 12.0, "width_m": 8.0, "height_m": 4.0},
        "objects": [
            {
                "id": "wall",
                "center": [6.0, 0.0, 2.0],
                "normal": [0.0, 1.0, 0.0],
                "half_extents": [6.0, 2.0],
                "material": "metal",
                "scattering_loss_db": 6.0,
            }
        ],
        "tx": {"position_id": 0, "position": [1.0, 4.0, 1.6]},
        "rx": [
            {"position_id": 1, "position": [4.0, 4.0, 1.6]},
            {"position_id": 2, "position": [7.0, 5.0, 1.6]},
            {"position_id": 3, "position": [10.0, 3.0, 1.6]},
        ],
        "bands": [{"carrier_hz": carrier, **BAND_JSON} for carrier in bands],
        "scan": {
            "az_start_deg": 0.0,
            "az_stop_deg": 350.0,
            "az_step_deg": 10.0,
            "el_start_deg": 0.0,
            "el_stop_deg": 0.0,
            "el_step_deg": 10.0,
        },
        "drift": {"rate_ns_per_hour": 20.0},
        "noise": {"power_db": -150.0},
        "averaging": {"count": 1000},
        "seed": seed,
        "system": {"enabled": True},
    }


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[..., Path]:
    def write(name: str = "bench.json", **kwargs: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(scenario_json(**kwargs)), encoding="utf-8")
        return path

    return write


@pytest.fixture
def make_config(tmp_path: Path, write_scenario: Callable[..., Path]) -> Callable[..., PipelineConfig]:
    def make(out: str = "out", **kwargs: Any) -> PipelineConfig:
        kwargs.setdefault("scenario_path", write_scenario())
        kwargs.setdefault("workers", 1)
        return PipelineConfig(output=OutputLayout(root=tmp_path / out), **kwargs)

    return make
