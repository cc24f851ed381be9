from __future__ import annotations

import json
from collections.abc import Callable, Mapping
from importlib import resources
from pathlib import Path
from typing import Any

from loguru import logger

from thzsounder.errors import ScenarioParseError, ScenarioValidationError
from thzsounder.scenario.antenna import RX_HORN, TX_WAVEGUIDE
from thzsounder.scenario.band import BandConfig
from thzsounder.scenario.objects import Placement, Room, ScattererPanel
from thzsounder.scenario.scan import ScanGrid
from thzsounder.scenario.scenario import (
    AveragingConfig,
    DriftProcess,
    MeasurementSchedule,
    NoiseConfig,
    Scenario,
    SystemResponseConfig,
)

REQUIRED_KEYS = (
    "room",
    "objects",
    "tx",
    "rx",
    "bands",
    "scan",
    "drift",
    "noise",
    "averaging",
    "seed",
)


def _parse[T](field: str, parse: Callable[[Any], T], data: Any) -> T:
    try:
        return parse(data)
    except ScenarioValidationError as e:
        raise e.with_prefix(field) from e
    except KeyError as e:
        raise ScenarioValidationError(field, f"missing key {e.args[0]!r}") from e
    except (TypeError, ValueError) as e:
        raise ScenarioValidationError(field, str(e)) from e


def _parse_list[T](field: str, parse: Callable[[Any], T], data: Any) -> tuple[T, ...]:
    if not isinstance(data, list):
        raise ScenarioValidationError(field, "expected a list")
    return tuple(_parse(f"{field}[{index}]", parse, item) for index, item in enumerate(data))


def parse_scenario(data: Mapping[str, Any]) -> Scenario:
    if not isinstance(data, Mapping):
        raise ScenarioParseError("Scenario document must be a JSON object")
    for key in REQUIRED_KEYS:
        if key not in data:
            raise ScenarioValidationError(key, "missing required key")
    seed = data["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ScenarioValidationError("seed", "must be a non-negative integer")
    processing = data.get("processing", {})
    if not isinstance(processing, Mapping):
        raise ScenarioValidationError("processing", "expected an object")
    try:
        overrides = {str(key): float(value) for key, value in processing.items()}
    except (TypeError, ValueError) as e:
        raise ScenarioValidationError("processing", str(e)) from e
    return Scenario(
        name=str(data.get("name", "scenario")),
        room=_parse("room", Room.from_json, data["room"]),
        objects=_parse_list("objects", ScattererPanel.from_json, data["objects"]),
        tx=_parse("tx", lambda json: Placement.from_json(json, TX_WAVEGUIDE), data["tx"]),
        rx_list=_parse_list(
            "rx", lambda json: Placement.from_json(json, RX_HORN), data["rx"]
        ),
        bands=_parse_list("bands", BandConfig.from_json, data["bands"]),
        scan=_parse("scan", ScanGrid.from_json, data["scan"]),
        drift=_parse("drift", DriftProcess.from_json, data["drift"]),
        noise=_parse("noise", NoiseConfig.from_json, data["noise"]),
        averaging=_parse("averaging", AveragingConfig.from_json, data["averaging"]),
        rng_seed=seed,
        schedule=_parse(
            "schedule", MeasurementSchedule.from_json, data.get("schedule", {})
        ),
        system=_parse("system", SystemResponseConfig.from_json, data.get("system", {})),
        processing=overrides,
    )


def load_scenario(path: Path | str, *, seed: int | None = None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioParseError(f"Cannot read scenario {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"Malformed scenario {path}: {e}") from e
    scenario = parse_scenario(data)
    if seed is not None:
        scenario = scenario.with_seed(seed)
    logger.info(
        f"Loaded scenario {scenario.name} from {path}: {len(scenario.rx_list)} Rx, "
        f"{len(scenario.objects)} scatterers, {len(scenario.bands)} bands"
    )
    return scenario


def bundled_scenario_path(name: str = "laboratory") -> Path:
    return Path(str(resources.files("thzsounder") / "data" / f"{name}.json"))
