from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from loguru import logger

from thzsounder.scenario import Scenario, build_direction_grid
from thzsounder.synth.observation import record_rng, synthesize_observation
from thzsounder.synth.paths import trace_all
from thzsounder.waveform import CirRecord


def run_campaign(scenario: Scenario, band: int, workers: int | None = None) -> list[CirRecord]:
    """All positions times all directions, ordered by (position, direction)."""
    directions = build_direction_grid(scenario.scan)
    paths = trace_all(scenario, band)
    label = scenario.bands[band].label
    tasks = [
        (position_index, rx.position_id, direction_index, direction)
        for position_index, rx in enumerate(scenario.rx_list)
        for direction_index, direction in enumerate(directions)
    ]

    def synthesize(task: tuple[int, int, int, tuple[float, float]]) -> CirRecord:
        position_index, rx_id, direction_index, direction = task
        timestamp = scenario.schedule.timestamp(position_index, direction_index, len(directions))
        rng = record_rng(scenario.rng_seed, rx_id, band, direction_index)
        return synthesize_observation(
            scenario, rx_id, band, direction, timestamp, rng, paths=paths[rx_id]
        )

    logger.info(
        f"Synthesizing {len(tasks)} CIRs at {label} GHz "
        f"({len(scenario.rx_list)} positions x {len(directions)} directions)"
    )
    if workers == 1:
        records = [synthesize(task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(synthesize, tasks))
    logger.info(f"Synthesized {len(records)} CIRs at {label} GHz")
    return records
