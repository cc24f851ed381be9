from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Final, Literal

from thzsounder.scenario import Scenario, bundled_scenario_path

from thzlab.directories import OutputLayout
from thzlab.errors import ConfigError

type Stage = Literal["synth", "postproc", "characterize", "report"]
type BandSelection = Literal["140", "220", "both"]

STAGES: Final[tuple[Stage, ...]] = ("synth", "postproc", "characterize", "report")


@dataclass(slots=True)
class PipelineConfig:
    scenario_path: Path = field(default_factory=bundled_scenario_path)
    output: OutputLayout = field(default_factory=OutputLayout.default)
    bands: BandSelection = "both"
    stage_from: Stage = "synth"
    stage_to: Stage = "report"
    seed: int | None = None
    reference_path: Path | None = None
    workers: int | None = None
    svg: bool = False
    cir_csv: bool = False
    debug: bool = False

    def stages(self) -> list[Stage]:
        if self.stage_from not in STAGES or self.stage_to not in STAGES:
            raise ConfigError(f"Unknown stage in {self.stage_from}..{self.stage_to}")
        start = STAGES.index(self.stage_from)
        stop = STAGES.index(self.stage_to)
        if start > stop:
            raise ConfigError(f"Stage {self.stage_from} comes after {self.stage_to}")
        return list(STAGES[start : stop + 1])

    def select_bands(self, scenario: Scenario) -> list[int]:
        if self.bands == "both":
            return list(range(len(scenario.bands)))
        try:
            return [scenario.band_index(self.bands)]
        except KeyError as e:
            raise ConfigError(f"Scenario {scenario.name} has no {self.bands} GHz band") from e

    def validate(self) -> None:
        self.stages()
        if self.seed is not None and self.seed < 0:
            raise ConfigError(f"Seed must not be negative, got {self.seed}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"Workers must be at least 1, got {self.workers}")
        if self.reference_path is not None and not self.reference_path.exists():
            raise ConfigError(f"Reference table {self.reference_path} does not exist")
