from .errors import (
    CharacterizationError,
    DriftModelError,
    GridError,
    NumericError,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    SounderError,
    SynthesisError,
    UnitMismatchError,
    WaveformError,
)
from .scenario import Scenario, bundled_scenario_path, load_scenario
from .version import VERSION

__version__ = VERSION
__all__ = [
    "CharacterizationError",
    "DriftModelError",
    "GridError",
    "NumericError",
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "SounderError",
    "SynthesisError",
    "UnitMismatchError",
    "WaveformError",
    "Scenario",
    "bundled_scenario_path",
    "load_scenario",
]
