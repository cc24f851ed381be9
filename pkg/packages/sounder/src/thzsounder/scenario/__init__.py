from .antenna import RX_HORN, TX_WAVEGUIDE, AntennaPattern, antenna_gain
from .band import BAND_140, BAND_220, BandConfig
from .geometry import (
    Vector,
    angles_to_unit,
    angular_offset_deg,
    direction_to_angles,
    distance,
    unit_vector,
)
from .loader import bundled_scenario_path, load_scenario, parse_scenario
from .objects import MATERIALS, Material, Placement, Room, ScattererPanel, los_delay
from .scan import Direction, ScanGrid, build_direction_grid
from .scenario import (
    AveragingConfig,
    DriftProcess,
    MeasurementSchedule,
    NoiseConfig,
    Scenario,
    SystemResponseConfig,
)

__all__ = [
    "RX_HORN",
    "TX_WAVEGUIDE",
    "AntennaPattern",
    "antenna_gain",
    "BAND_140",
    "BAND_220",
    "BandConfig",
    "Vector",
    "angles_to_unit",
    "angular_offset_deg",
    "direction_to_angles",
    "distance",
    "unit_vector",
    "bundled_scenario_path",
    "load_scenario",
    "parse_scenario",
    "MATERIALS",
    "Material",
    "Placement",
    "Room",
    "ScattererPanel",
    "los_delay",
    "Direction",
    "ScanGrid",
    "build_direction_grid",
    "AveragingConfig",
    "DriftProcess",
    "MeasurementSchedule",
    "NoiseConfig",
    "Scenario",
    "SystemResponseConfig",
]
