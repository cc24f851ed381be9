from __future__ import annotations

import cmath
import math

from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.errors import SynthesisError


def fspl(distance_m: float, frequency_hz: float) -> float:
    if not distance_m > 0:
        raise SynthesisError(f"Distance must be positive, got {distance_m}")
    if not frequency_hz > 0:
        raise SynthesisError(f"Frequency must be positive, got {frequency_hz}")
    return 20 * math.log10(4 * math.pi * frequency_hz * distance_m / SPEED_OF_LIGHT)


def path_gain(
    length_m: float, frequency_hz: float, loss_db: float = 0.0, phase_rad: float = 0.0
) -> complex:
    """Channel-only complex amplitude of a path of the given length."""
    magnitude = 10 ** (-(fspl(length_m, frequency_hz) + loss_db) / 20)
    cycles = (frequency_hz * length_m / SPEED_OF_LIGHT) % 1.0
    return magnitude * cmath.exp(1j * (phase_rad - 2 * math.pi * cycles))
