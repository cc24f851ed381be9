from __future__ import annotations

import math
from typing import Literal

import numpy as np
import numpy.typing as npt

from thzsounder.errors import CharacterizationError

type SpreadDomain = Literal["delay", "azimuth", "elevation"]


def _weights(powers: npt.ArrayLike) -> npt.NDArray[np.float64]:
    weights = np.asarray(powers, dtype=np.float64)
    if weights.size == 0:
        raise CharacterizationError("Spread of an empty set is undefined")
    if np.any(weights < 0) or not weights.sum() > 0:
        raise CharacterizationError("Spread weights must be non-negative with a positive sum")
    return weights


def weighted_mean(values: npt.ArrayLike, powers: npt.ArrayLike) -> float:
    weights = _weights(powers)
    return float(np.dot(weights, np.asarray(values, dtype=np.float64)) / weights.sum())


def circular_mean_deg(angles_deg: npt.ArrayLike, powers: npt.ArrayLike) -> float:
    weights = _weights(powers)
    resultant = np.dot(weights, np.exp(1j * np.radians(np.asarray(angles_deg, dtype=np.float64))))
    return math.degrees(math.atan2(resultant.imag, resultant.real)) % 360.0


def rms_spread(values: npt.ArrayLike, powers: npt.ArrayLike, domain: SpreadDomain = "delay") -> float:
    """Power-weighted spread.

    Delays use the RMS about the weighted mean. Angles use the circular form
    sqrt(-2 ln R) of the weighted mean resultant length R, in degrees.
    """
    weights = _weights(powers)
    data = np.asarray(values, dtype=np.float64)
    if data.shape != weights.shape:
        raise CharacterizationError("Values and powers must have the same length")
    total = weights.sum()
    if domain == "delay":
        mean = np.dot(weights, data) / total
        variance = np.dot(weights, (data - mean) ** 2) / total
        return float(math.sqrt(max(0.0, float(variance))))
    resultant = abs(np.dot(weights, np.exp(1j * np.radians(data)))) / total
    resultant = min(1.0, max(float(resultant), 1e-300))
    return math.degrees(math.sqrt(max(0.0, -2.0 * math.log(resultant))))
