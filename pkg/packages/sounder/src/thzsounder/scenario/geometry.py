from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

type Vector = tuple[float, float, float]
type Array = npt.NDArray[np.float64]


def as_array(vector: Vector | npt.ArrayLike) -> Array:
    return np.asarray(vector, dtype=np.float64)


def as_vector(array: npt.ArrayLike) -> Vector:
    x, y, z = (float(value) for value in np.asarray(array, dtype=np.float64))
    return (x, y, z)


def unit_vector(vector: Vector | npt.ArrayLike) -> Array:
    array = as_array(vector)
    norm = float(np.linalg.norm(array))
    if norm == 0.0:
        raise ValueError("Cannot normalize a zero vector")
    return array / norm


def angles_to_unit(az_deg: float, el_deg: float) -> Array:
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    return np.array(
        [math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)]
    )


def direction_to_angles(vector: Vector | npt.ArrayLike) -> tuple[float, float]:
    """Azimuth in [0, 360) from +x towards +y, elevation from the horizontal."""
    x, y, z = unit_vector(vector)
    az = math.degrees(math.atan2(y, x)) % 360.0
    el = math.degrees(math.atan2(z, math.hypot(x, y)))
    return az, el


def angular_offset_deg(a: Vector | npt.ArrayLike, b: Vector | npt.ArrayLike) -> float:
    cosine = float(np.dot(unit_vector(a), unit_vector(b)))
    return math.degrees(math.acos(min(1.0, max(-1.0, cosine))))


def distance(a: Vector | npt.ArrayLike, b: Vector | npt.ArrayLike) -> float:
    return float(np.linalg.norm(as_array(a) - as_array(b)))


def wrap_azimuth(az_deg: float) -> float:
    return az_deg % 360.0
