from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NotRequired, TypedDict

import numpy as np

from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.scenario.antenna import RX_HORN, AntennaPattern, AntennaPatternJson
from thzsounder.scenario.geometry import Array, Vector, as_array, distance, unit_vector
from thzsounder.serializer import Model

type Material = Literal["metal", "concrete"]
MATERIALS: tuple[Material, ...] = ("metal", "concrete")


class PlacementJson(TypedDict):
    position_id: int
    position: list[float]
    antenna: NotRequired[AntennaPatternJson]
    label: NotRequired[str | None]


@dataclass(frozen=True, slots=True)
class Placement(Model[PlacementJson]):
    position_id: int
    position: Vector
    antenna: AntennaPattern = RX_HORN
    label: str | None = None

    @property
    def point(self) -> Array:
        return as_array(self.position)

    def to_json(self) -> PlacementJson:
        json: PlacementJson = {
            "position_id": self.position_id,
            "position": list(self.position),
            "antenna": self.antenna.to_json(),
        }
        if self.label is not None:
            json["label"] = self.label
        return json

    @classmethod
    def from_json(cls, json: PlacementJson, default_antenna: AntennaPattern = RX_HORN) -> Placement:
        x, y, z = (float(value) for value in json["position"])
        antenna = json.get("antenna")
        return cls(
            position_id=int(json["position_id"]),
            position=(x, y, z),
            antenna=default_antenna if antenna is None else AntennaPattern.from_json(antenna),
            label=json.get("label"),
        )


def los_delay(tx: Placement, rx: Placement) -> float:
    return distance(tx.position, rx.position) / SPEED_OF_LIGHT


class ScattererPanelJson(TypedDict):
    id: str
    center: list[float]
    normal: list[float]
    half_extents: list[float]
    material: Material
    scattering_loss_db: float
    phase_rad: NotRequired[float]


@dataclass(frozen=True, slots=True)
class ScattererPanel(Model[ScattererPanelJson]):
    """A finite rectangular reflector.

    The in-plane axes are u = normalize(z x n), or x when the normal is vertical,
    and v = n x u. ``half_extents`` are measured along (u, v).
    """

    id: str
    center: Vector
    normal: Vector
    half_extents: tuple[float, float]
    material: Material
    scattering_loss_db: float
    phase_rad: float = math.pi

    def __post_init__(self) -> None:
        if not math.isclose(float(np.linalg.norm(self.normal)), 1.0, abs_tol=1e-6):
            raise ValueError(f"normal of {self.id} must have unit magnitude")
        if min(self.half_extents) <= 0:
            raise ValueError(f"half_extents of {self.id} must be positive")
        if self.material not in MATERIALS:
            raise ValueError(f"unknown material {self.material!r}")
        if self.scattering_loss_db < 0:
            raise ValueError(f"scattering_loss_db of {self.id} must not be negative")

    def axes(self) -> tuple[Array, Array]:
        normal = as_array(self.normal)
        up = np.array([0.0, 0.0, 1.0])
        cross = np.cross(up, normal)
        u = np.array([1.0, 0.0, 0.0]) if np.linalg.norm(cross) < 1e-9 else unit_vector(cross)
        v = np.cross(normal, u)
        return u, v

    def signed_distance(self, point: Array) -> float:
        return float(np.dot(point - as_array(self.center), as_array(self.normal)))

    def mirror(self, point: Array) -> Array:
        return point - 2.0 * self.signed_distance(point) * as_array(self.normal)

    def contains(self, point: Array, tolerance: float = 1e-9) -> bool:
        u, v = self.axes()
        offset = point - as_array(self.center)
        half_u, half_v = self.half_extents
        return (
            abs(float(np.dot(offset, u))) <= half_u + tolerance
            and abs(float(np.dot(offset, v))) <= half_v + tolerance
        )

    def intersect_segment(self, start: Array, end: Array, margin: float = 1e-9) -> Array | None:
        """Interior crossing of the segment with the panel, excluding the end points."""
        a = self.signed_distance(start)
        b = self.signed_distance(end)
        if a * b > 0 or a == b:
            return None
        fraction = a / (a - b)
        if not margin < fraction < 1.0 - margin:
            return None
        point = start + fraction * (end - start)
        return point if self.contains(point) else None

    def to_json(self) -> ScattererPanelJson:
        return {
            "id": self.id,
            "center": list(self.center),
            "normal": list(self.normal),
            "half_extents": list(self.half_extents),
            "material": self.material,
            "scattering_loss_db": self.scattering_loss_db,
            "phase_rad": self.phase_rad,
        }

    @classmethod
    def from_json(cls, json: ScattererPanelJson) -> ScattererPanel:
        cx, cy, cz = (float(value) for value in json["center"])
        nx, ny, nz = (float(value) for value in json["normal"])
        half_u, half_v = (float(value) for value in json["half_extents"])
        return cls(
            id=str(json["id"]),
            center=(cx, cy, cz),
            normal=(nx, ny, nz),
            half_extents=(half_u, half_v),
            material=json["material"],
            scattering_loss_db=float(json["scattering_loss_db"]),
            phase_rad=float(json.get("phase_rad", math.pi)),
        )


class RoomJson(TypedDict):
    length_m: float
    width_m: float
    height_m: float


@dataclass(frozen=True, slots=True)
class Room(Model[RoomJson]):
    length_m: float
    width_m: float
    height_m: float

    def __post_init__(self) -> None:
        if min(self.length_m, self.width_m, self.height_m) <= 0:
            raise ValueError("room dimensions must be positive")

    @property
    def extent(self) -> Vector:
        return (self.length_m, self.width_m, self.height_m)

    def contains(self, point: Vector, tolerance: float = 1e-9) -> bool:
        return all(
            -tolerance <= value <= size + tolerance
            for value, size in zip(point, self.extent, strict=True)
        )

    def to_json(self) -> RoomJson:
        return {
            "length_m": self.length_m,
            "width_m": self.width_m,
            "height_m": self.height_m,
        }

    @classmethod
    def from_json(cls, json: RoomJson) -> Room:
        return cls(
            length_m=float(json["length_m"]),
            width_m=float(json["width_m"]),
            height_m=float(json["height_m"]),
        )
