from __future__ import annotations

from dataclasses import dataclass
from typing import NotRequired, TypedDict, overload

import numpy as np
import numpy.typing as npt

from thzsounder.serializer import Model


class AntennaPatternJson(TypedDict):
    boresight_gain_dbi: float
    hpbw_deg: float
    sidelobe_db: NotRequired[float]


@dataclass(frozen=True, slots=True)
class AntennaPattern(Model[AntennaPatternJson]):
    """Parabolic main lobe in dB clipped at a constant sidelobe floor."""

    boresight_gain_dbi: float
    hpbw_deg: float
    sidelobe_db: float = -30.0

    def __post_init__(self) -> None:
        if not self.hpbw_deg > 0:
            raise ValueError(f"hpbw_deg must be positive, got {self.hpbw_deg}")
        if self.sidelobe_db > 0:
            raise ValueError(f"sidelobe_db must not be positive, got {self.sidelobe_db}")

    @overload
    def gain(self, offset_deg: float) -> float: ...

    @overload
    def gain(self, offset_deg: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]: ...

    def gain(self, offset_deg):
        offset = np.abs(offset_deg)
        main_lobe = self.boresight_gain_dbi - 12.0 * (offset / self.hpbw_deg) ** 2
        gain = np.maximum(main_lobe, self.boresight_gain_dbi + self.sidelobe_db)
        if np.ndim(gain) == 0:
            return float(gain)
        return gain

    @property
    def boresight_amplitude(self) -> float:
        return 10 ** (self.boresight_gain_dbi / 20)

    def to_json(self) -> AntennaPatternJson:
        return {
            "boresight_gain_dbi": self.boresight_gain_dbi,
            "hpbw_deg": self.hpbw_deg,
            "sidelobe_db": self.sidelobe_db,
        }

    @classmethod
    def from_json(cls, json: AntennaPatternJson) -> AntennaPattern:
        return cls(
            boresight_gain_dbi=float(json["boresight_gain_dbi"]),
            hpbw_deg=float(json["hpbw_deg"]),
            sidelobe_db=float(json.get("sidelobe_db", -30.0)),
        )


TX_WAVEGUIDE = AntennaPattern(boresight_gain_dbi=7.0, hpbw_deg=30.0)
RX_HORN = AntennaPattern(boresight_gain_dbi=25.0, hpbw_deg=8.0)


def antenna_gain(pattern: AntennaPattern, offset_deg: float) -> float:
    return pattern.gain(offset_deg)
