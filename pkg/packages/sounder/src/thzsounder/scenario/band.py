from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NotRequired, TypedDict

import numpy as np
import numpy.typing as npt

from thzsounder.constants import SPEED_OF_LIGHT
from thzsounder.serializer import Model


class BandConfigJson(TypedDict):
    carrier_hz: float
    bandwidth_hz: float
    sample_count: int
    zc_root: NotRequired[int]
    zc_length: NotRequired[int | None]


@dataclass(frozen=True, slots=True)
class BandConfig(Model[BandConfigJson]):
    carrier_hz: float
    bandwidth_hz: float
    sample_count: int
    zc_root: int = 1
    zc_length: int | None = None

    def __post_init__(self) -> None:
        if not self.carrier_hz > 0:
            raise ValueError(f"carrier_hz must be positive, got {self.carrier_hz}")
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be at least 1, got {self.sample_count}")
        period = self.period_bins
        if period < 1 or period % 2 == 0:
            raise ValueError(f"zc_length must be odd and positive, got {period}")
        if period > self.sample_count:
            raise ValueError(
                f"zc_length {period} exceeds sample_count {self.sample_count}"
            )
        if math.gcd(self.zc_root, period) != 1:
            raise ValueError(f"zc_root {self.zc_root} is not coprime with {period}")

    @property
    def period_bins(self) -> int:
        """Sequence period; the largest odd length that fits when not configured."""
        if self.zc_length is not None:
            return self.zc_length
        return self.sample_count if self.sample_count % 2 else self.sample_count - 1

    @property
    def delay_bin_s(self) -> float:
        return 1.0 / self.bandwidth_hz

    @property
    def max_delay_s(self) -> float:
        return self.sample_count * self.delay_bin_s

    @property
    def max_path_length_m(self) -> float:
        return self.max_delay_s * SPEED_OF_LIGHT

    @property
    def alias_free_delay_s(self) -> float:
        return self.period_bins * self.delay_bin_s

    @property
    def label(self) -> str:
        return f"{self.carrier_hz / 1e9:g}"

    def frequencies(self) -> npt.NDArray[np.float64]:
        """Baseband frequencies of the sounding bins in FFT order."""
        return np.fft.fftfreq(self.period_bins, d=self.delay_bin_s)

    def to_json(self) -> BandConfigJson:
        return {
            "carrier_hz": self.carrier_hz,
            "bandwidth_hz": self.bandwidth_hz,
            "sample_count": self.sample_count,
            "zc_root": self.zc_root,
            "zc_length": self.period_bins,
        }

    @classmethod
    def from_json(cls, json: BandConfigJson) -> BandConfig:
        zc_length = json.get("zc_length")
        return cls(
            carrier_hz=float(json["carrier_hz"]),
            bandwidth_hz=float(json["bandwidth_hz"]),
            sample_count=int(json["sample_count"]),
            zc_root=int(json.get("zc_root", 1)),
            zc_length=None if zc_length is None else int(zc_length),
        )


BAND_140 = BandConfig(carrier_hz=140e9, bandwidth_hz=1.536e9, sample_count=2048, zc_length=2047)
BAND_220 = BandConfig(carrier_hz=220e9, bandwidth_hz=1.536e9, sample_count=2048, zc_length=2047)
