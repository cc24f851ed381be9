from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import numpy.typing as npt

from thzsounder.errors import WaveformError


@dataclass(frozen=True, slots=True, eq=False)
class CirRecord:
    position_id: int
    band_index: int
    az_deg: float
    el_deg: float
    timestamp_s: float
    samples: npt.NDArray[np.complex128]
    delay_bin_s: float
    period_bins: int

    def __post_init__(self) -> None:
        if self.samples.ndim != 1:
            raise WaveformError("CIR samples must be one-dimensional")
        if not self.delay_bin_s > 0:
            raise WaveformError(f"delay_bin_s must be positive, got {self.delay_bin_s}")
        if not 1 <= self.period_bins <= len(self.samples):
            raise WaveformError(
                f"period_bins {self.period_bins} outside 1..{len(self.samples)}"
            )

    @property
    def sample_count(self) -> int:
        return len(self.samples)

    @property
    def direction(self) -> tuple[float, float]:
        return (self.az_deg, self.el_deg)

    @property
    def period(self) -> npt.NDArray[np.complex128]:
        return self.samples[: self.period_bins]

    def delay_axis(self) -> npt.NDArray[np.float64]:
        return np.arange(self.sample_count) * self.delay_bin_s

    def power(self) -> npt.NDArray[np.float64]:
        return np.abs(self.samples) ** 2

    def with_samples(self, samples: npt.NDArray[np.complex128]) -> CirRecord:
        return replace(self, samples=np.asarray(samples, dtype=np.complex128))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CirRecord):
            return NotImplemented
        return (
            self.position_id == other.position_id
            and self.band_index == other.band_index
            and self.az_deg == other.az_deg
            and self.el_deg == other.el_deg
            and self.timestamp_s == other.timestamp_s
            and self.delay_bin_s == other.delay_bin_s
            and self.period_bins == other.period_bins
            and np.array_equal(self.samples, other.samples)
        )

    def __hash__(self) -> int:
        return hash((self.position_id, self.band_index, self.az_deg, self.el_deg))
