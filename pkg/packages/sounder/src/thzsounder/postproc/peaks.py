from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from result import Err, Ok, Result
from scipy import optimize

from thzsounder.helper import to_db
from thzsounder.waveform import CirRecord, delay_kernel

NOISE_QUANTILE_POWER = math.log(4 / 3)


@dataclass(frozen=True, slots=True)
class PathEstimate:
    delay_bins: float
    amplitude: complex

    @property
    def power(self) -> float:
        return abs(self.amplitude) ** 2

    @property
    def power_db(self) -> float:
        return 10 * math.log10(self.power) if self.power > 0 else -math.inf

    def delay_s(self, delay_bin_s: float) -> float:
        return self.delay_bins * delay_bin_s


def estimate_noise_floor(samples: npt.ArrayLike) -> float:
    """Expected peak noise power over the bins, in dB.

    The median of the weaker half of the bin powers sits at the 25th
    percentile, which for complex Gaussian noise is P ln(4/3); the largest of
    K noise bins is expected near P ln(K).
    """
    power = np.abs(np.asarray(samples, dtype=np.complex128)) ** 2
    count = len(power)
    if count == 0:
        return -math.inf
    weaker = np.sort(power)[: max(1, count // 2)]
    quartile = float(np.median(weaker))
    scale = math.log(count) / NOISE_QUANTILE_POWER if count > 1 else 1.0
    return to_db(quartile * scale)


def _parabolic_offset(power: npt.NDArray[np.float64], index: int) -> float:
    count = len(power)
    left, centre, right = (
        to_db(float(power[(index + step) % count])) for step in (-1, 0, 1)
    )
    if not all(math.isfinite(value) for value in (left, centre, right)):
        return 0.0
    curvature = left - 2 * centre + right
    if curvature >= 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / curvature, -0.5, 0.5))


def refine_peak(
    samples: npt.ArrayLike, index: int, period: int, half_width: int = 8
) -> PathEstimate:
    """Sub-bin delay and complex amplitude of the peak at ``index``.

    A parabola through the log-power seeds a bounded search that maximizes
    the normalized projection of the window onto the delay kernel.
    """
    values = np.asarray(samples, dtype=np.complex128)[:period]
    half_width = min(half_width, (period - 1) // 2)
    bins = np.arange(index - half_width, index + half_width + 1)
    window = values[bins % period]
    seed = index + _parabolic_offset(np.abs(values) ** 2, index)

    def projection(delay: float) -> tuple[complex, float]:
        kernel = delay_kernel(bins - delay, period)
        energy = float(np.dot(kernel, kernel))
        return complex(np.dot(kernel, window)), energy

    def objective(delay: float) -> float:
        inner, energy = projection(delay)
        return -(abs(inner) ** 2) / energy

    if period > 1:
        result = optimize.minimize_scalar(
            objective,
            bounds=(seed - 1.0, seed + 1.0),
            method="bounded",
            options={"xatol": 1e-7},
        )
        delay = float(result.x) if objective(float(result.x)) <= objective(seed) else seed
    else:
        delay = float(index)
    inner, energy = projection(delay)
    return PathEstimate(delay_bins=delay % period, amplitude=inner / energy)


def detect_strongest_path(
    record: CirRecord, *, margin_db: float = 6.0, noise_floor_db: float | None = None
) -> Result[PathEstimate, str]:
    power = np.abs(record.period) ** 2
    index = int(np.argmax(power))
    floor = estimate_noise_floor(record.period) if noise_floor_db is None else noise_floor_db
    peak_db = to_db(float(power[index]))
    if peak_db == -math.inf or peak_db <= floor + margin_db:
        return Err(
            f"no peak above {floor + margin_db:.1f} dB "
            f"(strongest {peak_db:.1f} dB) at position {record.position_id}"
        )
    return Ok(refine_peak(record.samples, index, record.period_bins))


def extract_components(
    samples: npt.ArrayLike,
    period: int,
    threshold_db: float,
    *,
    max_components: int = 24,
    dynamic_range_db: float = 60.0,
    half_width: int = 8,
) -> list[PathEstimate]:
    """Successive strongest-peak extraction with kernel subtraction."""
    residual = np.array(np.asarray(samples, dtype=np.complex128)[:period])
    axis = np.arange(period)
    threshold = 10 ** (threshold_db / 10) if threshold_db > -math.inf else 0.0
    components: list[PathEstimate] = []
    first_peak: float | None = None
    while len(components) < max_components:
        power = np.abs(residual) ** 2
        index = int(np.argmax(power))
        peak = float(power[index])
        if peak <= threshold or peak == 0:
            break
        if first_peak is None:
            first_peak = peak
        elif peak < first_peak * 10 ** (-dynamic_range_db / 10):
            break
        estimate = refine_peak(residual, index, period, half_width)
        residual -= estimate.amplitude * delay_kernel(axis - estimate.delay_bins, period)
        components.append(estimate)
    return components
