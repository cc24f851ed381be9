from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy import special

from thzsounder.errors import WaveformError


def delay_kernel(offset_bins: npt.ArrayLike, period: int) -> npt.NDArray[np.float64]:
    """Periodic sinc of a flat band spanning ``period`` bins; 1 at zero offset, unit energy."""
    if period < 1 or period % 2 == 0:
        raise WaveformError(f"Kernel period must be odd and positive, got {period}")
    offset = np.asarray(offset_bins, dtype=np.float64)
    return special.diric(2.0 * np.pi * offset / period, period)


def symmetric_bins(period: int) -> npt.NDArray[np.float64]:
    return np.fft.fftfreq(period) * period


def fractional_shift(
    samples: npt.NDArray[np.complex128], shift_bins: float, period: int | None = None
) -> npt.NDArray[np.complex128]:
    """Delay the first ``period`` bins circularly by ``shift_bins``; padding stays zero."""
    period = len(samples) if period is None else period
    if period > len(samples):
        raise WaveformError(f"Period {period} exceeds record length {len(samples)}")
    spectrum = np.fft.fft(samples[:period])
    ramp = np.exp(-2j * np.pi * symmetric_bins(period) * shift_bins / period)
    shifted = np.zeros(len(samples), dtype=np.complex128)
    shifted[:period] = np.fft.ifft(spectrum * ramp)
    return shifted


def fit_length(cir: npt.NDArray[np.complex128], sample_count: int) -> npt.NDArray[np.complex128]:
    if len(cir) >= sample_count:
        return np.array(cir[:sample_count], dtype=np.complex128)
    fitted = np.zeros(sample_count, dtype=np.complex128)
    fitted[: len(cir)] = cir
    return fitted
