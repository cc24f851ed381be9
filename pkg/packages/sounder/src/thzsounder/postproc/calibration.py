from __future__ import annotations

import numpy as np
import numpy.typing as npt
from loguru import logger

from thzsounder.errors import NumericError
from thzsounder.waveform import CirRecord, fit_length


def calibrate(
    cir: CirRecord,
    system_response: npt.ArrayLike | CirRecord,
    *,
    regularization: float = 1e-6,
) -> CirRecord:
    """Deconvolve the hardware response measured by a direct connection.

    Spectral bins weaker than ``regularization`` times the strongest one are
    floored there instead of being divided out.
    """
    if isinstance(system_response, CirRecord):
        system_response = system_response.samples
    response = np.asarray(system_response, dtype=np.complex128)
    period = cir.period_bins
    if len(response) < period:
        raise NumericError(
            f"System response has {len(response)} samples, the sequence period is {period}"
        )
    spectrum = np.fft.fft(response[:period])
    power = np.abs(spectrum) ** 2
    peak = float(power.max())
    if peak == 0:
        raise NumericError("System response is identically zero")
    floor = regularization * peak
    if np.any(power < floor):
        logger.warning(
            f"System response has {int(np.sum(power < floor))} near-null bins; "
            "calibration is regularized"
        )
    transfer = np.fft.fft(cir.period) * np.conj(spectrum) / np.maximum(power, floor)
    return cir.with_samples(fit_length(np.fft.ifft(transfer), cir.sample_count))


def calibrate_all(
    records: list[CirRecord], system_response: npt.ArrayLike | CirRecord, **kwargs
) -> list[CirRecord]:
    return [calibrate(record, system_response, **kwargs) for record in records]
