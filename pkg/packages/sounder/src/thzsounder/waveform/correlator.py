from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from thzsounder.errors import WaveformError
from thzsounder.waveform.zadoff_chu import ZcSequence, zc_spectrum

type ComplexArray = npt.NDArray[np.complex128]


def correlate(received: npt.ArrayLike, reference: ZcSequence) -> ComplexArray:
    """Circular cross-correlation normalized by the reference length.

    A received capture of several whole sequence periods is folded (averaged per
    period) before correlating.
    """
    signal = np.asarray(received, dtype=np.complex128)
    length = reference.length
    if signal.ndim != 1 or len(signal) < length:
        raise WaveformError(
            f"Received length {len(signal)} is shorter than the sequence length {length}"
        )
    if len(signal) % length:
        raise WaveformError(
            f"Received length {len(signal)} is not a multiple of the sequence length {length}"
        )
    folded = signal.reshape(-1, length).mean(axis=0)
    spectrum = np.fft.fft(folded) * np.conj(zc_spectrum(reference.root, length))
    return np.fft.ifft(spectrum) / length


def average_cirs(samples: Sequence[npt.ArrayLike]) -> ComplexArray:
    if len(samples) == 0:
        raise WaveformError("Cannot average an empty list of CIRs")
    lengths = {len(sample) for sample in samples}  # type: ignore[arg-type]
    if len(lengths) != 1:
        raise WaveformError(f"CIRs have ragged lengths {sorted(lengths)}")
    return np.mean(np.asarray(samples, dtype=np.complex128), axis=0)


def complex_noise(
    shape: int | tuple[int, ...], noise_power_db: float, rng: np.random.Generator
) -> ComplexArray:
    scale = math.sqrt(10 ** (noise_power_db / 10) / 2)
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return scale * (real + 1j * imag)


def add_noise(
    signal: npt.ArrayLike, noise_power_db: float, rng: np.random.Generator
) -> ComplexArray:
    values = np.asarray(signal, dtype=np.complex128)
    if noise_power_db == -math.inf:
        return values.copy()
    return values + complex_noise(values.shape, noise_power_db, rng)


def mean_power_db(samples: npt.ArrayLike) -> float:
    power = float(np.mean(np.abs(np.asarray(samples)) ** 2))
    return 10 * math.log10(power) if power > 0 else -math.inf
