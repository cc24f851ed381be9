from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from thzsounder.errors import WaveformError


@dataclass(frozen=True, slots=True, eq=False)
class ZcSequence:
    root: int
    length: int
    samples: npt.NDArray[np.complex128]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZcSequence):
            return NotImplemented
        return (
            self.root == other.root
            and self.length == other.length
            and np.array_equal(self.samples, other.samples)
        )

    def __hash__(self) -> int:
        return hash((self.root, self.length))


def generate_zc(root: int = 1, length: int = 1021) -> ZcSequence:
    if length < 1 or length % 2 == 0:
        raise WaveformError(f"ZC length must be odd and positive, got {length}")
    if math.gcd(root, length) != 1:
        raise WaveformError(f"ZC root {root} is not coprime with length {length}")
    return _generate(root, length)


@functools.cache
def _generate(root: int, length: int) -> ZcSequence:
    n = np.arange(length, dtype=np.int64)
    # phase reduced modulo 2*length in integers so long sequences keep full precision
    phase = (root * n * (n + 1)) % (2 * length)
    samples = np.exp(-1j * np.pi * phase / length)
    samples.setflags(write=False)
    return ZcSequence(root=root, length=length, samples=samples)


@functools.cache
def zc_spectrum(root: int, length: int) -> npt.NDArray[np.complex128]:
    spectrum = np.fft.fft(generate_zc(root, length).samples)
    spectrum.setflags(write=False)
    return spectrum
