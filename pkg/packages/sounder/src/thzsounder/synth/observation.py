from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from thzsounder.errors import GridError, SynthesisError
from thzsounder.scenario import (
    BandConfig,
    Direction,
    Placement,
    Scenario,
    SystemResponseConfig,
    angles_to_unit,
    angular_offset_deg,
)
from thzsounder.synth.paths import PropagationPath, trace_paths
from thzsounder.waveform import (
    CirRecord,
    add_noise,
    average_cirs,
    correlate,
    fit_length,
    generate_zc,
    symmetric_bins,
    zc_spectrum,
)

type ComplexArray = npt.NDArray[np.complex128]


def record_rng(seed: int, position_id: int, band_index: int, direction_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([seed, position_id, band_index, direction_index])
    )


def system_transfer(band: BandConfig, config: SystemResponseConfig) -> ComplexArray:
    """Frequency response of the hardware chain over the sounding bins, FFT order.

    ``ripple_db`` is the peak-to-peak magnitude ripple of a cosine across the band.
    """
    period = band.period_bins
    if not config.enabled:
        return np.ones(period, dtype=np.complex128)
    frequencies = band.frequencies()
    magnitude_db = -config.insertion_loss_db + 0.5 * config.ripple_db * np.cos(
        2 * np.pi * frequencies / config.ripple_period_hz
    )
    ramp = np.exp(-2j * np.pi * symmetric_bins(period) * config.delay_bins / period)
    return 10 ** (magnitude_db / 20) * ramp


def system_response(band: BandConfig, config: SystemResponseConfig) -> ComplexArray:
    return fit_length(np.fft.ifft(system_transfer(band, config)), band.sample_count)


def channel_transfer(
    delays_s: npt.ArrayLike, amplitudes: npt.ArrayLike, band: BandConfig
) -> ComplexArray:
    delays = np.atleast_1d(np.asarray(delays_s, dtype=np.float64))
    gains = np.atleast_1d(np.asarray(amplitudes, dtype=np.complex128))
    if delays.size == 0:
        return np.zeros(band.period_bins, dtype=np.complex128)
    phases = np.exp(-2j * np.pi * np.outer(band.frequencies(), delays))
    return phases @ gains


def tx_boresight(scenario: Scenario, rx: Placement) -> npt.NDArray[np.float64]:
    offset = rx.point - scenario.tx.point
    norm = float(np.linalg.norm(offset))
    return np.array([1.0, 0.0, 0.0]) if norm == 0 else offset / norm


def pattern_gains_db(
    scenario: Scenario, rx: Placement, path: PropagationPath, direction: Direction
) -> tuple[float, float]:
    """Tx gain at the departure offset and Rx gain at the arrival offset from ``direction``."""
    departure = angles_to_unit(path.aod_az_deg, path.aod_el_deg)
    arrival = angles_to_unit(path.aoa_az_deg, path.aoa_el_deg)
    tx_offset = angular_offset_deg(departure, tx_boresight(scenario, rx))
    rx_offset = angular_offset_deg(arrival, angles_to_unit(*direction))
    return scenario.tx.antenna.gain(tx_offset), rx.antenna.gain(rx_offset)


def sound(
    transfer: ComplexArray,
    band: BandConfig,
    scenario: Scenario,
    rng: np.random.Generator,
) -> ComplexArray:
    """Sound a channel transfer with the ZC sequence and return the averaged CIR."""
    sequence = generate_zc(band.zc_root, band.period_bins)
    received = np.fft.ifft(transfer * zc_spectrum(sequence.root, sequence.length))
    averaging = scenario.averaging
    noise_db = scenario.noise.level_db
    if noise_db == -math.inf:
        cir = correlate(received, sequence)
    else:
        # correlation divides white input noise power by the sequence length
        input_noise_db = noise_db + 10 * math.log10(sequence.length)
        if averaging.mode == "explicit":
            cir = average_cirs(
                [
                    correlate(add_noise(received, input_noise_db, rng), sequence)
                    for _ in range(averaging.count)
                ]
            )
        else:
            equivalent_db = input_noise_db - 10 * math.log10(averaging.count)
            cir = correlate(add_noise(received, equivalent_db, rng), sequence)
    return fit_length(cir, band.sample_count)


def synthesize_observation(
    scenario: Scenario,
    rx_id: int,
    band: int,
    direction: Direction,
    timestamp_s: float,
    rng: np.random.Generator,
    *,
    paths: Sequence[PropagationPath] | None = None,
) -> CirRecord:
    try:
        scenario.scan.index_of(direction)
    except GridError as e:
        raise SynthesisError(f"Direction {direction} is outside the scan grid") from e
    config = scenario.bands[band]
    rx = scenario.rx(rx_id)
    if paths is None:
        paths = trace_paths(scenario, rx_id, band)
    drift_s = scenario.drift.offset_s(timestamp_s)
    delays = []
    amplitudes = []
    for path in paths:
        tx_gain, rx_gain = pattern_gains_db(scenario, rx, path, direction)
        delays.append(path.delay_s + drift_s)
        amplitudes.append(path.gain_linear * 10 ** ((tx_gain + rx_gain) / 20))
    transfer = channel_transfer(delays, amplitudes, config)
    if scenario.system.enabled:
        transfer = transfer * system_transfer(config, scenario.system)
    az, el = direction
    return CirRecord(
        position_id=rx_id,
        band_index=band,
        az_deg=az,
        el_deg=el,
        timestamp_s=timestamp_s,
        samples=sound(transfer, config, scenario, rng),
        delay_bin_s=config.delay_bin_s,
        period_bins=config.period_bins,
    )


def direct_connection_record(scenario: Scenario, band: int, rng: np.random.Generator | None = None) -> CirRecord:
    """Back-to-back measurement: the hardware chain through a unit-gain, zero-delay channel."""
    config = scenario.bands[band]
    if rng is None:
        rng = record_rng(scenario.rng_seed, 0, band, 0)
    return CirRecord(
        position_id=0,
        band_index=band,
        az_deg=0.0,
        el_deg=0.0,
        timestamp_s=0.0,
        samples=sound(system_transfer(config, scenario.system), config, scenario, rng),
        delay_bin_s=config.delay_bin_s,
        period_bins=config.period_bins,
    )
