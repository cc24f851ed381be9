import math

import numpy as np
import pytest
from thzsounder.errors import WaveformError
from thzsounder.waveform import (
    CirRecord,
    add_noise,
    average_cirs,
    complex_noise,
    correlate,
    delay_kernel,
    fit_length,
    fractional_shift,
    generate_zc,
    mean_power_db,
)


def test_zc_unit_modulus():
    zc = generate_zc(1, 1021)
    assert np.allclose(np.abs(zc.samples), 1.0)


def test_zc_periodic_autocorrelation():
    zc = generate_zc(1, 1021).samples
    lags = np.array([np.vdot(np.roll(zc, lag), zc) for lag in range(1021)])
    assert abs(lags[0]) == pytest.approx(1021)
    assert np.max(np.abs(lags[1:])) <= 1e-6 * 1021


def test_zc_is_cached_and_read_only():
    assert generate_zc(3, 1021) is generate_zc(3, 1021)
    assert generate_zc(3, 1021) == generate_zc(3, 1021)
    assert generate_zc(3, 1021) != generate_zc(1, 1021)
    with pytest.raises(ValueError):
        generate_zc(3, 1021).samples[0] = 0


def test_zc_invalid_parameters():
    with pytest.raises(WaveformError):
        generate_zc(1, 1020)
    with pytest.raises(WaveformError):
        generate_zc(3, 21)


def test_correlate_shifted_reference():
    zc = generate_zc(1, 1021)
    cir = correlate(np.roll(zc.samples, 7), zc)
    assert int(np.argmax(np.abs(cir))) == 7
    assert abs(cir[7]) == pytest.approx(1.0)
    cir = correlate(0.5 * np.roll(zc.samples, 7), zc)
    assert abs(cir[7]) == pytest.approx(0.5)


def test_correlate_two_copies():
    zc = generate_zc(1, 1021)
    received = np.roll(zc.samples, 5) + 0.3 * np.roll(zc.samples, 40)
    cir = correlate(received, zc)
    assert abs(cir[5]) == pytest.approx(1.0, abs=1e-6)
    assert abs(cir[40]) == pytest.approx(0.3, abs=1e-6)
    others = np.delete(np.abs(cir), [5, 40])
    assert np.max(others) < 1e-6


def test_correlate_folds_whole_periods():
    zc = generate_zc(1, 63)
    received = np.tile(np.roll(zc.samples, 3), 4)
    assert abs(correlate(received, zc)[3]) == pytest.approx(1.0)
    with pytest.raises(WaveformError):
        correlate(received[:100], zc)
    with pytest.raises(WaveformError):
        correlate(received[:10], zc)


def test_average_identical():
    vector = np.arange(8) + 1j
    assert np.array_equal(average_cirs([vector] * 5), vector)
    with pytest.raises(WaveformError):
        average_cirs([])
    with pytest.raises(WaveformError):
        average_cirs([np.zeros(3), np.zeros(4)])


def test_averaging_reduces_noise():
    rng = np.random.default_rng(1)
    single = mean_power_db(complex_noise(2048, 0.0, rng))
    averaged = mean_power_db(average_cirs([complex_noise(2048, 0.0, rng) for _ in range(100)]))
    assert single - averaged == pytest.approx(20.0, abs=1.0)


def test_noise_power():
    rng = np.random.default_rng(2)
    assert mean_power_db(add_noise(np.zeros(2048), -100.0, rng)) == pytest.approx(-100.0, abs=0.5)


def test_noise_disabled_and_deterministic():
    signal = np.arange(16, dtype=np.complex128)
    assert np.array_equal(add_noise(signal, -math.inf, np.random.default_rng(0)), signal)
    first = add_noise(signal, -20.0, np.random.default_rng(5))
    second = add_noise(signal, -20.0, np.random.default_rng(5))
    assert np.array_equal(first, second)


def test_delay_kernel():
    assert delay_kernel(0.0, 2047) == pytest.approx(1.0)
    assert np.allclose(delay_kernel(np.arange(1, 2047), 2047), 0.0, atol=1e-12)
    offsets = np.arange(2047) - 0.3
    assert float(np.sum(delay_kernel(offsets, 2047) ** 2)) == pytest.approx(1.0)
    with pytest.raises(WaveformError):
        delay_kernel(0.0, 2048)


def test_fractional_shift():
    samples = np.zeros(64, dtype=np.complex128)
    samples[3] = 1.0
    shifted = fractional_shift(samples, 5.0, 63)
    assert abs(shifted[8]) == pytest.approx(1.0)
    assert shifted[63] == 0
    back = fractional_shift(fractional_shift(samples, 0.4, 63), -0.4, 63)
    assert np.allclose(back, samples, atol=1e-12)


def test_fit_length():
    assert len(fit_length(np.ones(5, dtype=np.complex128), 8)) == 8
    assert np.array_equal(fit_length(np.arange(8, dtype=np.complex128), 3), [0, 1, 2])


def test_record_validation():
    with pytest.raises(WaveformError):
        CirRecord(1, 0, 0.0, 0.0, 0.0, np.zeros(8, dtype=np.complex128), 0.0, 7)
    with pytest.raises(WaveformError):
        CirRecord(1, 0, 0.0, 0.0, 0.0, np.zeros(8, dtype=np.complex128), 1e-9, 9)
    record = CirRecord(1, 0, 10.0, 0.0, 0.0, np.ones(8, dtype=np.complex128), 1e-9, 7)
    assert record.direction == (10.0, 0.0)
    assert len(record.period) == 7
    assert record.delay_axis()[1] == pytest.approx(1e-9)
