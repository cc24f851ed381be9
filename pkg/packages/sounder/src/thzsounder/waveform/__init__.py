from .correlator import add_noise, average_cirs, complex_noise, correlate, mean_power_db
from .kernel import delay_kernel, fit_length, fractional_shift, symmetric_bins
from .record import CirRecord
from .zadoff_chu import ZcSequence, generate_zc, zc_spectrum

__all__ = [
    "add_noise",
    "average_cirs",
    "complex_noise",
    "correlate",
    "mean_power_db",
    "delay_kernel",
    "fit_length",
    "fractional_shift",
    "symmetric_bins",
    "CirRecord",
    "ZcSequence",
    "generate_zc",
    "zc_spectrum",
]
