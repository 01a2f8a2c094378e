"""Frequency-band analysis of multivariate time series of varying
dimension: smoothed spectral-matrix estimation, dimension-blind band
ratios, spectra-equality testing, block-bootstrap intervals, coherence
diagnostics, and simulation designs to exercise all of it.
"""

__version__ = "0.1.0"

from .bootstrap import (BootstrapConfig, bootstrap_ci, bootstrap_ratios,
                        select_block_length, stationary_bootstrap_resample)
from .coherence import CoherenceSummary, prewhiten, squared_coherence_band
from .core import (Band, EpochSeries, FrequencyGrid, Kernel,
                   band_fft_indices, band_to_radians, load_epoch_dataset)
from .eqtest import (EqualityTestResult, d_statistic, equality_test,
                     joint_spectral_estimate, kernel_constants)
from .errors import (BandwidthTooSmall, DegenerateVariance,
                     DimensionMismatch, EmptyBand, LengthMismatch,
                     NonFiniteValue, NonstationaryCoefficients,
                     SeriesTooShort, SingularCovariance, SpecbandError,
                     ZeroDiagonalSpectrum, ZeroTotalEnergy)
from .fsratio import (FsRatioResult, RatioSummary, band_energy, fs_ratio,
                      pooled_ratio, summarize_ratios, summarize_values,
                      total_energy)
from .pipeline import (analyze_dataset, coherence_dataset, pairwise_tests,
                       ratios_for_epoch, spectral_estimate)
from .simulate import (SchemeConfig, ar2_true_spectrum, generate_scheme,
                       random_orthogonal, simulate_ar2_epoch)
from .spectral import (SpectralMatrixEstimate, compute_dft,
                       compute_periodogram, smooth_spectral_matrix,
                       smoothing_weights, write_spectral_csv)

__all__ = [
    "__version__",
    # core types
    "EpochSeries", "FrequencyGrid", "Band", "Kernel",
    "band_fft_indices", "band_to_radians", "load_epoch_dataset",
    # spectral estimation
    "compute_dft", "compute_periodogram", "smooth_spectral_matrix",
    "smoothing_weights", "SpectralMatrixEstimate", "write_spectral_csv",
    "spectral_estimate",
    # band ratios
    "FsRatioResult", "RatioSummary", "band_energy", "total_energy",
    "fs_ratio", "pooled_ratio", "summarize_ratios", "summarize_values",
    # equality test
    "EqualityTestResult", "joint_spectral_estimate", "d_statistic",
    "kernel_constants", "equality_test",
    # bootstrap
    "BootstrapConfig", "stationary_bootstrap_resample",
    "select_block_length", "bootstrap_ci", "bootstrap_ratios",
    # coherence
    "CoherenceSummary", "squared_coherence_band", "prewhiten",
    # simulation
    "SchemeConfig", "generate_scheme", "simulate_ar2_epoch",
    "ar2_true_spectrum", "random_orthogonal",
    # dataset pipeline
    "analyze_dataset", "ratios_for_epoch", "coherence_dataset",
    "pairwise_tests",
    # errors
    "SpecbandError", "NonFiniteValue", "EmptyBand", "ZeroTotalEnergy",
    "BandwidthTooSmall", "DimensionMismatch", "LengthMismatch",
    "DegenerateVariance", "SeriesTooShort", "SingularCovariance",
    "ZeroDiagonalSpectrum", "NonstationaryCoefficients",
]
