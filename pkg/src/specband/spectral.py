"""Discrete Fourier transform, periodogram, and kernel-smoothed spectral
matrix estimation.

All per-frequency arrays are stored in FFT output order; see
``FrequencyGrid.fft_indices`` for the permutation to ascending order.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .core import TWO_PI, FrequencyGrid, Kernel
from .errors import BandwidthTooSmall


@dataclass(frozen=True)
class DftResult:
    """Normalized DFT values J(omega_j), one row per grid frequency.

    ``values[k, p]`` is (2*pi*T)**-0.5 * sum_{t=1..T} Y[t, p] e^{-i t omega},
    stored in FFT order.
    """

    grid: FrequencyGrid
    values: np.ndarray
    epoch_id: int = None


@dataclass(frozen=True)
class PeriodogramSet:
    """Rank-1 periodogram matrices I(omega_j) = J(omega_j) J(omega_j)*."""

    grid: FrequencyGrid
    matrices: np.ndarray
    epoch_id: int = None


@dataclass(frozen=True)
class SpectralMatrixEstimate:
    """Kernel-smoothed spectral matrices, Hermitian at every frequency."""

    grid: FrequencyGrid
    matrices: np.ndarray
    kernel: Kernel
    epoch_id: int = None

    @property
    def n_components(self):
        return self.matrices.shape[1]


def compute_dft(series):
    """Normalized discrete Fourier transform of a demeaned epoch.

    Parameters
    ----------
    series : EpochSeries
        Demeaned automatically when the flag is unset (demeaning is
        idempotent).

    Returns
    -------
    DftResult
        Matches the direct O(T^2) sum with time origin t = 1 to within
        round-off; computed by FFT.
    """
    if not series.demeaned:
        series = series.demean()
    data = series.data
    T = data.shape[0]
    grid = FrequencyGrid(T)
    values = np.fft.fft(data, axis=0) / math.sqrt(TWO_PI * T)
    # the FFT indexes time from 0, the estimator from 1
    values *= np.exp(-1j * grid.fft_frequencies)[:, None]
    return DftResult(grid, values, series.epoch_id)


def compute_periodogram(dft):
    """Rank-1 outer-product periodogram at every grid frequency.

    Parameters
    ----------
    dft : DftResult

    Returns
    -------
    PeriodogramSet
        ``matrices[k]`` is the Hermitian PSD matrix J_k J_k*.
    """
    J = dft.values
    matrices = J[:, :, None] * np.conj(J[:, None, :])
    return PeriodogramSet(dft.grid, matrices, dft.epoch_id)


def smoothing_weights(kernel, T):
    """Discrete circular smoothing weights for a length-T grid.

    Parameters
    ----------
    kernel : Kernel
    T : int

    Returns
    -------
    offsets : ndarray of int
        Grid offsets l = -L..L.
    weights : ndarray of float
        Nonnegative weights summing to one, so a flat periodogram is
        reproduced exactly.

    Raises
    ------
    BandwidthTooSmall
        If fewer than 3 ordinates receive nonzero weight
        (bartlett_priestley only; daniell m = 0 degenerates to the
        identity by design).
    """
    if kernel.variant == "daniell":
        m = kernel.span_m
        if 2 * m + 1 > T:
            raise ValueError(f"daniell span 2*{m}+1 exceeds the grid length {T}")
        offsets = np.arange(-m, m + 1)
        return offsets, np.full(2 * m + 1, 1.0 / (2 * m + 1))

    h = kernel.bandwidth_h
    half = int(math.floor(T * h / 2.0))
    offsets = np.arange(-half, half + 1)
    weights = kernel.base_density(TWO_PI * offsets / (T * h)) / h
    nonzero = int(np.count_nonzero(weights > 0.0))
    if nonzero < 3:
        raise BandwidthTooSmall(
            f"bandwidth h={h:.6g} puts weight on {nonzero} of {T} ordinates; "
            f"need at least 3"
        )
    if len(offsets) > T:
        raise ValueError(
            f"bandwidth h={h:.6g} spans more than the whole {T}-point grid"
        )
    return offsets, weights / weights.sum()


def smooth_spectral_matrix(pgram, kernel):
    """Kernel-smoothed spectral matrix estimate.

    The smoother is a circular weighted average of periodogram matrices
    over neighboring Fourier frequencies: the daniell variant is the
    exact (2m+1)-point moving average; the bartlett_priestley variant
    applies its normalized weights by multiplication in the transform
    domain, which is O(T log T) at any bandwidth so a jitted loop has
    nothing to win there.

    Parameters
    ----------
    pgram : PeriodogramSet
    kernel : Kernel

    Returns
    -------
    SpectralMatrixEstimate
    """
    I = pgram.matrices
    T, d, _ = I.shape
    offsets, weights = smoothing_weights(kernel, T)
    if kernel.variant == "daniell":
        flat = I.reshape(T, d * d)
        smoothed = _accel.circ_mavg(flat, kernel.span_m).reshape(T, d, d)
    else:
        w_ext = np.zeros(T)
        w_ext[np.mod(offsets, T)] = weights
        transform = np.conj(np.fft.fft(w_ext))
        smoothed = np.fft.ifft(
            np.fft.fft(I, axis=0) * transform[:, None, None], axis=0
        )
    # remove round-off Hermitian asymmetry (exact no-op for the daniell path)
    smoothed = 0.5 * (smoothed + np.conj(np.transpose(smoothed, (0, 2, 1))))
    return SpectralMatrixEstimate(pgram.grid, smoothed, kernel, pgram.epoch_id)


def write_spectral_csv(estimate, path):
    """Dump a spectral estimate for external plotting.

    One row per (omega_j, r, s): columns omega, r, s, re, im, in
    ascending frequency order.
    """
    order = np.argsort(estimate.grid.fft_indices, kind="stable")
    freqs = estimate.grid.fft_frequencies[order]
    mats = estimate.matrices[order]
    d = estimate.n_components
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega", "r", "s", "re", "im"])
        for k in range(len(freqs)):
            for r in range(d):
                for s in range(d):
                    value = mats[k, r, s]
                    writer.writerow(
                        [f"{freqs[k]:.17g}", r + 1, s + 1,
                         f"{value.real:.17g}", f"{value.imag:.17g}"]
                    )
