"""Test for equality of two epochs' spectral density matrices on a band.

The statistic is the integrated squared Frobenius distance between the
two smoothed spectral matrices, computed from a joint fit so that the
plug-in centering and variance can account for any cross-correlation
between the epochs.  Under equality the standardized statistic is
asymptotically standard normal; the test rejects for large z.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import norm

from .core import (TWO_PI, Band, FrequencyGrid, Kernel, band_fft_indices,
                   band_to_radians)
from .errors import DegenerateVariance, DimensionMismatch, LengthMismatch
from .spectral import compute_dft, compute_periodogram, smooth_spectral_matrix


@dataclass(frozen=True)
class JointSpectralEstimate:
    """Smoothed spectral matrix of two column-stacked epochs.

    ``matrices`` has shape (T, d1 + d2, d1 + d2) in FFT frequency order;
    ``block(p, q)`` slices out the (p, q) epoch block, p, q in {1, 2}.
    """

    grid: FrequencyGrid
    matrices: np.ndarray
    kernel: Kernel
    d1: int
    d2: int
    epoch_ids: tuple

    def block(self, p, q):
        """The (T, d_p, d_q) cross-spectral block between epochs p and q."""
        sl = {1: slice(0, self.d1), 2: slice(self.d1, self.d1 + self.d2)}
        return self.matrices[:, sl[p], sl[q]]


def joint_spectral_estimate(epoch_a, epoch_b, kernel):
    """Smooth the periodogram of the column-stacked pair of epochs.

    Parameters
    ----------
    epoch_a, epoch_b : EpochSeries
        Must have equal length T; dimensions may differ.
    kernel : Kernel

    Returns
    -------
    JointSpectralEstimate

    Raises
    ------
    LengthMismatch
        If the epochs differ in length.
    """
    if epoch_a.n_samples != epoch_b.n_samples:
        raise LengthMismatch(
            f"epochs have lengths {epoch_a.n_samples} and "
            f"{epoch_b.n_samples}; the equality test needs equal T"
        )
    a = epoch_a if epoch_a.demeaned else epoch_a.demean()
    b = epoch_b if epoch_b.demeaned else epoch_b.demean()
    # column-stacking commutes with per-column demeaning, so the joint
    # DFT equals the two marginal DFTs side by side
    stacked = replace(a, data=np.hstack([a.data, b.data]))
    pgram = compute_periodogram(compute_dft(stacked))
    est = smooth_spectral_matrix(pgram, kernel)
    return JointSpectralEstimate(
        grid=est.grid,
        matrices=est.matrices,
        kernel=kernel,
        d1=epoch_a.n_components,
        d2=epoch_b.n_components,
        epoch_ids=(epoch_a.epoch_id, epoch_b.epoch_id),
    )


def _band_positions(joint, band):
    rad = band_to_radians(band, None)
    return band_fft_indices(joint.grid.T, rad.lo, rad.hi), rad


def d_statistic(joint, band):
    """Integrated squared Frobenius distance between the diagonal blocks.

    d_hat = (2*pi/T) * sum over grid frequencies in (lo, hi] of
    ||G11(w_j) - G22(w_j)||_F**2.

    Parameters
    ----------
    joint : JointSpectralEstimate
    band : Band
        In radians or cycles (hertz bands must be converted upstream
        where the sampling rate is known).

    Raises
    ------
    DimensionMismatch
        If the two epochs have different dimensions.
    EmptyBand
    """
    if joint.d1 != joint.d2:
        raise DimensionMismatch(
            f"cannot compare spectra of dimensions {joint.d1} and {joint.d2}"
        )
    positions, _ = _band_positions(joint, band)
    diff = joint.block(1, 1)[positions] - joint.block(2, 2)[positions]
    return TWO_PI / joint.grid.T * float(np.sum(np.abs(diff) ** 2))


def _band_sums(joint, positions):
    """(d_hat, Csum, S4sum) over the given FFT positions, with Riemann
    weights 2*pi/T folded in."""
    blocks = {(p, q): joint.block(p, q)[positions]
              for p in (1, 2) for q in (1, 2)}
    diff = blocks[(1, 1)] - blocks[(2, 2)]
    d_hat = np.sum(np.abs(diff) ** 2)

    tr = {k: np.trace(block, axis1=1, axis2=2) for k, block in blocks.items()}
    c_term = (np.abs(tr[(1, 1)]) ** 2 + np.abs(tr[(2, 2)]) ** 2
              - np.abs(tr[(1, 2)]) ** 2 - np.abs(tr[(2, 1)]) ** 2)

    s4 = np.zeros(len(positions))
    for p1 in (1, 2):
        for p2 in (1, 2):
            sign_a = 1.0 if p1 == p2 else -1.0
            for p3 in (1, 2):
                for p4 in (1, 2):
                    sign_b = 1.0 if p3 == p4 else -1.0
                    inner = np.einsum("jrs,jrs->j", blocks[(p1, p3)],
                                      np.conj(blocks[(p2, p4)]))
                    s4 += sign_a * sign_b * np.abs(inner) ** 2
    scale = TWO_PI / joint.grid.T
    return scale * float(d_hat), scale * float(np.sum(c_term)), \
        scale * float(np.sum(s4))


def _self_convolution(kernel, v, npts=2001):
    """gamma(v) = integral of K(u) K(u+v) du over the support overlap."""
    lo = max(-math.pi, -math.pi - v)
    hi = min(math.pi, math.pi - v)
    if hi <= lo:
        return 0.0
    u = np.linspace(lo, hi, npts)
    return float(trapezoid(kernel.base_density(u) * kernel.base_density(u + v),
                           u))


@lru_cache(maxsize=64)
def _kernel_constants_cached(variant, lo, hi):
    kernel = (Kernel.daniell(1) if variant == "daniell"
              else Kernel.bartlett_priestley(0.1))
    u = np.linspace(-math.pi, math.pi, 2000)
    a_const = float(trapezoid(kernel.base_density(u) ** 2, u))
    v = np.linspace(lo - math.pi, hi + math.pi, 2001)
    gamma_sq = np.array([_self_convolution(kernel, vi) ** 2 for vi in v])
    b_const = 4.0 * float(trapezoid(gamma_sq, v))
    return a_const, b_const


def kernel_constants(kernel, band):
    """Plug-in constants (A_K, B_K) of the base kernel density.

    A_K is the integral of K**2 over [-pi, pi] (2000-point trapezoid);
    B_K is 4 times the integral of the squared self-convolution of K
    over (lo - pi, hi + pi), where (lo, hi) is the band in radians.
    Both depend only on the kernel variant and the band, so results are
    cached.

    Parameters
    ----------
    kernel : Kernel
    band : Band
        In radians or cycles.

    Returns
    -------
    (float, float)
    """
    rad = band_to_radians(band, None)
    return _kernel_constants_cached(kernel.variant, rad.lo, rad.hi)


@dataclass(frozen=True)
class EqualityTestResult:
    """Outcome of the spectra-equality test on one band.

    ``z`` is the standardized statistic, asymptotically N(0, 1) under
    equality; ``p_value`` is the upper-tail probability, so small values
    reject.  ``d_hat`` is the raw integrated distance, ``mu_hat`` and
    ``sigma2_hat`` the plug-in centering and variance.
    """

    epoch_ids: tuple
    band: Band
    kernel: Kernel
    d_hat: float
    mu_hat: float
    sigma2_hat: float
    z: float
    p_value: float

    def describe(self):
        """JSON-ready summary."""
        return {
            "epoch_ids": list(self.epoch_ids),
            "band": self.band.label(),
            "kernel": self.kernel.describe(),
            "d_hat": self.d_hat,
            "mu_hat": self.mu_hat,
            "sigma2_hat": self.sigma2_hat,
            "z": self.z,
            "p_value": self.p_value,
        }


def equality_test(epoch_a, epoch_b, band, kernel=None):
    """Test whether two epochs share the same spectral matrix on a band.

    The standardized statistic is

        z = (2*pi*T*sqrt(h)*d_hat - mu_hat/sqrt(h)) / sigma_hat

    with h the kernel's effective bandwidth, d_hat from
    :func:`d_statistic`, and plug-in moments

        mu_hat     = 4*pi**2 * A_K * (2*pi/T) * sum_j C(w_j)
        sigma2_hat = 8*pi**4 * B_K * (2*pi/T) * sum_j S4(w_j)

    where C collects the squared block traces and S4 the fourth-order
    block inner products of the joint estimate, both summed over the
    band's positive grid frequencies.

    Parameters
    ----------
    epoch_a, epoch_b : EpochSeries
        Equal length and equal dimension.
    band : Band
    kernel : Kernel, optional
        Defaults to the quadratic kernel with h = T**-0.4.

    Returns
    -------
    EqualityTestResult

    Raises
    ------
    LengthMismatch, DimensionMismatch, EmptyBand
    DegenerateVariance
        If sigma2_hat <= 0 (reported, never clamped).  Bitwise-identical
        epochs land here: every block of the joint estimate coincides,
        so both plug-in moments vanish.
    """
    if epoch_a.n_components != epoch_b.n_components:
        raise DimensionMismatch(
            f"cannot compare spectra of dimensions {epoch_a.n_components} "
            f"and {epoch_b.n_components}"
        )
    T = epoch_a.n_samples
    if kernel is None:
        kernel = Kernel.default_bartlett_priestley(T)
    joint = joint_spectral_estimate(epoch_a, epoch_b, kernel)
    rad = band_to_radians(band, epoch_a.sampling_rate_hz)
    positions = band_fft_indices(T, rad.lo, rad.hi)
    d_hat, c_sum, s4_sum = _band_sums(joint, positions)

    a_const, b_const = kernel_constants(kernel, rad)
    h = kernel.effective_bandwidth(T)
    mu_hat = 4.0 * math.pi ** 2 * a_const * c_sum
    sigma2_hat = 8.0 * math.pi ** 4 * b_const * s4_sum
    if sigma2_hat <= 0.0:
        raise DegenerateVariance(sigma2_hat)
    z = (TWO_PI * T * math.sqrt(h) * d_hat - mu_hat / math.sqrt(h)) \
        / math.sqrt(sigma2_hat)
    return EqualityTestResult(
        epoch_ids=(epoch_a.epoch_id, epoch_b.epoch_id),
        band=rad,
        kernel=kernel,
        d_hat=d_hat,
        mu_hat=mu_hat,
        sigma2_hat=sigma2_hat,
        z=float(z),
        p_value=float(norm.sf(z)),
    )
