"""Band energy and the frequency-band spectral ratio.

The band energy of a spectral estimate is the Riemann sum of the squared
Frobenius norm over grid frequencies in a half-open band; the ratio of a
band is twice its energy over the full two-sided total.  The statistic
is scale-invariant, invariant under orthogonal mixing, lies in [0, 1],
and sums to one exactly over any partition of (0, pi].
"""

from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, Band, band_fft_indices
from .errors import ZeroTotalEnergy


@dataclass(frozen=True)
class FsRatioResult:
    """Band ratio for one epoch and one band.

    ``ratio = 2 * band_energy / total_energy``, where ``band_energy``
    covers the positive-frequency band (lo, hi] and ``total_energy`` is
    the two-sided grid total (twice the energy of (0, pi]).
    """

    epoch_id: int
    band: Band
    ratio: float
    band_energy: float
    total_energy: float
    ci: tuple = None


def _energy_at(matrices, indices, T):
    block = matrices[indices]
    # vdot flattens and conjugates: sum of |entry|^2
    return (TWO_PI / T) * float(np.vdot(block, block).real)


def band_energy(est, band):
    """Riemann-sum band energy of a spectral estimate.

    Parameters
    ----------
    est : SpectralMatrixEstimate
    band : Band
        Must be in radians, inside (0, pi].

    Returns
    -------
    float
        (2*pi/T) * sum over grid frequencies in (lo, hi] of the squared
        Frobenius norm of the estimate.

    Raises
    ------
    EmptyBand
        If no grid frequency falls in the band.
    ValueError
        If the band is not in radians.
    """
    if band.unit != "radians":
        raise ValueError("band_energy needs a band in radians; convert first")
    T = est.grid.T
    indices = band_fft_indices(T, band.lo, band.hi)
    return _energy_at(est.matrices, indices, T)


def total_energy(est):
    """Two-sided total energy: twice the energy over (0, pi]."""
    T = est.grid.T
    indices = np.arange(1, T // 2 + 1)
    return 2.0 * _energy_at(est.matrices, indices, T)


def fs_ratio(est, band, ci=None):
    """Frequency-band spectral ratio of one epoch.

    Parameters
    ----------
    est : SpectralMatrixEstimate
    band : Band
        In radians, inside (0, pi].
    ci : tuple, optional
        Bootstrap (lower, upper) interval to attach.

    Returns
    -------
    FsRatioResult
        With ratio = 2 * band_energy / total_energy, clipped to [0, 1]
        only against floating-point overshoot.

    Raises
    ------
    ZeroTotalEnergy
        If the estimate is identically zero.
    """
    num = band_energy(est, band)
    tot = total_energy(est)
    if tot <= 0.0:
        raise ZeroTotalEnergy("total spectral energy is zero")
    ratio = min(max(2.0 * num / tot, 0.0), 1.0)
    epoch_id = est.epoch_id if est.epoch_id is not None else 0
    return FsRatioResult(epoch_id, band, ratio, num, tot,
                         tuple(ci) if ci is not None else None)


def pooled_ratio(results):
    """Energy-pooled band ratio of an epoch block.

    Sums band and total energies over the epochs before forming the
    ratio, so each epoch contributes in proportion to its total spectral
    energy.  This is the block-level analogue of ``fs_ratio`` and is the
    only coherent aggregate when epoch dimensions differ (the per-epoch
    spectral matrices cannot be averaged entrywise).

    Parameters
    ----------
    results : sequence of FsRatioResult
        Nonempty; all for the same band.

    Returns
    -------
    float
        2 * sum(band_energy) / sum(total_energy), clipped to [0, 1].

    Raises
    ------
    ZeroTotalEnergy
        If the pooled total energy is zero.
    """
    results = list(results)
    if not results:
        raise ValueError("pooled_ratio needs at least one result")
    num = sum(r.band_energy for r in results)
    tot = sum(r.total_energy for r in results)
    if tot <= 0.0:
        raise ZeroTotalEnergy("pooled total spectral energy is zero")
    return min(max(2.0 * num / tot, 0.0), 1.0)


@dataclass(frozen=True)
class RatioSummary:
    """Cross-epoch summary of ratio values for one band."""

    mean: float
    median: float
    sd: float
    ci_lower: float
    ci_upper: float


def summarize_values(values, cis=None):
    """Summarize raw ratio values (and optional per-epoch intervals).

    Parameters
    ----------
    values : sequence of float
        Nonempty ratio values, one per epoch.
    cis : sequence of (lower, upper), optional
        Per-epoch bootstrap intervals aligned with ``values``; when
        given, the summary CI averages the bounds, otherwise it is the
        empirical 2.5/97.5 percentile range of ``values``.

    Returns
    -------
    RatioSummary
    """
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        raise ValueError("summary needs at least one value")
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    if cis is not None:
        cis = list(cis)
        if len(cis) != values.size:
            raise ValueError("one interval per value required")
        lower = float(np.mean([c[0] for c in cis]))
        upper = float(np.mean([c[1] for c in cis]))
    else:
        lower = float(np.percentile(values, 2.5))
        upper = float(np.percentile(values, 97.5))
    return RatioSummary(
        mean=float(values.mean()),
        median=float(np.median(values)),
        sd=sd,
        ci_lower=lower,
        ci_upper=upper,
    )


def summarize_ratios(results):
    """Summarize FS-ratio results over an epoch range.

    Parameters
    ----------
    results : sequence of FsRatioResult
        Nonempty; all for the same band.

    Returns
    -------
    RatioSummary
        Mean, median, and sample SD of the ratios.  When every result
        carries a bootstrap interval the CI fields average those bounds,
        otherwise they are the empirical 2.5/97.5 percentiles of the
        ratios across epochs.
    """
    results = list(results)
    if not results:
        raise ValueError("summarize_ratios needs at least one result")
    cis = None
    if results and all(r.ci is not None for r in results):
        cis = [r.ci for r in results]
    return summarize_values([r.ratio for r in results], cis)
