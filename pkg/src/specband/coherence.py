"""Band-averaged squared coherence and lag-0 prewhitening diagnostics."""

from dataclasses import dataclass, replace

import numpy as np

from .core import Band, band_fft_indices, band_to_radians
from .errors import SingularCovariance, ZeroDiagonalSpectrum

#: Relative eigenvalue floor below which the lag-0 covariance is treated
#: as singular.
_SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class CoherenceSummary:
    """Mean off-diagonal squared coherence of one epoch on one band."""

    epoch_id: int
    band: Band
    mean_offdiag_coherence: float


def squared_coherence_band(est, band):
    """Average squared coherence over a band and all component pairs.

    For each grid frequency in the band and each unordered pair r < s,
    the squared coherence is |f_rs|**2 / (f_rr * f_ss); the summary is
    the plain average over frequencies and pairs.

    Parameters
    ----------
    est : SpectralMatrixEstimate
        Needs d >= 2.
    band : Band
        Radians or cycles.

    Returns
    -------
    CoherenceSummary

    Raises
    ------
    ZeroDiagonalSpectrum
        If any diagonal spectral density vanishes on the band.
    EmptyBand
    """
    d = est.n_components
    if d < 2:
        raise ValueError("coherence needs at least two components")
    rad = band_to_radians(band, None)
    positions = band_fft_indices(est.grid.T, rad.lo, rad.hi)
    block = est.matrices[positions]
    diag = np.real(np.einsum("jrr->jr", block))
    if np.min(diag) <= 0.0:
        raise ZeroDiagonalSpectrum(
            "a diagonal spectral density is not strictly positive on the band"
        )
    denom = diag[:, :, None] * diag[:, None, :]
    coh = np.abs(block) ** 2 / denom
    r, s = np.triu_indices(d, k=1)
    mean = float(np.mean(coh[:, r, s]))
    return CoherenceSummary(epoch_id=est.epoch_id if est.epoch_id else 0,
                            band=rad, mean_offdiag_coherence=mean)


def prewhiten(series):
    """Remove contemporaneous correlation with the symmetric inverse root.

    Multiplies each row by the inverse symmetric square root of the
    sample lag-0 covariance, so the output's sample covariance is the
    identity.  The input is demeaned first (the covariance is central).

    Parameters
    ----------
    series : EpochSeries

    Returns
    -------
    EpochSeries
        Same shape; demeaned flag set.

    Raises
    ------
    SingularCovariance
        If the smallest covariance eigenvalue is below 1e-10 times the
        largest.
    """
    centered = series if series.demeaned else series.demean()
    x = centered.data
    cov = x.T @ x / x.shape[0]
    vals, vecs = np.linalg.eigh(cov)
    if vals[0] <= _SINGULAR_RTOL * max(vals[-1], 0.0) or vals[-1] <= 0.0:
        raise SingularCovariance(float(vals[0]))
    inv_root = (vecs / np.sqrt(vals)[None, :]) @ vecs.T
    return replace(centered, data=x @ inv_root, demeaned=True)
