"""Dataset-level orchestration: estimate once per epoch, evaluate many
bands, optionally attach bootstrap intervals, and fan epochs out over a
process pool.  All workers are pure functions of their arguments, so
results are independent of scheduling order.
"""

import os
from concurrent.futures import ProcessPoolExecutor

from .bootstrap import bootstrap_ratios, percentile_interval, resolve_block_length
from .coherence import prewhiten, squared_coherence_band
from .core import Kernel, band_to_radians
from .eqtest import equality_test
from .fsratio import fs_ratio
from .spectral import compute_dft, compute_periodogram, smooth_spectral_matrix


def default_workers():
    """Worker-pool size when the caller does not choose one."""
    return max(os.cpu_count() or 1, 1)


def spectral_estimate(series, kernel=None):
    """Smoothed spectral matrix of one epoch (DFT, periodogram, smooth).

    Parameters
    ----------
    series : EpochSeries
    kernel : Kernel, optional
        Defaults to the flat kernel with m = ceil(sqrt(T)).
    """
    if kernel is None:
        kernel = Kernel.default(series.n_samples)
    return smooth_spectral_matrix(
        compute_periodogram(compute_dft(series)), kernel)


def ratios_for_epoch(series, bands, kernel=None, bootstrap=None):
    """FS-ratios of one epoch on several bands.

    The spectral estimate is computed once and shared across bands; with
    a bootstrap config, every band's interval reuses the same B
    resamples.

    Parameters
    ----------
    series : EpochSeries
    bands : sequence of Band
    kernel : Kernel, optional
    bootstrap : BootstrapConfig, optional
        When given, percentile intervals are attached to each result.

    Returns
    -------
    list of FsRatioResult, aligned with ``bands``.
    """
    if kernel is None:
        kernel = Kernel.default(series.n_samples)
    est = spectral_estimate(series, kernel)
    rad_bands = [band_to_radians(b, series.sampling_rate_hz) for b in bands]
    intervals = [None] * len(rad_bands)
    if bootstrap is not None:
        if bootstrap.replications_B < 50:
            raise ValueError("interval output needs replications_B >= 50")
        ell = resolve_block_length(series, bootstrap)
        samples = bootstrap_ratios(series, rad_bands, kernel, bootstrap,
                                   block_length=ell)
        intervals = [percentile_interval(samples[:, j],
                                         bootstrap.confidence_level)
                     for j in range(len(rad_bands))]
    return [fs_ratio(est, band, ci=interval)
            for band, interval in zip(rad_bands, intervals)]


def _ratio_worker(args):
    series, bands, kernel, bootstrap = args
    return ratios_for_epoch(series, bands, kernel, bootstrap)


def analyze_dataset(epochs, bands, kernel=None, bootstrap=None, workers=None):
    """FS-ratios for every epoch of a dataset, in epoch order.

    Parameters
    ----------
    epochs : sequence of EpochSeries
    bands : sequence of Band
    kernel : Kernel, optional
        One kernel for all epochs; None picks the per-epoch default.
    bootstrap : BootstrapConfig, optional
    workers : int, optional
        Process count; 1 runs inline (no pool).

    Returns
    -------
    list of list of FsRatioResult
        Outer index epochs, inner index bands.
    """
    jobs = [(series, tuple(bands), kernel, bootstrap) for series in epochs]
    workers = default_workers() if workers is None else max(int(workers), 1)
    if workers == 1 or len(jobs) <= 1:
        return [_ratio_worker(job) for job in jobs]
    chunk = max(len(jobs) // (4 * workers), 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_ratio_worker, jobs, chunksize=chunk))


def _coherence_worker(args):
    series, bands, kernel, prewhitened = args
    if prewhitened:
        series = prewhiten(series)
    est = spectral_estimate(series, kernel)
    rad = [band_to_radians(b, series.sampling_rate_hz) for b in bands]
    return [squared_coherence_band(est, band) for band in rad]


def coherence_dataset(epochs, bands, kernel=None, prewhitened=False,
                      workers=None):
    """Band-averaged squared coherence for every epoch.

    Parameters
    ----------
    epochs : sequence of EpochSeries
    bands : sequence of Band
    kernel : Kernel, optional
    prewhitened : bool
        Apply lag-0 prewhitening before estimating.
    workers : int, optional

    Returns
    -------
    list of list of CoherenceSummary
    """
    jobs = [(series, tuple(bands), kernel, prewhitened) for series in epochs]
    workers = default_workers() if workers is None else max(int(workers), 1)
    if workers == 1 or len(jobs) <= 1:
        return [_coherence_worker(job) for job in jobs]
    chunk = max(len(jobs) // (4 * workers), 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_coherence_worker, jobs, chunksize=chunk))


def _eqtest_worker(args):
    epoch_a, epoch_b, band, kernel = args
    return equality_test(epoch_a, epoch_b, band, kernel)


def pairwise_tests(epochs_by_id, pairs, band, kernel=None, workers=None):
    """Equality tests for a list of epoch-id pairs.

    Parameters
    ----------
    epochs_by_id : dict of int -> EpochSeries
    pairs : sequence of (int, int)
    band : Band
    kernel : Kernel, optional
    workers : int, optional

    Returns
    -------
    list of EqualityTestResult, in input pair order.
    """
    jobs = []
    for i, j in pairs:
        if i not in epochs_by_id or j not in epochs_by_id:
            missing = i if i not in epochs_by_id else j
            raise KeyError(f"epoch id {missing} not present in the dataset")
        jobs.append((epochs_by_id[i], epochs_by_id[j], band, kernel))
    workers = default_workers() if workers is None else max(int(workers), 1)
    if workers == 1 or len(jobs) <= 1:
        return [_eqtest_worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_eqtest_worker, jobs))
