"""Domain types shared by every module: epoch data, frequency grid,
frequency bands, smoothing kernels, and dataset ingestion."""

import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyBand, NonFiniteValue

TWO_PI = 2.0 * math.pi

#: Recognized band units.
BAND_UNITS = ("radians", "cycles", "hertz")


@dataclass(frozen=True)
class EpochSeries:
    """One epoch of a multivariate time series.

    Parameters
    ----------
    epoch_id : int
        1-based epoch index.
    data : ndarray, shape (T, d)
        Rows are time points, columns are components; T >= 4, d >= 1,
        all entries finite.
    sampling_rate_hz : float
        Positive sampling rate; used only for band-unit conversion.
    demeaned : bool
        True once the per-column sample mean has been removed.
    """

    epoch_id: int
    data: np.ndarray
    sampling_rate_hz: float
    demeaned: bool = False

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError("epoch data must be a 2-d array (time x components)")
        if data.shape[0] < 4:
            raise ValueError(f"epoch needs T >= 4 rows, got {data.shape[0]}")
        if data.shape[1] < 1:
            raise ValueError("epoch needs at least one component column")
        if not np.all(np.isfinite(data)):
            row, col = np.argwhere(~np.isfinite(data))[0]
            raise NonFiniteValue("", int(row) + 1, int(col) + 1)
        if int(self.epoch_id) < 1:
            raise ValueError("epoch_id must be a positive integer")
        if not (float(self.sampling_rate_hz) > 0.0):
            raise ValueError("sampling_rate_hz must be positive")
        object.__setattr__(self, "epoch_id", int(self.epoch_id))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "sampling_rate_hz", float(self.sampling_rate_hz))
        object.__setattr__(self, "demeaned", bool(self.demeaned))

    @property
    def n_samples(self):
        """Series length T."""
        return self.data.shape[0]

    @property
    def n_components(self):
        """Component dimension d."""
        return self.data.shape[1]

    def demean(self):
        """Return a copy with per-column sample means removed (idempotent)."""
        if self.demeaned:
            return self
        centered = self.data - self.data.mean(axis=0)
        return replace(self, data=centered, demeaned=True)


@dataclass(frozen=True)
class FrequencyGrid:
    """The Fourier frequencies omega_j = 2*pi*j/T of a length-T series.

    Grid indices run j = -floor((T-1)/2), ..., floor(T/2): exactly T
    points, symmetric about zero except for the unpaired ordinate at pi
    when T is even.  Arrays produced by the spectral module are stored in
    FFT output order, where position k holds index j = k for
    k <= floor(T/2) and j = k - T above; ``fft_indices`` documents the
    permutation.
    """

    T: int

    def __post_init__(self):
        if int(self.T) < 1:
            raise ValueError("grid length T must be positive")
        object.__setattr__(self, "T", int(self.T))

    @property
    def indices(self):
        """Grid indices j in ascending order."""
        return np.arange(-((self.T - 1) // 2), self.T // 2 + 1)

    @property
    def frequencies(self):
        """Frequencies 2*pi*j/T in ascending order (radians)."""
        return TWO_PI * self.indices / self.T

    @property
    def fft_indices(self):
        """Grid indices j in FFT output order."""
        k = np.arange(self.T)
        return np.where(k <= self.T // 2, k, k - self.T)

    @property
    def fft_frequencies(self):
        """Frequencies 2*pi*j/T in FFT output order (radians)."""
        return TWO_PI * self.fft_indices / self.T

    @property
    def n_positive(self):
        """Number of strictly positive grid frequencies (those in (0, pi])."""
        return self.T // 2


def _snap_to_integer(u):
    # guards band edges like 0.08*T/(2*pi/(2*pi)) that miss an integer
    # by floating-point dust in either direction
    nearest = round(u)
    if abs(u - nearest) <= 1e-9 * max(1.0, abs(u)):
        return float(nearest)
    return u


def band_fft_indices(T, lo, hi):
    """FFT positions of the grid frequencies in the half-open band (lo, hi].

    Parameters
    ----------
    T : int
        Series length.
    lo, hi : float
        Band edges in radians, 0 <= lo < hi <= pi.

    Returns
    -------
    ndarray of int
        Positive grid indices j with lo < 2*pi*j/T <= hi (these coincide
        with FFT array positions).

    Raises
    ------
    EmptyBand
        If no grid frequency falls inside the band.
    """
    u_lo = _snap_to_integer(lo * T / TWO_PI)
    u_hi = _snap_to_integer(hi * T / TWO_PI)
    j_first = max(int(math.floor(u_lo)) + 1, 1)
    j_last = min(int(math.floor(u_hi)), T // 2)
    if j_first > j_last:
        raise EmptyBand(
            f"band ({lo:.6g}, {hi:.6g}] radians contains no grid frequency "
            f"at T={T}"
        )
    return np.arange(j_first, j_last + 1)


@dataclass(frozen=True)
class Band:
    """A frequency interval, treated as half-open (lo, hi] on the grid.

    Parameters
    ----------
    lo, hi : float
        Band edges with 0 <= lo < hi.
    unit : {"radians", "cycles", "hertz"}
        Unit of the edges.  Upper limits: pi (radians), 0.5 (cycles),
        Nyquist (hertz, checked at conversion time).
    """

    lo: float
    hi: float
    unit: str = "radians"

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        unit = str(self.unit).lower()
        if unit not in BAND_UNITS:
            raise ValueError(f"unknown band unit {self.unit!r}")
        if not (0.0 <= lo < hi):
            raise ValueError(f"band needs 0 <= lo < hi, got ({lo}, {hi})")
        cap = {"radians": math.pi, "cycles": 0.5, "hertz": math.inf}[unit]
        if hi > cap * (1.0 + 1e-12):
            raise ValueError(f"band upper edge {hi} exceeds {cap} {unit}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "unit", unit)

    def label(self):
        """Compact text form, e.g. ``0.08:0.16:cycles``."""
        return f"{self.lo:.6g}:{self.hi:.6g}:{self.unit}"


def band_to_radians(band, sampling_rate_hz=None):
    """Convert a band to radians.

    Parameters
    ----------
    band : Band
    sampling_rate_hz : float, optional
        Required when ``band.unit`` is hertz.

    Returns
    -------
    Band
        The same interval with ``unit="radians"``.

    Raises
    ------
    ValueError
        If a hertz band lacks a sampling rate or exceeds the Nyquist
        frequency.
    """
    if band.unit == "radians":
        return band
    if band.unit == "cycles":
        return Band(TWO_PI * band.lo, TWO_PI * band.hi, "radians")
    if sampling_rate_hz is None:
        raise ValueError("hertz bands need a sampling rate for conversion")
    nyquist = float(sampling_rate_hz) / 2.0
    if band.hi > nyquist * (1.0 + 1e-12):
        raise ValueError(
            f"band upper edge {band.hi} Hz exceeds the Nyquist frequency "
            f"{nyquist} Hz"
        )
    scale = TWO_PI / float(sampling_rate_hz)
    return Band(scale * band.lo, scale * band.hi, "radians")


@dataclass(frozen=True)
class Kernel:
    """Smoothing kernel for the periodogram.

    Two variants: ``bartlett_priestley`` with a real bandwidth
    0 < h < pi, and ``daniell`` with an integer half-span m >= 0 acting
    as a (2m+1)-point circular moving average.  For plug-in constants
    both are represented by a base density on [-pi, pi] scaled to an
    effective bandwidth: h itself for bartlett_priestley, (2m+1)/T for
    daniell (the value that makes the discrete and continuous
    squared-weight sums agree exactly).
    """

    variant: str
    bandwidth_h: float = None
    span_m: int = None

    def __post_init__(self):
        variant = str(self.variant).lower()
        if variant not in ("bartlett_priestley", "daniell"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        object.__setattr__(self, "variant", variant)
        if variant == "bartlett_priestley":
            if self.bandwidth_h is None:
                raise ValueError("bartlett_priestley kernel needs bandwidth_h")
            h = float(self.bandwidth_h)
            if not (0.0 < h < math.pi):
                raise ValueError(f"bandwidth_h must lie in (0, pi), got {h}")
            object.__setattr__(self, "bandwidth_h", h)
            object.__setattr__(self, "span_m", None)
        else:
            if self.span_m is None:
                raise ValueError("daniell kernel needs span_m")
            m = int(self.span_m)
            if m < 0:
                raise ValueError(f"span_m must be >= 0, got {m}")
            object.__setattr__(self, "span_m", m)
            object.__setattr__(self, "bandwidth_h", None)

    @classmethod
    def bartlett_priestley(cls, bandwidth_h):
        """Quadratic-density kernel with the given bandwidth."""
        return cls("bartlett_priestley", bandwidth_h=bandwidth_h)

    @classmethod
    def daniell(cls, span_m):
        """Flat (2m+1)-point moving-average kernel."""
        return cls("daniell", span_m=span_m)

    @classmethod
    def default(cls, T):
        """Default smoother for a length-T epoch: daniell m = ceil(sqrt(T))."""
        return cls.daniell(int(math.ceil(math.sqrt(T))))

    @classmethod
    def default_bartlett_priestley(cls, T):
        """Default quadratic kernel for a length-T epoch: h = T**-0.4."""
        return cls.bartlett_priestley(float(T) ** -0.4)

    def base_density(self, u):
        """Evaluate the base kernel density on [-pi, pi] (zero outside)."""
        u = np.asarray(u, dtype=np.float64)
        inside = np.abs(u) <= math.pi
        if self.variant == "daniell":
            return np.where(inside, 1.0 / TWO_PI, 0.0)
        val = 3.0 / (4.0 * math.pi) * (1.0 - (u / math.pi) ** 2)
        return np.where(inside, np.maximum(val, 0.0), 0.0)

    def effective_bandwidth(self, T):
        """Bandwidth pairing with ``base_density`` for plug-in constants."""
        if self.variant == "daniell":
            return (2 * self.span_m + 1) / float(T)
        return self.bandwidth_h

    def describe(self):
        """JSON-ready summary for run records."""
        out = {"variant": self.variant}
        if self.variant == "daniell":
            out["span_m"] = self.span_m
        else:
            out["bandwidth_h"] = self.bandwidth_h
        return out


def load_epoch_dataset(manifest_path, header=False):
    """Load an epoch dataset described by a JSON manifest.

    The manifest has the form
    ``{"sampling_rate_hz": r, "epochs": [{"id": i, "path": p}, ...]}``
    with CSV paths resolved relative to the manifest's directory.  Each
    CSV holds one epoch, rows = time, columns = components; column means
    are removed on load.

    Parameters
    ----------
    manifest_path : str or Path
    header : bool
        Skip one header line in each CSV.

    Returns
    -------
    list of EpochSeries
        In manifest order; dimensions may differ across epochs.
    """
    manifest_path = os.fspath(manifest_path)
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    try:
        rate = float(manifest["sampling_rate_hz"])
        entries = list(manifest["epochs"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{manifest_path}: malformed manifest: {exc}") from exc
    base = os.path.dirname(os.path.abspath(manifest_path))

    epochs = []
    for entry in entries:
        epoch_id = int(entry["id"])
        path = os.path.join(base, str(entry["path"]))
        epochs.append(_load_epoch_csv(epoch_id, path, rate, header))
    return epochs


def _load_epoch_csv(epoch_id, path, sampling_rate_hz, header):
    skip = 1 if header else 0
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2,
                          dtype=np.float64)
    except ValueError as exc:
        # non-numeric cell or ragged rows; loadtxt names the line
        raise ValueError(f"{path}: {exc}") from exc
    if data.shape[0] < 4:
        raise ValueError(f"{path}: epoch needs T >= 4 rows, got {data.shape[0]}")
    if not np.all(np.isfinite(data)):
        row, col = np.argwhere(~np.isfinite(data))[0]
        raise NonFiniteValue(path, int(row) + 1 + skip, int(col) + 1)
    series = EpochSeries(epoch_id, data, sampling_rate_hz)
    return series.demean()
