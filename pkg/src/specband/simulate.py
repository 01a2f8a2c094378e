"""Epoch generators for the built-in simulation designs, plus the
closed-form AR(2) spectrum used as a testing oracle.

Five designs ship with the CLI:

* ``ex21a`` / ``ex21b``: univariate epochs that switch from an AR(1)
  (coefficient +0.9 / -0.9) to an AR(2) (0.25, -0.75) at the changepoint;
* ``s1``: epochs of random dimension driven by a shared AR(2) resonance
  whose peak frequency jumps at the changepoint, white innovations;
* ``s2``: as s1 with Toeplitz-correlated innovations;
* ``s3``: as s1 but observed through a fixed random orthogonal mixing
  matrix (one per regime) and truncated to a per-epoch dimension.

All randomness flows through counter-based generators keyed by
(seed, stream, index), so epochs can be generated independently, in any
order, on any worker, with identical output.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from . import _accel
from .core import EpochSeries
from .errors import NonstationaryCoefficients

#: Epoch-parameter stream tag (one substream per epoch).
_STREAM_EPOCH = 1
#: Mixing-matrix stream tag (one substream per regime).
_STREAM_MIXING = 2

SCHEME_NAMES = ("ex21a", "ex21b", "s1", "s2", "s3")

#: Default resonance angles: spectral peak at 0.08 cycles before the
#: changepoint and 0.40 cycles after.
THETA_PRE_DEFAULT = 4.0 * math.pi / 25.0
THETA_POST_DEFAULT = 4.0 * math.pi / 5.0


@dataclass(frozen=True)
class SchemeConfig:
    """Configuration of one simulated dataset.

    Parameters
    ----------
    scheme : {"ex21a", "ex21b", "s1", "s2", "s3"}
    N : int
        Number of epochs.
    T : int
        Samples per epoch.
    dim_range : (int, int)
        Inclusive bounds for the per-epoch dimension draw (s1/s2: series
        dimension; s3: truncation dimension).
    xi_range : (float, float)
        Uniform range of the AR(2) root modulus, inside (0, 1).
    theta_pre, theta_post : float
        Resonance angle before/after the changepoint (radians).
    changepoint : int
        First epoch index of the post regime (epochs are 1-based, so
        epochs i < changepoint are pre).
    rho : float
        Adjacent-component innovation correlation (s2 only).
    fixed_p : int
        Latent dimension of the mixed design (s3 only).
    seed : int
        64-bit seed; every draw derives from it.
    sampling_rate_hz : float
        Recorded on each epoch; defaults to T (one-second epochs).
    """

    scheme: str
    N: int
    T: int
    dim_range: tuple = (2, 30)
    xi_range: tuple = (0.8, 0.98)
    theta_pre: float = THETA_PRE_DEFAULT
    theta_post: float = THETA_POST_DEFAULT
    changepoint: int = None
    rho: float = 0.4
    fixed_p: int = 30
    seed: int = 0
    sampling_rate_hz: float = None

    def __post_init__(self):
        scheme = str(self.scheme).lower()
        if scheme not in SCHEME_NAMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        object.__setattr__(self, "scheme", scheme)
        if int(self.N) < 1 or int(self.T) < 4:
            raise ValueError("need N >= 1 epochs and T >= 4 samples")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "T", int(self.T))
        lo, hi = (int(self.dim_range[0]), int(self.dim_range[1]))
        if not (1 <= lo <= hi):
            raise ValueError(f"bad dimension range ({lo}, {hi})")
        object.__setattr__(self, "dim_range", (lo, hi))
        xlo, xhi = (float(self.xi_range[0]), float(self.xi_range[1]))
        if not (0.0 < xlo <= xhi < 1.0):
            raise ValueError("xi_range must sit inside (0, 1)")
        object.__setattr__(self, "xi_range", (xlo, xhi))
        if self.changepoint is None:
            default = 300 if scheme.startswith("ex21") else self.N // 2
            object.__setattr__(self, "changepoint", int(default))
        else:
            object.__setattr__(self, "changepoint", int(self.changepoint))
        if self.sampling_rate_hz is None:
            object.__setattr__(self, "sampling_rate_hz", float(self.T))
        else:
            object.__setattr__(self, "sampling_rate_hz",
                               float(self.sampling_rate_hz))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "fixed_p", int(self.fixed_p))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "theta_pre", float(self.theta_pre))
        object.__setattr__(self, "theta_post", float(self.theta_post))

    @classmethod
    def for_scheme(cls, scheme, seed, **overrides):
        """Config with the conventional N and T for the named scheme."""
        scheme = str(scheme).lower()
        defaults = {"N": 600, "T": 1000} if scheme.startswith("ex21") \
            else {"N": 500, "T": 1000}
        defaults.update(overrides)
        return cls(scheme=scheme, seed=seed, **defaults)


def _stream(seed, *key):
    """Counter-based generator for an independent, order-free substream."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def ar2_stationarity_roots(phi1, phi2):
    """Roots of 1 - phi1 z - phi2 z^2; all must lie outside the unit circle."""
    coeffs = np.array([-float(phi2), -float(phi1), 1.0])
    if np.allclose(coeffs[:2], 0.0):
        return np.array([], dtype=np.complex128)
    return np.roots(coeffs)


def _check_stationary(phi1, phi2):
    roots = ar2_stationarity_roots(phi1, phi2)
    if roots.size and np.min(np.abs(roots)) <= 1.0 + 1e-12:
        raise NonstationaryCoefficients(
            f"characteristic root inside the unit circle for "
            f"(phi1, phi2) = ({phi1:.6g}, {phi2:.6g})"
        )


def ar2_true_spectrum(phi1, phi2, noise_sd, omega):
    """Closed-form spectral density of a univariate AR(2) process.

    Parameters
    ----------
    phi1, phi2 : float
        Autoregressive coefficients; must be stationary.
    noise_sd : float
        Innovation standard deviation.
    omega : float or ndarray
        Frequencies in radians.

    Returns
    -------
    float or ndarray
        noise_sd**2 / (2*pi * |1 - phi1 e^{-iw} - phi2 e^{-2iw}|**2).

    Raises
    ------
    NonstationaryCoefficients
    """
    _check_stationary(phi1, phi2)
    z = np.exp(-1j * np.asarray(omega, dtype=np.float64))
    denom = np.abs(1.0 - phi1 * z - phi2 * z * z) ** 2
    return float(noise_sd) ** 2 / (2.0 * math.pi * denom)


def resonance_coefficients(xi, theta):
    """AR(2) pair (2*xi*cos(theta), -xi**2) with peak near theta."""
    return 2.0 * float(xi) * math.cos(float(theta)), -float(xi) ** 2


def _innovation_factor(noise_cov):
    """Lower-triangular-ish factor L with L L' = noise_cov."""
    try:
        return np.linalg.cholesky(noise_cov)
    except np.linalg.LinAlgError:
        # PSD but rank-deficient (or zero) covariance: symmetric square root
        vals, vecs = np.linalg.eigh(noise_cov)
        if np.min(vals) < -1e-10 * max(np.max(vals), 1.0):
            raise ValueError("noise covariance is not positive semidefinite")
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def simulate_ar2_epoch(epoch_id, p, phi1, phi2, noise_cov, T, rng,
                       burn_in=500, sampling_rate_hz=None):
    """Simulate one epoch of a p-variate AR(2) with shared coefficients.

    Every component follows the same scalar recursion; the innovations
    are jointly Gaussian with the given covariance.  The recursion
    starts from zero and discards ``burn_in`` samples.

    Parameters
    ----------
    epoch_id : int
    p : int
        Component dimension.
    phi1, phi2 : float
        Stationary AR(2) coefficients.
    noise_cov : ndarray or None
        p x p PSD innovation covariance; None means identity.
    T : int
        Retained length.
    rng : numpy.random.Generator
    burn_in : int
    sampling_rate_hz : float, optional
        Defaults to T.

    Returns
    -------
    EpochSeries
    """
    _check_stationary(phi1, phi2)
    innovations = rng.standard_normal((T + burn_in, p))
    if noise_cov is not None:
        factor = _innovation_factor(np.asarray(noise_cov, dtype=np.float64))
        innovations = innovations @ factor.T
    path = _accel.ar2_filter(innovations, phi1, phi2)
    rate = float(sampling_rate_hz) if sampling_rate_hz is not None else float(T)
    return EpochSeries(epoch_id, path[burn_in:], rate)


def random_orthogonal(p, rng):
    """Haar-distributed p x p orthogonal matrix.

    QR decomposition of a standard Gaussian matrix with the R diagonal
    sign folded into Q, which makes the distribution exactly Haar.
    """
    gauss = rng.standard_normal((p, p))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs[None, :]


def scheme_epoch_params(cfg, epoch_id):
    """Per-epoch draws (dimension, xi, theta) for the AR(2) designs.

    Draw order within the epoch's substream is fixed: dimension first,
    then xi; the same substream then feeds the innovations.  Exposed for
    tests and diagnostics.

    Returns
    -------
    (p, xi, theta, rng)
        ``rng`` is the epoch substream, already advanced past the
        parameter draws.
    """
    rng = _stream(cfg.seed, _STREAM_EPOCH, epoch_id)
    lo, hi = cfg.dim_range
    p = int(rng.integers(lo, hi + 1))
    xi = float(rng.uniform(*cfg.xi_range))
    theta = cfg.theta_pre if epoch_id < cfg.changepoint else cfg.theta_post
    return p, xi, theta, rng


def _example21_epoch(cfg, epoch_id):
    rng = _stream(cfg.seed, _STREAM_EPOCH, epoch_id)
    if epoch_id < cfg.changepoint:
        phi1 = 0.9 if cfg.scheme == "ex21a" else -0.9
        phi2 = 0.0
    else:
        phi1, phi2 = 0.25, -0.75
    return simulate_ar2_epoch(epoch_id, 1, phi1, phi2, None, cfg.T, rng,
                              sampling_rate_hz=cfg.sampling_rate_hz)


def _resonance_epoch(cfg, epoch_id):
    p, xi, theta, rng = scheme_epoch_params(cfg, epoch_id)
    phi1, phi2 = resonance_coefficients(xi, theta)
    noise_cov = None
    if cfg.scheme == "s2":
        noise_cov = toeplitz(cfg.rho ** np.arange(p))
    return simulate_ar2_epoch(epoch_id, p, phi1, phi2, noise_cov, cfg.T, rng,
                              sampling_rate_hz=cfg.sampling_rate_hz)


def _mixed_epoch(cfg, epoch_id, mixers):
    p_trunc, xi, theta, rng = scheme_epoch_params(cfg, epoch_id)
    phi1, phi2 = resonance_coefficients(xi, theta)
    latent = simulate_ar2_epoch(epoch_id, cfg.fixed_p, phi1, phi2, None,
                                cfg.T, rng,
                                sampling_rate_hz=cfg.sampling_rate_hz)
    mixer = mixers[0] if epoch_id < cfg.changepoint else mixers[1]
    mixed = latent.data @ mixer.T
    observed = EpochSeries(epoch_id, mixed[:, :p_trunc],
                           cfg.sampling_rate_hz)
    return observed, latent


def generate_scheme(cfg, return_latent=False):
    """Generate the full epoch list of a simulated design.

    Parameters
    ----------
    cfg : SchemeConfig
    return_latent : bool
        For the mixed design only: also return the unmixed latent
        epochs (used to check invariance of band ratios under
        orthogonal mixing).

    Returns
    -------
    list of EpochSeries, or (list, list) when ``return_latent`` is set.
    """
    if return_latent and cfg.scheme != "s3":
        raise ValueError("return_latent applies to the mixed design only")
    if cfg.scheme.startswith("ex21"):
        epochs = [_example21_epoch(cfg, i) for i in range(1, cfg.N + 1)]
        return epochs
    if cfg.scheme in ("s1", "s2"):
        return [_resonance_epoch(cfg, i) for i in range(1, cfg.N + 1)]

    mixers = (
        random_orthogonal(cfg.fixed_p, _stream(cfg.seed, _STREAM_MIXING, 1)),
        random_orthogonal(cfg.fixed_p, _stream(cfg.seed, _STREAM_MIXING, 2)),
    )
    observed = []
    latent = []
    for i in range(1, cfg.N + 1):
        obs, lat = _mixed_epoch(cfg, i, mixers)
        observed.append(obs)
        latent.append(lat)
    if return_latent:
        return observed, latent
    return observed
