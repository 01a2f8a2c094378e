"""Monte-Carlo calibration of the spectra-equality z statistic.

Standalone script, no package imports.  Simulates independent pairs of
white-noise epochs, computes the standardized statistic

    z = (2*pi*T*sqrt(h)*d_hat - mu_hat/sqrt(h)) / sigma_hat

under several candidate conventions for the plug-in mean/variance, and
reports the sample mean and variance of z for each.  A correctly
calibrated convention gives mean near 0 and variance near 1.  Also runs
a power check under a gross alternative (AR(1) 0.9 vs white noise).

Candidate conventions:
  A  single-sided band sums, B_K integrated over (lo-pi, hi+pi)   [chosen]
  B  single-sided band sums, B_K integrated over (-2pi, 2pi)
  C  double-sided band sums (ordinates in +/-(lo,hi]), B_K as in A

Run:  python tests/oracles/eqtest_calibration.py
"""

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import norm

TWO_PI = 2.0 * np.pi


def bp_kernel(u):
    u = np.asarray(u, dtype=float)
    val = 3.0 / (4.0 * np.pi) * (1.0 - (u / np.pi) ** 2)
    return np.where(np.abs(u) <= np.pi, np.maximum(val, 0.0), 0.0)


def bp_weights(T, h):
    """Normalized discrete smoothing weights w_l on offsets l = -L..L."""
    L = int(np.floor(T * h / 2.0))
    lags = np.arange(-L, L + 1)
    w = bp_kernel(TWO_PI * lags / (T * h)) / h
    return lags, w / w.sum()


def smooth_circular(I, lags, w):
    """Circular weighted average over the frequency axis (axis 0)."""
    T = I.shape[0]
    w_ext = np.zeros(T)
    w_ext[np.mod(lags, T)] = w
    Wf = np.conj(np.fft.fft(w_ext))
    F = np.fft.fft(I, axis=0)
    return np.fft.ifft(F * Wf[:, None, None], axis=0)


def joint_spectral(x, y, h):
    """Smoothed spectral matrix of the column-stacked pair, all T ordinates."""
    z = np.concatenate([x, y], axis=1)
    T = z.shape[0]
    J = np.fft.fft(z, axis=0) / np.sqrt(TWO_PI * T)
    I = J[:, :, None] * np.conj(J[:, None, :])
    lags, w = bp_weights(T, h)
    return smooth_circular(I, lags, w)


def band_sums(G, d, j_band, T):
    """Return (d_hat, Csum, S4sum) with (2pi/T) Riemann weights over j_band."""
    Gb = G[j_band]
    blocks = {
        (1, 1): Gb[:, :d, :d],
        (1, 2): Gb[:, :d, d:],
        (2, 1): Gb[:, d:, :d],
        (2, 2): Gb[:, d:, d:],
    }
    diff = blocks[(1, 1)] - blocks[(2, 2)]
    d_hat = (TWO_PI / T) * np.sum(np.abs(diff) ** 2)

    tr = {k: np.trace(B, axis1=1, axis2=2) for k, B in blocks.items()}
    C = (np.abs(tr[(1, 1)]) ** 2 + np.abs(tr[(2, 2)]) ** 2
         - np.abs(tr[(1, 2)]) ** 2 - np.abs(tr[(2, 1)]) ** 2)

    S4 = np.zeros(len(j_band))
    for p1 in (1, 2):
        for p2 in (1, 2):
            s1 = 1.0 if p1 == p2 else -1.0
            for p3 in (1, 2):
                for p4 in (1, 2):
                    s2 = 1.0 if p3 == p4 else -1.0
                    ip = np.einsum("jrs,jrs->j", blocks[(p1, p3)],
                                   np.conj(blocks[(p2, p4)]))
                    S4 += s1 * s2 * np.abs(ip) ** 2
    Csum = (TWO_PI / T) * np.sum(np.real(C))
    S4sum = (TWO_PI / T) * np.sum(S4)
    return d_hat, Csum, S4sum


def gamma_bp(npts=2001):
    def gamma(v):
        lo = max(-np.pi, -np.pi - v)
        hi = min(np.pi, np.pi - v)
        if hi <= lo:
            return 0.0
        u = np.linspace(lo, hi, npts)
        return trapezoid(bp_kernel(u) * bp_kernel(u + v), u)

    return gamma


def b_const(lo, hi, npts=2001):
    gamma = gamma_bp()
    v = np.linspace(lo, hi, npts)
    return 4.0 * trapezoid(np.array([gamma(vi) ** 2 for vi in v]), v)


A_K = 3.0 / (5.0 * np.pi)


def z_stat(d_hat, Csum, S4sum, T, h, BK, double_sided=False):
    mult = 2.0 if double_sided else 1.0
    mu = 4.0 * np.pi**2 * A_K * mult * Csum
    sig2 = 8.0 * np.pi**4 * BK * mult * S4sum
    return (TWO_PI * T * np.sqrt(h) * d_hat - mu / np.sqrt(h)) / np.sqrt(sig2)


def ar1(rng, T, phi, d, burn=500):
    e = rng.standard_normal((T + burn, d))
    out = np.empty_like(e)
    prev = np.zeros(d)
    for t in range(T + burn):
        prev = phi * prev + e[t]
        out[t] = prev
    return out[burn:]


def main():
    rng = np.random.default_rng(20260817)
    T, d = 4096, 2
    h = T ** -0.4
    n_pairs = 500

    band1 = np.arange(1, T // 8 + 1)            # (0, pi/4]
    band2 = np.arange(T // 8 + 1, T // 4 + 1)   # (pi/4, pi/2]
    bk_trunc1 = b_const(0.0 - np.pi, np.pi / 4 + np.pi)
    bk_trunc2 = b_const(np.pi / 4 - np.pi, np.pi / 2 + np.pi)
    bk_full = b_const(-2 * np.pi, 2 * np.pi)
    print(f"T={T} d={d} h={h:.6f}  A_K={A_K:.6f}")
    print(f"B_K trunc band1={bk_trunc1:.6f} trunc band2={bk_trunc2:.6f} full={bk_full:.6f}")

    zs = {k: [] for k in ("A1", "B1", "C1", "A2")}
    for _ in range(n_pairs):
        x = rng.standard_normal((T, d))
        y = rng.standard_normal((T, d))
        G = joint_spectral(x, y, h)
        dh1, c1, s41 = band_sums(G, d, band1, T)
        dh2, c2, s42 = band_sums(G, d, band2, T)
        zs["A1"].append(z_stat(dh1, c1, s41, T, h, bk_trunc1))
        zs["B1"].append(z_stat(dh1, c1, s41, T, h, bk_full))
        zs["C1"].append(z_stat(dh1, 2 * c1, 2 * s41, T, h, bk_trunc1,
                               double_sided=False))
        zs["A2"].append(z_stat(dh2, c2, s42, T, h, bk_trunc2))

    print(f"\nnull distribution of z over {n_pairs} pairs, band (0, pi/4]:")
    for key, label in [("A1", "A single-sided, B_K band-limits"),
                       ("B1", "B single-sided, B_K full"),
                       ("C1", "C double-sided sums, B_K band-limits")]:
        z = np.asarray(zs[key])
        rej = np.mean(z > norm.ppf(0.95))
        print(f"  {label:40s} mean {z.mean():+.4f}  var {z.var(ddof=1):.4f}  "
              f"rej@5% {rej:.3f}")
    z = np.asarray(zs["A2"])
    print(f"  {'A on interior band (pi/4, pi/2]':40s} mean {z.mean():+.4f}  "
          f"var {z.var(ddof=1):.4f}")

    # power: two AR(1) components with phi = 0.9 against white noise
    Tp = 1024
    hp = Tp ** -0.4
    bandp = np.arange(1, Tp // 8 + 1)
    bkp = b_const(0.0 - np.pi, np.pi / 4 + np.pi)
    n_alt = 200
    rejections = 0
    zvals = []
    for _ in range(n_alt):
        x = ar1(rng, Tp, 0.9, d)
        y = rng.standard_normal((Tp, d))
        G = joint_spectral(x, y, hp)
        dh, c, s4 = band_sums(G, d, bandp, Tp)
        z = z_stat(dh, c, s4, Tp, hp, bkp)
        zvals.append(z)
        if norm.sf(z) < 0.05:
            rejections += 1
    zvals = np.asarray(zvals)
    print(f"\npower, AR(1) 0.9 vs white noise, T={Tp}, band (0, pi/4], "
          f"convention A: {rejections}/{n_alt}"
          f"  (z median {np.median(zvals):.2f}, min {zvals.min():.2f})")


if __name__ == "__main__":
    main()
