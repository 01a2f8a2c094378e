"""Simulation designs: config, AR(2) machinery, determinism, invariances."""

import math

import numpy as np
import pytest

from specband import Band
from specband.errors import NonstationaryCoefficients
from specband.fsratio import fs_ratio
from specband.pipeline import spectral_estimate
from specband.simulate import (SchemeConfig, ar2_stationarity_roots,
                               ar2_true_spectrum, generate_scheme,
                               random_orthogonal, resonance_coefficients,
                               scheme_epoch_params, simulate_ar2_epoch)

PI = np.pi


@pytest.mark.parametrize("kwargs,fragment", [
    (dict(scheme="s9", N=10, T=100), "unknown scheme"),
    (dict(scheme="s1", N=0, T=100), "N >= 1"),
    (dict(scheme="s1", N=10, T=3), "T >= 4"),
    (dict(scheme="s1", N=10, T=100, dim_range=(0, 5)), "dimension range"),
    (dict(scheme="s1", N=10, T=100, dim_range=(6, 5)), "dimension range"),
    (dict(scheme="s1", N=10, T=100, xi_range=(0.0, 0.9)), "xi_range"),
    (dict(scheme="s1", N=10, T=100, xi_range=(0.5, 1.0)), "xi_range"),
])
def test_config_rejects(kwargs, fragment):
    with pytest.raises(ValueError, match=fragment):
        SchemeConfig(**kwargs)


def test_config_defaults():
    cfg = SchemeConfig.for_scheme("S1", seed=3)
    assert (cfg.N, cfg.T) == (500, 1000)
    assert cfg.scheme == "s1"
    assert cfg.changepoint == 250
    assert cfg.sampling_rate_hz == 1000.0
    cfg = SchemeConfig.for_scheme("ex21a", seed=3)
    assert (cfg.N, cfg.T) == (600, 1000)
    assert cfg.changepoint == 300
    cfg = SchemeConfig(scheme="s2", N=9, T=64)
    assert cfg.changepoint == 4
    assert cfg.sampling_rate_hz == 64.0


def test_resonance_roots_have_modulus_one_over_xi():
    xi, theta = 0.9, 4.0 * PI / 25.0
    roots = ar2_stationarity_roots(*resonance_coefficients(xi, theta))
    assert roots.shape == (2,)
    assert np.allclose(np.abs(roots), 1.0 / xi, atol=1e-12)


def test_nonstationary_coefficients_rejected():
    with pytest.raises(NonstationaryCoefficients):
        ar2_true_spectrum(1.2, 0.0, 1.0, 0.5)
    with pytest.raises(NonstationaryCoefficients):
        simulate_ar2_epoch(1, 1, 0.5, 0.5, None, 64,
                           np.random.default_rng(0))


def test_true_spectrum_white_noise_flat():
    omega = np.linspace(0.0, PI, 9)
    f = ar2_true_spectrum(0.0, 0.0, 2.0, omega)
    assert np.allclose(f, 4.0 / (2.0 * PI), atol=1e-14)


def test_true_spectrum_ar1_dynamic_range():
    f0 = ar2_true_spectrum(0.9, 0.0, 1.0, 0.0)
    fpi = ar2_true_spectrum(0.9, 0.0, 1.0, PI)
    assert f0 / fpi == pytest.approx(361.0, rel=1e-12)


def test_true_spectrum_peaks_at_resonance():
    xi, theta = 0.9, 4.0 * PI / 25.0
    phi1, phi2 = resonance_coefficients(xi, theta)
    grid = np.linspace(1e-6, PI, 10_000)
    f = ar2_true_spectrum(phi1, phi2, 1.0, grid)
    peak = grid[int(np.argmax(f))]
    expected = math.acos(math.cos(theta) * (1 + xi * xi) / (2 * xi))
    assert abs(peak - expected) < 2.0 * (grid[1] - grid[0])


def test_simulated_lag_one_autocorrelation():
    rng = np.random.default_rng(17)
    phi1, phi2 = 0.25, -0.75
    series = simulate_ar2_epoch(1, 1, phi1, phi2, None, 4096, rng)
    x = series.data[:, 0]
    r1 = np.corrcoef(x[1:], x[:-1])[0, 1]
    assert abs(r1 - phi1 / (1.0 - phi2)) < 0.1


def test_zero_noise_covariance_gives_zero_path():
    series = simulate_ar2_epoch(1, 2, 0.5, -0.25, np.zeros((2, 2)), 64,
                                np.random.default_rng(0))
    assert np.all(series.data == 0.0)


def test_random_orthogonal_is_orthogonal():
    rng = np.random.default_rng(5)
    q = random_orthogonal(30, rng)
    assert np.max(np.abs(q @ q.T - np.eye(30))) < 1e-10
    assert abs(abs(np.linalg.det(q)) - 1.0) < 1e-10
    q1 = random_orthogonal(1, np.random.default_rng(6))
    assert q1[0, 0] in (1.0, -1.0)


def test_scheme_epoch_params_ranges_and_regimes():
    cfg = SchemeConfig(scheme="s1", N=10, T=64, dim_range=(3, 7),
                       xi_range=(0.85, 0.95), seed=12)
    for i in range(1, 11):
        p, xi, theta, _ = scheme_epoch_params(cfg, i)
        assert 3 <= p <= 7
        assert 0.85 <= xi <= 0.95
        expected = cfg.theta_pre if i < cfg.changepoint else cfg.theta_post
        assert theta == expected
    # the substream is keyed by (seed, epoch), so the draw repeats exactly
    assert scheme_epoch_params(cfg, 4)[:3] == scheme_epoch_params(cfg, 4)[:3]


def test_generate_scheme_is_deterministic():
    cfg = SchemeConfig(scheme="s2", N=4, T=128, dim_range=(2, 4), seed=99)
    first = generate_scheme(cfg)
    second = generate_scheme(cfg)
    assert len(first) == 4
    for a, b in zip(first, second):
        assert a.epoch_id == b.epoch_id
        assert np.array_equal(a.data, b.data)
    other = generate_scheme(SchemeConfig(scheme="s2", N=4, T=128,
                                         dim_range=(2, 4), seed=100))
    assert not np.array_equal(first[0].data, other[0].data)


def test_example21a_switches_at_changepoint():
    cfg = SchemeConfig(scheme="ex21a", N=8, T=512, changepoint=4, seed=1)
    epochs = generate_scheme(cfg)
    assert [e.epoch_id for e in epochs] == list(range(1, 9))
    for e in epochs:
        x = e.data[:, 0]
        r1 = np.corrcoef(x[1:], x[:-1])[0, 1]
        if e.epoch_id < 4:
            assert r1 > 0.7
        else:
            assert r1 < 0.4


def test_example21b_pre_epochs_anticorrelated():
    cfg = SchemeConfig(scheme="ex21b", N=2, T=512, changepoint=3, seed=2)
    for e in generate_scheme(cfg):
        x = e.data[:, 0]
        assert np.corrcoef(x[1:], x[:-1])[0, 1] < -0.7


def test_s2_adjacent_innovation_correlation():
    cfg = SchemeConfig(scheme="s2", N=1, T=2048, dim_range=(4, 4),
                       changepoint=5, seed=8)
    e = generate_scheme(cfg)[0]
    # identical filters on every component keep the contemporaneous
    # correlation of adjacent series at the innovation value rho
    r = np.corrcoef(e.data[:, 0], e.data[:, 1])[0, 1]
    assert abs(r - 0.4) < 0.1


def test_return_latent_only_for_mixed_design():
    cfg = SchemeConfig(scheme="s1", N=2, T=64)
    with pytest.raises(ValueError, match="mixed design"):
        generate_scheme(cfg, return_latent=True)


def test_mixing_preserves_band_ratios_without_truncation():
    cfg = SchemeConfig(scheme="s3", N=6, T=256, fixed_p=8, dim_range=(8, 8),
                       seed=21)
    observed, latent = generate_scheme(cfg, return_latent=True)
    band = Band(0.0, PI / 3, "radians")
    for obs, lat in zip(observed, latent):
        r_obs = fs_ratio(spectral_estimate(obs), band).ratio
        r_lat = fs_ratio(spectral_estimate(lat), band).ratio
        assert abs(r_obs - r_lat) < 1e-8


def test_mixed_design_truncates_to_epoch_dimension():
    cfg = SchemeConfig(scheme="s3", N=5, T=64, fixed_p=12, dim_range=(2, 9),
                       seed=3)
    observed = generate_scheme(cfg)
    dims = {e.n_components for e in observed}
    assert all(2 <= d <= 9 for d in dims)
    for e in observed:
        p, _, _, _ = scheme_epoch_params(cfg, e.epoch_id)
        assert e.n_components == p
