"""Shared helpers for the test suite."""

import importlib.util
from pathlib import Path

import numpy as np

from specband import EpochSeries
from specband.simulate import simulate_ar2_epoch

ORACLE_DIR = Path(__file__).resolve().parent / "oracles"


def load_oracle(name):
    """Import a standalone oracle script from tests/oracles by path."""
    spec = importlib.util.spec_from_file_location(name, ORACLE_DIR / f"{name}.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def wn_epoch(T=256, d=2, seed=0, epoch_id=1):
    """White-noise epoch with a deterministic seed."""
    rng = np.random.default_rng(seed)
    return EpochSeries(epoch_id, rng.standard_normal((T, d)), float(T))


def ar1_epoch(phi, T=1024, d=1, seed=0, epoch_id=1):
    """Burned-in AR(1) epoch with unit Gaussian innovations."""
    rng = np.random.default_rng(seed)
    return simulate_ar2_epoch(epoch_id, d, phi, 0.0, np.eye(d), T, rng)
