"""Shared fixtures: seeded generators, the one-tier scenario and its statistics."""

import math

import numpy as np
import pytest

from qspsim.harness import ExperimentCoordinator
from qspsim.models import ClosedFormInputs, NetworkConfig

# Network statistics of the one-tier layout at K = 12.
ZETA1 = 16.9392
ZETA2 = 288.6
ZETA3 = 13.9872


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def network():
    return NetworkConfig()


@pytest.fixture
def small_network():
    """Cheap multicell scenario for Monte Carlo plumbing tests."""
    return NetworkConfig(L=7, K=2, M=16, T=32, rho=1.0, alpha=0.5)


@pytest.fixture
def multicell_inputs():
    return ClosedFormInputs(
        alpha=0.5, rho=0.1, T=200, M=100, K=12, zeta1=ZETA1, zeta2=ZETA2, zeta3=ZETA3
    )


@pytest.fixture(autouse=True)
def isolated_coordinator(tmp_path):
    """Keep the statistics cache of every test in its own directory."""
    ExperimentCoordinator.reset_instance()
    ExperimentCoordinator._instance = ExperimentCoordinator(cache_dir=str(tmp_path / "cache"))
    yield ExperimentCoordinator._instance
    ExperimentCoordinator.reset_instance()


def random_single_cell(rng: np.random.Generator, quantized: bool = True, min_T: int = 2):
    """One point of the sampled parameter box used by the property sweeps."""
    K = int(rng.integers(1, 21))
    T = int(rng.integers(max(K, min_T), 401))
    return ClosedFormInputs(
        alpha=float(rng.uniform(0.05, 0.95)),
        rho=float(10.0 ** rng.uniform(-2.0, 1.0)),
        T=T,
        M=float(rng.integers(16, 1025)),
        K=K,
        quantized=quantized,
    )


def random_multicell(rng: np.random.Generator, quantized: bool = True):
    point = random_single_cell(rng, quantized)
    zeta1 = point.K * float(rng.uniform(1.0, 2.0))
    zeta2 = zeta1**2 * float(rng.uniform(1.0, 1.2))
    zeta3 = float(rng.uniform(point.K, zeta1))
    return point.model_copy(update={"zeta1": zeta1, "zeta2": zeta2, "zeta3": zeta3})


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def bits(sinr: float) -> float:
    return math.log2(1.0 + sinr)
