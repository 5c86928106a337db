"""Shared fixtures: canonical models, samplings and seeds."""

import sys
from pathlib import Path

_project_root = Path(__file__).resolve().parent.parent
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))

import pytest  # noqa: E402

from src.model.spec import DriftSpec, JumpSizeLaw, JumpSpec, ModelSpec, SamplingSpec, VolSpec  # noqa: E402

SEED = 20240601


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale acceptance runs (minutes)")


@pytest.fixture
def seed():
    return SEED


@pytest.fixture
def bm_model():
    """Brownian motion with constant σ = 0.5."""
    return ModelSpec(vol=VolSpec.constant(0.5))


@pytest.fixture
def drift_only_model():
    """X_t = t: drift 1, no Brownian part, no jumps."""
    return ModelSpec(drift=DriftSpec.constant(1.0), vol=VolSpec.none())


@pytest.fixture
def jump_model():
    """BM(σ = 0.5) plus compound Poisson jumps of size 1 at rate 2."""
    return ModelSpec(vol=VolSpec.constant(0.5), jumps=JumpSpec.compound_poisson(2.0, JumpSizeLaw.fixed(1.0)))


@pytest.fixture
def pure_jump_model():
    """Compound Poisson jumps of size 1 at rate 2, nothing else."""
    return ModelSpec(vol=VolSpec.none(), jumps=JumpSpec.compound_poisson(2.0, JumpSizeLaw.fixed(1.0)))


@pytest.fixture
def ou_model():
    return ModelSpec(vol=VolSpec.ou(1.0, mean_reversion=2.0, vol_of_vol=0.5, leverage=-0.3))


@pytest.fixture
def stable_model():
    return ModelSpec(vol=VolSpec.constant(1.0), jumps=JumpSpec.stable_like(0.5, scale=0.2))


@pytest.fixture
def sampling():
    return SamplingSpec(horizon=1.0, delta_n=2.0 ** -10, refine=8)
