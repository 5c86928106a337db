"""Tests for path simulation, observation restriction and dumps."""

import numpy as np
import pandas as pd
import pytest

from src.errors import GridError, GridResolutionWarning, ModelValidationError
from src.model.spec import JumpSizeLaw, JumpSpec, ModelSpec, SamplingSpec, VolSpec
from src.simulate import (
    dump_path,
    observation_indices,
    replicate_seeds,
    restrict_to_observations,
    simulate_batch,
    simulate_path,
)
from src.utils import derive_seed


def test_same_seed_same_path(jump_model, sampling, seed):
    a = simulate_path(jump_model, sampling, seed)
    b = simulate_path(jump_model, sampling, seed)
    assert a.same_as(b)
    c = simulate_path(jump_model, sampling, seed + 1)
    assert not a.same_as(c)


def test_drift_only_path_is_time(drift_only_model, sampling, seed):
    path = simulate_path(drift_only_model, sampling, seed)
    np.testing.assert_allclose(path.x, path.grid, rtol=0, atol=1e-12)
    assert np.all(path.c == 0.0)
    assert len(path.jumps) == 0


def test_constant_vol_path(bm_model, sampling, seed):
    path = simulate_path(bm_model, sampling, seed)
    assert path.grid.size == sampling.n_fine + 1
    np.testing.assert_allclose(path.c, 0.25, rtol=1e-15)
    increments = restrict_to_observations(path)
    assert increments.size == sampling.n_obs
    # quadratic variation of BM(σ = 0.5) over [0, 1]
    assert np.sum(increments ** 2) == pytest.approx(0.25, rel=0.15)


def test_pure_jump_path_counts_jumps(pure_jump_model, sampling, seed):
    path = simulate_path(pure_jump_model, sampling, seed)
    assert path.x[-1] == pytest.approx(float(len(path.jumps)))
    assert np.all(np.diff(path.jumps.times) >= 0.0)
    assert np.all((path.jumps.times > 0.0) & (path.jumps.times <= path.horizon))
    np.testing.assert_array_equal(path.jumps.sizes, 1.0)
    np.testing.assert_array_equal(path.jumps.c_left, 0.0)


def test_increment_variance_chi_square_band(bm_model, seed):
    # Σ Δ²/(cΔn) over all observed increments is χ² with N degrees of freedom
    sampling = SamplingSpec(horizon=1.0, delta_n=2.0 ** -10, refine=2)
    increments = np.concatenate([restrict_to_observations(p) for p in simulate_batch(bm_model, sampling, seed, 20)])
    n = increments.size
    assert n == 20 * sampling.n_obs
    statistic = float(np.sum(increments ** 2) / (0.25 * sampling.delta_n))
    assert abs(statistic - n) <= 4.0 * np.sqrt(2.0 * n)


def test_compound_poisson_counts_over_batch(pure_jump_model, seed):
    # N_T ~ Poisson(λT) with λT = 2
    sampling = SamplingSpec(horizon=1.0, delta_n=2.0 ** -6, refine=4)
    m = 400
    counts = np.array([len(p.jumps) for p in simulate_batch(pure_jump_model, sampling, seed, m)], dtype=float)
    assert abs(counts.mean() - 2.0) <= 4.0 * np.sqrt(2.0 / m)
    # sd of the sample variance of a Poisson(μ) sample ≈ √((μ + 2μ²)/m)
    assert abs(counts.var(ddof=1) - 2.0) <= 4.0 * np.sqrt(10.0 / m)


def test_jump_vol_records_cojump(sampling, seed):
    spec = ModelSpec(vol=VolSpec(kind="jump_vol", sigma0=0.5, cojump=0.2),
                     jumps=JumpSpec.compound_poisson(5.0, JumpSizeLaw.gaussian(0.0, 0.01)))
    path = simulate_path(spec, sampling, seed)
    if len(path.jumps):
        np.testing.assert_allclose(path.jumps.c_right / path.jumps.c_left, np.exp(0.4))
    assert path.c[-1] == pytest.approx(0.25 * np.exp(0.4 * len(path.jumps)))


def test_ou_vol_is_positive_and_moves(ou_model, sampling, seed):
    path = simulate_path(ou_model, sampling, seed)
    assert np.all(path.c > 0.0)
    assert path.c[0] == pytest.approx(1.0)
    assert np.ptp(path.c) > 0.0


def test_stable_like_jumps_above_cutoff(stable_model, seed):
    sampling = SamplingSpec(horizon=1.0, delta_n=2.0 ** -6, refine=4)
    path = simulate_path(stable_model, sampling, seed)
    assert path.small_jump_cutoff == pytest.approx(sampling.fine_step ** 2)
    assert np.all(np.abs(path.jumps.sizes) > path.small_jump_cutoff)
    assert np.all(np.abs(path.jumps.sizes) <= 1.0)


def test_observation_restriction_at_coarser_step(bm_model, sampling, seed):
    path = simulate_path(bm_model, sampling, seed)
    coarse = sampling.with_delta_n(2.0 ** -6)
    idx = observation_indices(path, coarse)
    assert idx[1] == 128
    increments = restrict_to_observations(path, coarse)
    assert increments.size == 64
    assert np.sum(increments) == pytest.approx(path.x[-1] - path.x[0])


def test_observation_grid_must_align(bm_model, sampling, seed):
    path = simulate_path(bm_model, sampling, seed)
    with pytest.raises(GridError):
        observation_indices(path, sampling.with_delta_n(1.5 * path.fine_step))
    with pytest.raises(GridError):
        observation_indices(path, SamplingSpec(horizon=2.0, delta_n=sampling.delta_n))


def test_dense_jumps_warn_or_raise(seed):
    spec = ModelSpec(jumps=JumpSpec.compound_poisson(1000.0, JumpSizeLaw.fixed(0.01)))
    sampling = SamplingSpec(horizon=1.0, delta_n=2.0 ** -4, refine=1)
    with pytest.warns(GridResolutionWarning):
        simulate_path(spec, sampling, seed)
    with pytest.raises(GridError):
        simulate_path(spec, sampling, seed, strict_grid=True)


def test_invalid_model_raises(sampling, seed):
    with pytest.raises(ModelValidationError):
        simulate_path(ModelSpec(vol=VolSpec(kind="constant", sigma0=0.0)), sampling, seed)


def test_batch_seeds_and_worker_invariance(jump_model, seed):
    sampling = SamplingSpec(horizon=1.0, delta_n=2.0 ** -6, refine=4)
    assert replicate_seeds(seed, 3) == [derive_seed(seed, k) for k in range(3)]
    serial = list(simulate_batch(jump_model, sampling, seed, 3, jobs=1))
    parallel = list(simulate_batch(jump_model, sampling, seed, 3, jobs=2))
    assert [p.seed for p in serial] == replicate_seeds(seed, 3)
    assert all(a.same_as(b) for a, b in zip(serial, parallel))
    with pytest.raises(ValueError):
        simulate_batch(jump_model, sampling, seed, 0)


def test_dump_path_layout(jump_model, sampling, seed, tmp_path):
    path = simulate_path(jump_model, sampling, seed)
    path_csv, jump_csv = dump_path(path, tmp_path, "path-0000")
    frame = pd.read_csv(path_csv)
    jumps = pd.read_csv(jump_csv)
    assert list(frame.columns) == ["t", "x", "c"]
    assert list(jumps.columns) == ["t", "dx", "c_left", "c_right"]
    assert len(frame) == sampling.n_fine + 1
    assert len(jumps) == len(path.jumps)
    # %.17g round-trips doubles
    np.testing.assert_array_equal(frame["x"].to_numpy(), path.x)
    assert not list(tmp_path.glob(".*"))


def test_seed_derivation_is_stable():
    assert derive_seed(1, 0) != derive_seed(1, 1)
    assert derive_seed(1, 0) != derive_seed(2, 0)
    assert 0 <= derive_seed(2 ** 64 - 1, 7) < 2 ** 64
    with pytest.raises(ValueError):
        derive_seed(1, -1)
