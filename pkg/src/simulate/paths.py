"""
Fine-grid Euler simulation of X and c = σ² with an exact jump record.

Random draws come from one ``numpy.random.Generator`` per path, always in
the order: Brownian driver of X, Brownian driver of the log-vol factor,
jump count, jump times, jump sizes, small-jump substitute. Identical
(spec, sampling, seed) therefore gives a bit-identical PathBundle.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.signal import lfilter

from src.constants import JUMPS_PER_STEP_LIMIT
from src.errors import GridError, GridResolutionWarning
from src.model.spec import ModelSpec, SamplingSpec, require_valid
from src.utils import derive_seed, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JumpRecord:
    times: np.ndarray
    sizes: np.ndarray
    c_left: np.ndarray
    c_right: np.ndarray

    @classmethod
    def empty(cls) -> "JumpRecord":
        z = np.zeros(0)
        return cls(times=z, sizes=z.copy(), c_left=z.copy(), c_right=z.copy())

    def __len__(self) -> int:
        return int(self.times.size)

    def up_to(self, t: float) -> np.ndarray:
        """Boolean mask of jumps with T_p ≤ t."""
        return self.times <= t + 1e-12

    def as_tuples(self) -> List[Tuple[float, float, float, float]]:
        return list(zip(self.times.tolist(), self.sizes.tolist(), self.c_left.tolist(), self.c_right.tolist()))


@dataclass(frozen=True, eq=False)
class PathBundle:
    grid: np.ndarray
    x: np.ndarray
    c: np.ndarray
    jumps: JumpRecord
    seed: int
    spec: ModelSpec
    sampling: SamplingSpec
    small_jump_cutoff: Optional[float] = None

    @property
    def fine_step(self) -> float:
        return self.sampling.fine_step

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    @property
    def sigma(self) -> np.ndarray:
        return np.sqrt(self.c)

    def same_as(self, other: "PathBundle") -> bool:
        """Bit-level equality of every stored array."""
        return (
            self.seed == other.seed
            and np.array_equal(self.grid, other.grid)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.jumps.times, other.jumps.times)
            and np.array_equal(self.jumps.sizes, other.jumps.sizes)
            and np.array_equal(self.jumps.c_left, other.jumps.c_left)
            and np.array_equal(self.jumps.c_right, other.jumps.c_right)
        )


def _check_resolution(rate: float, dt: float, strict: bool) -> None:
    expected = rate * dt
    if expected > JUMPS_PER_STEP_LIMIT:
        message = (f"grid too coarse for jump isolation: {expected:.3g} expected jumps per fine step "
                   f"(limit {JUMPS_PER_STEP_LIMIT})")
        if strict:
            raise GridError(message)
        warnings.warn(message, GridResolutionWarning, stacklevel=3)


def _draw_jumps(spec: ModelSpec, rng: np.random.Generator, horizon: float, dt: float, strict: bool):
    jumps = spec.jumps
    if jumps.kind == "compound_poisson":
        rate, cutoff = jumps.rate, None
    elif jumps.kind == "stable_like":
        cutoff = jumps.simulation_cutoff(dt)
        rate = jumps.rate_above(cutoff)
    else:
        return np.zeros(0), np.zeros(0), None

    _check_resolution(rate, dt, strict)
    count = int(rng.poisson(rate * horizon))
    # uniform on (0, T]
    times = np.sort(horizon - rng.uniform(0.0, horizon, size=count))
    if jumps.kind == "compound_poisson":
        sizes = jumps.size_law.sample(rng, count)
    else:
        v = rng.random(count)
        magnitude = (1.0 + v * (cutoff ** (-jumps.beta) - 1.0)) ** (-1.0 / jumps.beta)
        sign = np.where(rng.random(count) < 0.5, -1.0, 1.0)
        sizes = sign * magnitude
    return times, sizes, cutoff


def _log_vol_factor(spec: ModelSpec, dW: np.ndarray, dW_vol: np.ndarray, dt: float) -> np.ndarray:
    """Euler OU recursion Y_{j+1} = (1 - λ̃dt) Y_j + σ̃(ρ̃ dW_j + √(1-ρ̃²) dW'_j), Y_0 = 0."""
    vol = spec.vol
    shocks = vol.vol_of_vol * (vol.leverage * dW + math.sqrt(1.0 - vol.leverage ** 2) * dW_vol)
    decay = 1.0 - vol.mean_reversion * dt
    y = lfilter([1.0], [1.0, -decay], shocks)
    return np.concatenate(([0.0], y))


def simulate_path(spec: ModelSpec, sampling: SamplingSpec, seed: int, strict_grid: bool = False) -> PathBundle:
    require_valid(spec, sampling)
    if sampling.effective_horizon < sampling.horizon:
        logger.debug("horizon %g truncated to Δn[T/Δn] = %g", sampling.horizon, sampling.effective_horizon)

    rng = make_rng(seed)
    n = sampling.n_fine
    dt = sampling.fine_step
    horizon = sampling.effective_horizon
    grid = np.arange(n + 1, dtype=float) * dt
    grid[-1] = horizon
    sqrt_dt = math.sqrt(dt)

    dW = rng.standard_normal(n) * sqrt_dt if spec.has_diffusion else np.zeros(n)
    dW_vol = rng.standard_normal(n) * sqrt_dt if spec.vol.is_stochastic else None

    times, sizes, cutoff = _draw_jumps(spec, rng, horizon, dt, strict_grid)
    step_of_jump = np.clip(np.ceil(times / dt).astype(np.int64) - 1, 0, n - 1)

    vol = spec.vol
    if vol.kind == "none":
        log_sigma = None
    elif vol.kind == "constant":
        log_sigma = np.full(n + 1, math.log(vol.sigma0))
    else:
        log_sigma = math.log(vol.sigma0) + _log_vol_factor(spec, dW, dW_vol, dt)

    # jumps earlier in the same fine step, for co-jumps of σ
    rank_in_step = np.arange(times.size) - np.searchsorted(step_of_jump, step_of_jump, side="left")
    if vol.kind == "jump_vol":
        per_step = np.bincount(step_of_jump, minlength=n)
        earlier = np.concatenate(([0], np.cumsum(per_step)))
        log_sigma = log_sigma + vol.cojump * earlier

    if log_sigma is None:
        c = np.zeros(n + 1)
        c_left = np.zeros(times.size)
        c_right = np.zeros(times.size)
    else:
        c = np.exp(2.0 * log_sigma)
        c_left = np.exp(2.0 * log_sigma[step_of_jump])
        if vol.kind == "jump_vol":
            c_left = c_left * np.exp(2.0 * vol.cojump * rank_in_step)
            c_right = c_left * math.exp(2.0 * vol.cojump)
        else:
            c_right = c_left.copy()

    sigma_left = np.sqrt(c[:-1])
    dX = spec.drift(grid[:-1]) * dt + sigma_left * dW
    if times.size:
        dX = dX + np.bincount(step_of_jump, weights=sizes, minlength=n)
    if spec.jumps.kind == "stable_like" and spec.jumps.cutoff_policy == "gaussian":
        small_var = spec.jumps.small_jump_variance(cutoff)
        dX = dX + math.sqrt(small_var * dt) * rng.standard_normal(n)

    x = spec.x0 + np.concatenate(([0.0], np.cumsum(dX)))

    return PathBundle(
        grid=grid,
        x=x,
        c=c,
        jumps=JumpRecord(times=times, sizes=sizes, c_left=c_left, c_right=c_right),
        seed=int(seed),
        spec=spec,
        sampling=sampling,
        small_jump_cutoff=cutoff,
    )


def replicate_seeds(base_seed: int, replicates: int) -> List[int]:
    return [derive_seed(base_seed, k) for k in range(replicates)]


def simulate_batch(
    spec: ModelSpec,
    sampling: SamplingSpec,
    base_seed: int,
    replicates: int,
    jobs: int = 1,
    strict_grid: bool = False,
) -> Iterator[PathBundle]:
    """Replicate k uses ``derive_seed(base_seed, k)``; output order is k = 0, 1, ..."""
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    seeds = replicate_seeds(base_seed, replicates)
    if jobs == 1:
        return (simulate_path(spec, sampling, s, strict_grid) for s in seeds)
    return Parallel(n_jobs=jobs, return_as="generator")(
        delayed(simulate_path)(spec, sampling, s, strict_grid) for s in seeds
    )


def observation_indices(path: PathBundle, sampling: SamplingSpec) -> np.ndarray:
    ratio = sampling.delta_n / path.fine_step
    stride = int(round(ratio))
    if stride < 1 or abs(ratio - stride) > 1e-9 * max(1.0, ratio):
        raise GridError(f"Δn = {sampling.delta_n} is not an integer multiple of the fine step {path.fine_step}")
    n_obs = sampling.n_obs
    last = n_obs * stride
    if last > path.grid.size - 1:
        raise GridError(f"{n_obs} observations of Δn = {sampling.delta_n} exceed the simulated horizon {path.horizon}")
    return np.arange(n_obs + 1) * stride


def restrict_to_observations(path: PathBundle, sampling: Optional[SamplingSpec] = None) -> np.ndarray:
    """Increments Δⁿᵢ X, i = 1 … [T/Δn]."""
    sampling = sampling or path.sampling
    return np.diff(path.x[observation_indices(path, sampling)])
