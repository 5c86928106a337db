"""
Draws of the jump-CLT limit

    Z(g)_t = Σ_{T_p ≤ t} g(ΔX_{T_p}) (√κ_p U_p σ_{T_p−} + √(1−κ_p) U'_p σ_{T_p})

with κ_p uniform on (0,1) and U_p, U'_p standard normal, all independent
of the path. Given the path, Z(g)_t is centred with variance
C(g)_t = Σ g(ΔX_{T_p})² (c_{T_p−} + ½Δc_{T_p}).
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from src.simulate.paths import PathBundle
from src.utils import exact_sum, make_rng


@dataclass(frozen=True)
class ZLawSample:
    value: float
    terms: List[Tuple[float, float]]


def _jumps_until(g: Callable, path: PathBundle, t: Optional[float]):
    jumps = path.jumps
    t = path.horizon if t is None else t
    mask = jumps.up_to(t)
    c_left, c_right = jumps.c_left[mask], jumps.c_right[mask]
    if np.any(np.isnan(c_left)) or np.any(np.isnan(c_right)):
        raise ValueError("jump record lacks c_left/c_right values")
    weights = np.asarray(g(jumps.sizes[mask]), dtype=float)
    return jumps.times[mask], weights, c_left, c_right


def sample_z_law_many(g: Callable, path: PathBundle, n_draws: int, seed: int, t: Optional[float] = None) -> np.ndarray:
    """``n_draws`` independent draws of Z(g)_t for one fixed path."""
    _, weights, c_left, c_right = _jumps_until(g, path, t)
    if weights.size == 0:
        return np.zeros(n_draws)
    rng = make_rng(seed)
    shape = (n_draws, weights.size)
    kappa = rng.random(shape)
    u = rng.standard_normal(shape)
    u_prime = rng.standard_normal(shape)
    terms = weights * (np.sqrt(kappa) * u * np.sqrt(c_left) + np.sqrt(1.0 - kappa) * u_prime * np.sqrt(c_right))
    return terms.sum(axis=1)


def sample_z_law(g: Callable, path: PathBundle, seed: int, t: Optional[float] = None) -> ZLawSample:
    times, weights, c_left, c_right = _jumps_until(g, path, t)
    if weights.size == 0:
        return ZLawSample(value=0.0, terms=[])
    rng = make_rng(seed)
    n = weights.size
    kappa = rng.random(n)
    u = rng.standard_normal(n)
    u_prime = rng.standard_normal(n)
    contrib = weights * (np.sqrt(kappa) * u * np.sqrt(c_left) + np.sqrt(1.0 - kappa) * u_prime * np.sqrt(c_right))
    return ZLawSample(value=exact_sum(contrib), terms=list(zip(times.tolist(), contrib.tolist())))


def z_law_variance(g: Callable, path: PathBundle, t: Optional[float] = None) -> float:
    """C(g)_t."""
    return z_law_covariance(g, g, path, t)


def z_law_covariance(g: Callable, h: Callable, path: PathBundle, t: Optional[float] = None) -> float:
    """Σ g(ΔX) h(ΔX) (c_− + ½Δc): conditional covariance of Z(g)_t and Z(h)_t."""
    _, wg, c_left, c_right = _jumps_until(g, path, t)
    if wg.size == 0:
        return 0.0
    _, wh, _, _ = _jumps_until(h, path, t)
    return exact_sum(wg * wh * 0.5 * (c_left + c_right))
