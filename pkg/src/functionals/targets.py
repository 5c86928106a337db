"""
Pathwise targets read off a simulated path: f⋆μ, C_t = ∫c, ∫c^q, v(B̄)
and the law-of-large-numbers target of V^n(f) for the three cases

    (a) f⋆μ,   (b) f⋆μ + C,   (c) f⋆μ + v(B̄).
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.errors import NoLimitTargetError
from src.functions.test_functions import TestFunction, class_membership
from src.model.hypotheses import in_index_set, jump_index_set
from src.model.spec import ModelSpec
from src.simulate.paths import PathBundle
from src.utils import running_integral

from .realized import FunctionalSeries

logger = logging.getLogger(__name__)


def on_observation_grid(fine: np.ndarray, path: PathBundle, delta_n: float) -> np.ndarray:
    """Fine-grid values at the observation times iΔn."""
    stride = int(round(delta_n / path.fine_step))
    n_obs = (path.grid.size - 1) // stride
    return fine[np.arange(n_obs + 1) * stride]


def _series(values: np.ndarray, step: float, kind: str, label: str, **meta) -> FunctionalSeries:
    times = np.arange(values.size, dtype=float) * step
    return FunctionalSeries(times=times, values=values, kind=kind, label=label, step=step, meta=dict(meta))


def jump_functional(f, path: PathBundle, delta_n: Optional[float] = None) -> FunctionalSeries:
    """f⋆μ_t = Σ_{T_p ≤ t} f(ΔX_{T_p}) on the observation grid."""
    delta_n = delta_n or path.sampling.delta_n
    n_obs = int(round(path.horizon / delta_n))
    times = np.arange(n_obs + 1, dtype=float) * delta_n
    jumps = path.jumps
    running = np.concatenate(([0.0], np.cumsum(np.asarray(f(jumps.sizes), dtype=float))))
    counts = np.searchsorted(jumps.times, times + 1e-12, side="right")
    biased = path.spec.jumps.kind == "stable_like"
    label = getattr(f, "label", "f")
    return FunctionalSeries(times=times, values=running[counts], kind="f*mu", label=label, step=delta_n,
                            meta={"biased_below_cutoff": biased, "cutoff": path.small_jump_cutoff})


def integrated_power(path: PathBundle, q: float) -> FunctionalSeries:
    """∫_0^t c_u^q du on the fine grid (trapezoid)."""
    integrand = np.ones_like(path.c) if q == 0.0 else path.c ** q
    return _series(running_integral(path.grid, integrand), path.fine_step, "int_c", f"c^{q:g}", q=q)


def integrated_variance(path: PathBundle) -> FunctionalSeries:
    """C_t = ∫_0^t c_u du."""
    return integrated_power(path, 1.0)


def drift_variation(path: PathBundle) -> FunctionalSeries:
    """v(B̄)_t = ∫_0^t |b_u| du."""
    values = running_integral(path.grid, np.abs(path.spec.drift(path.grid)))
    return _series(values, path.fine_step, "var_b", "v(B)")


def t1_case(f: TestFunction, spec: ModelSpec) -> Tuple[str, str]:
    """Which T1 case gives V^n(f) a limit, with the clause that applied."""
    m = class_membership(f)
    if not m.continuous:
        raise NoLimitTargetError(f"no LLN target for {f.label}: f must be continuous",
                                 condition="f ∈ C^0")
    no_c = not spec.has_diffusion
    no_b = spec.drift.is_zero
    lower, closed = jump_index_set(spec)

    if m.in_class("E'", 2.0):
        return "b", "f ∈ E'_2"
    if m.in_class("E'''", 2.0):
        return "a", "a-1: f ∈ E'''_2"
    # some r ∈ I ∩ (1, 2) with f ∈ E''_r
    hi = min(m.order, 2.0)
    if no_c and hi > 1.0 and (lower < hi or (closed and lower == hi and hi < 2.0)):
        return "a", "a-2: f ∈ E''_r, r ∈ I ∩ (1,2), C = 0"
    if no_c and m.in_class("E'''", 1.0) and in_index_set(spec, 1.0):
        return "a", "a-3: f ∈ E'''_1, 1 ∈ I, C = 0"
    if no_c and no_b and in_index_set(spec, min(m.order, 1.0)):
        return "a", "a-4: f ∈ E''_r, r ∈ I ∩ (0,1], C = B̄ = 0"
    if no_c and m.in_class("E'", 1.0) and in_index_set(spec, 1.0):
        return "c", "f ∈ E'_1, C = 0, 1 ∈ I"
    raise NoLimitTargetError(
        f"no LLN target for {f.label} under this model",
        condition="one of: f ∈ E'''_2; f ∈ E'_2; C = 0 with f ∈ E''_r for r ∈ I; f ∈ E'_1 with C = 0 and 1 ∈ I",
    )


def limit_target_t1(f: TestFunction, path: PathBundle, delta_n: Optional[float] = None) -> FunctionalSeries:
    """Limit of V^n(f), evaluated on the observation grid."""
    delta_n = delta_n or path.sampling.delta_n
    case, clause = t1_case(f, path.spec)
    target = jump_functional(f, path, delta_n)
    values = target.values.copy()
    if case == "b":
        values = values + on_observation_grid(integrated_variance(path).values, path, delta_n)
    elif case == "c":
        values = values + on_observation_grid(drift_variation(path).values, path, delta_n)
    meta = dict(target.meta, case=case, clause=clause)
    return FunctionalSeries(times=target.times, values=values, kind="T1", label=f.label, step=delta_n, meta=meta)
