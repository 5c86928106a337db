"""
Statistic and limit of one functional on one simulated path, at the
discretized evaluation time Δn·[t/Δn].

    T1, T7i, T7ii    V^n(f)
    T2, T4           V^n(f) − [t/Δn]·H(fψ_η)
    T3i, T5          Δn·V'^n(g)
    T3ii, T6         Δn^{1−r/2}·V^n(f)
    T3iii, T6p       V''^n(ϖ, α)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

from src.functionals.levy import levy_increment_expectation
from src.functionals.realized import truncated_power_variation, v_n, v_prime_n, v_trunc_n
from src.functions.test_functions import class_membership
from src.limits.targets import item_limit, item_variance
from src.limits.theorems import LLN_ANALOGUE, FunctionalItem
from src.limits.z_law import sample_z_law
from src.model.spec import ModelSpec
from src.simulate.paths import PathBundle, restrict_to_observations
from src.utils import derive_seed, grid_index, integral_to_index, make_rng

logger = logging.getLogger(__name__)

# stream index of the limit-law draw inside a replicate seed
LIMIT_LAW_STREAM = 0x5A


@dataclass(frozen=True)
class Measurement:
    statistic: float
    limit: float
    variance: Optional[float] = None
    extra: Dict[str, float] = field(default_factory=dict)

    @property
    def error(self) -> float:
        return self.statistic - self.limit


def levy_compensators(items: Sequence[FunctionalItem], spec: ModelSpec, delta_n: float) -> Dict[str, float]:
    """H(fψ_η) at this Δn for every T2/T4 item, keyed by item label."""
    out = {}
    for item in items:
        if item.theorem in ("T2", "T4"):
            eta = item.eta if item.eta is not None else math.inf
            result = levy_increment_expectation(spec, item.function, delta_n, eta=eta)
            logger.info("H(%s ψ_η) at Δn = %g: %.12g (error bound %.3g)", item.function.label, delta_n,
                        result.value, result.error_bound)
            out[item.label] = result.value
    return out


def _statistic(item: FunctionalItem, increments, delta_n: float, i: int, compensator: Optional[float]) -> float:
    theorem = LLN_ANALOGUE.get(item.theorem, item.theorem)
    f = item.function
    if theorem == "T3i":
        return delta_n * float(v_prime_n(f, increments, delta_n).values[i])
    if theorem == "T3ii":
        r = class_membership(f).equivalent_power
        return delta_n ** (1.0 - r / 2.0) * float(v_n(f, increments, delta_n).values[i])
    if theorem == "T3iii":
        return float(v_trunc_n(item.truncation, increments, delta_n).values[i])
    value = float(v_n(f, increments, delta_n).values[i])
    if theorem in ("T2", "T4"):
        value -= i * compensator
    return value


def _two_int_c_squared(path: PathBundle, t: float) -> float:
    k = grid_index(t, path.fine_step, path.grid.size - 1)
    return 2.0 * integral_to_index(path.grid, path.c[: k + 1] ** 2, k)


def measure(
    item: FunctionalItem,
    path: PathBundle,
    delta_n: float,
    t: float,
    compensator: Optional[float] = None,
    with_variance: bool = False,
    feasible: bool = False,
    limit_law: bool = False,
) -> Measurement:
    sampling = path.sampling.with_delta_n(delta_n)
    increments = restrict_to_observations(path, sampling)
    i = grid_index(t, delta_n, increments.size)

    statistic = _statistic(item, increments, delta_n, i, compensator)
    limit = float(item_limit(item, path, delta_n).values[i])
    variance = item_variance(item, path, t) if with_variance else None

    extra: Dict[str, float] = {}
    if feasible:
        # 2∫c² ≈ 2·V''(4)/(3Δn)
        quarticity = truncated_power_variation(4.0, item.truncation, increments, delta_n).values[i]
        extra["feasible_variance"] = 2.0 * float(quarticity) / (3.0 * delta_n)
    if limit_law:
        seed = derive_seed(path.seed, LIMIT_LAW_STREAM)
        draw = sample_z_law(item.function.derivative, path, seed, t).value
        if item.theorem == "T7ii":
            gaussian = make_rng(derive_seed(seed, 1)).standard_normal()
            draw += math.sqrt(_two_int_c_squared(path, t)) * gaussian
        extra["limit_draw"] = draw
    return Measurement(statistic=statistic, limit=limit, variance=variance, extra=extra)
