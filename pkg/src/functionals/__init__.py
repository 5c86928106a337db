from .levy import LevyExpectation, levy_increment_expectation
from .realized import FunctionalSeries, running_series, truncated_power_variation, v_n, v_prime_n, v_trunc_n
from .targets import (
    drift_variation,
    integrated_power,
    integrated_variance,
    jump_functional,
    limit_target_t1,
    t1_case,
)

__all__ = [
    "FunctionalSeries",
    "LevyExpectation",
    "drift_variation",
    "integrated_power",
    "integrated_variance",
    "jump_functional",
    "levy_increment_expectation",
    "limit_target_t1",
    "running_series",
    "t1_case",
    "truncated_power_variation",
    "v_n",
    "v_prime_n",
    "v_trunc_n",
]
