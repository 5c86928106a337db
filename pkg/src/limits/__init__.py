from .compensated import compensated_jump_sum, compensator_rate, t2_limit_compound_poisson
from .regions import RegionCheck, clt_region_check, require_clt_region, t6_lower_bound, t6_rate_exponent, t6p_bound
from .targets import (
    COMPONENT_CLASSES,
    TheoremTarget,
    check_admissible,
    clt_variance,
    component_class,
    item_limit,
    item_variance,
    lln_limit,
    pair_covariance,
    rate_scale,
    region_for,
    t8_admissibility,
    theorem_target,
)
from .theorems import CLT_THEOREMS, LLN_THEOREMS, THEOREMS, FunctionalItem, TheoremInfo, theorem_info
from .z_law import ZLawSample, sample_z_law, sample_z_law_many, z_law_covariance, z_law_variance

__all__ = [
    "CLT_THEOREMS",
    "COMPONENT_CLASSES",
    "FunctionalItem",
    "LLN_THEOREMS",
    "RegionCheck",
    "THEOREMS",
    "TheoremInfo",
    "TheoremTarget",
    "ZLawSample",
    "check_admissible",
    "clt_region_check",
    "clt_variance",
    "compensated_jump_sum",
    "compensator_rate",
    "component_class",
    "item_limit",
    "item_variance",
    "lln_limit",
    "pair_covariance",
    "rate_scale",
    "region_for",
    "require_clt_region",
    "sample_z_law",
    "sample_z_law_many",
    "t2_limit_compound_poisson",
    "t6_lower_bound",
    "t6_rate_exponent",
    "t6p_bound",
    "t8_admissibility",
    "theorem_info",
    "theorem_target",
    "z_law_covariance",
    "z_law_variance",
]
