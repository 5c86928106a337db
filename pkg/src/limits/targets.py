"""
Limit values and conditional asymptotic variances along one simulated path.

Every CLT variance is the diagonal of the pairwise covariance of the joint
theorem. Components fall into five classes:

    J1  Δn·V'^n(g) − ∫ρ_σu(g)du                        (T5)
    J2  Δn^{1−r/2}V^n(f) − m_r∫c^{r/2}du                (T6)
    J3  V''^n(ϖ, α) − C,                       r = 2     (T6p)
    J4  V^n(f) − f⋆μ                                     (T7i)
    J5  V^n(f) − C − f⋆μ,                      r = 2     (T7ii)

and for two components j, k the conditional covariance per unit time is

    J1 × J1              ρ(f_j f_k) − ρ(f_j)ρ(f_k)
    J2|J3|J5 × same      (m_{rj+rk} − m_rj m_rk) c^{(rj+rk)/2}
    J2|J3|J5 × J1        ρ(h_rj f_k) − ρ(h_rj)ρ(f_k)
    J4 × J1|J2|J3        0

plus Σ f'_j(ΔX) f'_k(ΔX)(c_− + ½Δc) over the jumps when both are in J4 ∪ J5.
Path integrals use the trapezoid rule on the fine grid.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from src.errors import AdmissibilityError, NoLimitTargetError, NotLevyError
from src.functionals.realized import FunctionalSeries
from src.functionals.targets import (
    integrated_power,
    integrated_variance,
    jump_functional,
    limit_target_t1,
    on_observation_grid,
    t1_case,
)
from src.functions.gaussian import abs_moment, rho_many, rho_product, rho_square
from src.functions.test_functions import TestFunction, class_membership
from src.model.hypotheses import activity_index, hypothesis_profile
from src.model.spec import ModelSpec, TruncationSpec
from src.simulate.paths import PathBundle
from src.utils import grid_index, integral_to_index, running_integral

from .compensated import compensated_jump_sum
from .regions import RegionCheck, clt_region_check, require_clt_region, t6_lower_bound, t6p_bound
from .theorems import CLT_THEOREMS, LLN_ANALOGUE, FunctionalItem, theorem_info
from .z_law import z_law_covariance, z_law_variance

logger = logging.getLogger(__name__)

COMPONENT_CLASSES = {"T5": "J1", "T6": "J2", "T6p": "J3", "T7i": "J4", "T7ii": "J5"}

Target = Union[TestFunction, TruncationSpec]


@dataclass(frozen=True, eq=False)
class TheoremTarget:
    theorem: str
    limit_series: FunctionalSeries
    variance_t: Optional[float]
    rate_scale: float
    admissibility: Dict[str, Any] = field(default_factory=dict)
    meta: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "limit": self.limit_series.terminal,
            "variance": self.variance_t,
            "rate_scale": self.rate_scale,
            "admissibility": self.admissibility,
        }


def _item(theorem: str, obj: Union[Target, FunctionalItem], eta: Optional[float]) -> FunctionalItem:
    if isinstance(obj, FunctionalItem):
        return obj
    return FunctionalItem(theorem, obj, eta)


def _require_levy(spec: ModelSpec, theorem: str) -> None:
    if not spec.is_levy:
        raise NotLevyError(
            f"{theorem} is computed for Lévy models only (constant drift and σ, finite-activity jumps)",
            condition="X Lévy with finite jump activity",
        )


def _check_lln(item: FunctionalItem, spec: ModelSpec) -> Dict[str, Any]:
    theorem = LLN_ANALOGUE.get(item.theorem, item.theorem)
    f = item.function
    flags: Dict[str, Any] = {}

    if theorem.startswith("T1"):
        case, clause = t1_case(f, spec)
        if theorem != "T1" and theorem != "T1" + case:
            raise NoLimitTargetError(
                f"{theorem} does not cover {f.label} under this model ({clause} gives T1{case})",
                condition=theorem_info(theorem).conditions,
            )
        flags.update(case=case, clause=clause)

    elif theorem in ("T2", "T4"):
        _require_levy(spec, theorem)
        m = class_membership(f)
        if theorem == "T2" and not (m.continuous and m.order > 1.0):
            raise AdmissibilityError(f"T2 needs f ∈ E''_r for some r ∈ (1,2), got {f.label}",
                                     condition="f ∈ E''_r, r ∈ (1,2)")
        if theorem == "T4" and m.equivalent_power != 1.0:
            raise AdmissibilityError(f"T4 needs f ∈ E'_1, got {f.label}", condition="f ∈ E'_1")
        eta = item.eta if item.eta is not None else math.inf
        if not math.isfinite(eta) and not m.bounded:
            raise AdmissibilityError(f"{theorem} with η = ∞ needs a bounded f, got {f.label}",
                                     condition="η < ∞ or f bounded")

    elif theorem == "T3i":
        m = class_membership(f)
        if not m.continuous:
            raise AdmissibilityError(f"T3(i) needs a continuous g, got {f.label}", condition="g continuous")
        if not spec.is_continuous and not (m.bounded or (f.kind == "power" and f.r < 2.0)):
            raise AdmissibilityError(f"T3(i) with jumps needs g(x)/x² → 0 at ∞, got {f.label}",
                                     condition="g(x)/x² → 0 as |x| → ∞")

    elif theorem == "T3ii":
        r = class_membership(f).equivalent_power
        limit = math.inf if spec.is_continuous else 2.0
        if r is None or not 0.0 < r < limit:
            raise AdmissibilityError(f"T3(ii) needs f ∈ E'_r with r ∈ (0,2), got {f.label}",
                                     condition="f ∈ E'_r, r ∈ (0,2)")
        flags["r"] = r

    elif theorem == "T7i":
        _check_t7i(f)

    elif theorem == "T7ii":
        _check_t7ii(f)

    return flags


def _check_t7i(f: TestFunction) -> None:
    if f.kind not in ("power", "power_cutoff") or not f.r > 3.0:
        raise AdmissibilityError(
            f"T7(i) needs f C² near 0 with f(0) = f'(0) = 0 and f'' = o(|x|), got {f.label}",
            condition="f C², f(0) = f'(0) = 0, f''(x) = o(|x|)",
        )


def _check_t7ii(f: TestFunction) -> None:
    m = class_membership(f)
    if m.exact_power != 2.0 or not m.c1:
        raise AdmissibilityError(f"T7(ii) needs f ∈ E_2 ∩ C¹, got {f.label}", condition="f ∈ E_2 ∩ C¹")


def region_for(item: FunctionalItem, spec: ModelSpec) -> RegionCheck:
    s = activity_index(spec)
    if item.theorem == "T6":
        return clt_region_check("T6", s, r=item.function.r, continuous=spec.is_continuous)
    if item.theorem == "T6p":
        return clt_region_check("T6p", s, varpi=item.truncation.varpi, continuous=spec.is_continuous)
    return clt_region_check(item.theorem, s, continuous=spec.is_continuous)


def _check_component(item: FunctionalItem, spec: ModelSpec) -> None:
    """Function-class and hypothesis conditions of a CLT theorem, regions aside."""
    f = item.function
    profile = hypothesis_profile(spec)

    if item.theorem == "T5":
        m = class_membership(f)
        smooth = m.bounded and m.c2 and m.even
        if not smooth and not (spec.is_continuous and m.c1 and m.even):
            raise AdmissibilityError(f"T5 needs an even C²_b function g, got {f.label}", condition="g even, C²_b")

    elif item.theorem == "T6":
        m = class_membership(f)
        if m.exact_power is None:
            raise AdmissibilityError(f"T6 needs f ∈ E_r, got {f.label}", condition="f ∈ E_r")
        if not spec.is_continuous and m.exact_power > 1.0:
            raise AdmissibilityError(f"T6 needs r ∈ (0,1] when X jumps, got r = {m.exact_power:g}",
                                     condition="r ∈ (0,1]")
        needs_h_prime = not (spec.is_continuous and m.exact_power > 1.0)
        if needs_h_prime and "H'" not in profile:
            raise AdmissibilityError("T6 needs (H'): c bounded away from 0", condition="(H')")

    elif item.theorem == "T7i":
        _check_t7i(f)

    elif item.theorem == "T7ii":
        _check_t7ii(f)


def _check_clt(item: FunctionalItem, spec: ModelSpec) -> Dict[str, Any]:
    _check_component(item, spec)
    region = require_clt_region(region_for(item, spec))
    return {"region": region.to_dict()}


def check_admissible(item: FunctionalItem, spec: ModelSpec, clt: bool = False) -> Dict[str, Any]:
    """Flags describing why ``item`` applies to ``spec``; raises AdmissibilityError otherwise."""
    flags: Dict[str, Any] = {
        "theorem": item.theorem,
        "hypotheses": hypothesis_profile(spec).names(),
        "levy_only": theorem_info(item.theorem).levy_only,
    }
    flags.update(_check_lln(item, spec))
    if clt:
        if item.theorem not in CLT_THEOREMS:
            raise AdmissibilityError(f"{item.theorem} has no central limit theorem", condition="a CLT theorem")
        flags.update(_check_clt(item, spec))
    return flags


def _fine_index(path: PathBundle, t: Optional[float]) -> int:
    t = path.horizon if t is None else t
    return grid_index(t, path.fine_step, path.grid.size - 1)


def _integrate(path: PathBundle, integrand, t: Optional[float]) -> float:
    """∫_0^t integrand(σ_u) du on the fine grid."""
    k = _fine_index(path, t)
    y = np.asarray(integrand(path.sigma[: k + 1]), dtype=float)
    return integral_to_index(path.grid, y, k)


def _on_grid(values: np.ndarray, path: PathBundle, delta_n: float, kind: str, label: str) -> FunctionalSeries:
    obs = on_observation_grid(values, path, delta_n)
    times = np.arange(obs.size, dtype=float) * delta_n
    return FunctionalSeries(times=times, values=obs, kind=kind, label=label, step=delta_n)


def item_limit(item: FunctionalItem, path: PathBundle, delta_n: Optional[float] = None) -> FunctionalSeries:
    """Limit series of ``item`` on the observation grid, without admissibility checks."""
    delta_n = delta_n or path.sampling.delta_n
    theorem = LLN_ANALOGUE.get(item.theorem, item.theorem)
    f = item.function

    if theorem.startswith("T1") or theorem == "T7ii":
        return limit_target_t1(f, path, delta_n)
    if theorem in ("T2", "T4"):
        eta = item.eta if item.eta is not None else math.inf
        return compensated_jump_sum(f, eta, path, delta_n=delta_n)
    if theorem == "T3i":
        values = running_integral(path.grid, rho_many(f, path.sigma))
        return _on_grid(values, path, delta_n, "int_rho", f.label)
    if theorem == "T3ii":
        r = class_membership(f).equivalent_power
        values = abs_moment(r) * integrated_power(path, r / 2.0).values
        return _on_grid(values, path, delta_n, "m_r int_c", f.label)
    if theorem == "T3iii":
        return _on_grid(integrated_variance(path).values, path, delta_n, "C", item.truncation.label)
    if theorem == "T7i":
        return jump_functional(f, path, delta_n)
    raise ValueError(f"Unknown theorem: {item.theorem}")


def lln_limit(
    theorem: str,
    obj: Union[Target, FunctionalItem],
    path: PathBundle,
    delta_n: Optional[float] = None,
    eta: Optional[float] = None,
) -> FunctionalSeries:
    item = _item(theorem, obj, eta)
    check_admissible(item, path.spec)
    return item_limit(item, path, delta_n)


def component_class(theorem: str) -> str:
    if theorem not in COMPONENT_CLASSES:
        raise ValueError(f"{theorem} is not a component of the joint CLT; expected one of {sorted(COMPONENT_CLASSES)}")
    return COMPONENT_CLASSES[theorem]


def _component_power(item: FunctionalItem) -> float:
    """r(j) of a J2, J3 or J5 component."""
    if item.theorem == "T6":
        return float(class_membership(item.function).exact_power)
    return 2.0


def pair_covariance(
    item_j: FunctionalItem,
    item_k: FunctionalItem,
    path: PathBundle,
    t: Optional[float] = None,
) -> float:
    """Conditional covariance at time t of the limits of two scaled components."""
    cj, ck = component_class(item_j.theorem), component_class(item_k.theorem)
    # order so that a J1 component, if any, comes second
    if cj == "J1" and ck != "J1":
        item_j, item_k, cj, ck = item_k, item_j, ck, cj

    continuous_part = 0.0
    if "J4" not in (cj, ck):
        if cj == ck == "J1":
            fj, fk = item_j.function, item_k.function
            continuous_part = _integrate(
                path, lambda s: rho_product(fj, fk, s) - rho_many(fj, s) * rho_many(fk, s), t
            )
        elif ck == "J1":
            rj, fk = _component_power(item_j), item_k.function
            h = TestFunction.power(rj)
            continuous_part = _integrate(
                path, lambda s: rho_product(h, fk, s) - abs_moment(rj) * s ** rj * rho_many(fk, s), t
            )
        else:
            rj, rk = _component_power(item_j), _component_power(item_k)
            factor = abs_moment(rj + rk) - abs_moment(rj) * abs_moment(rk)
            continuous_part = factor * _integrate(path, lambda s: s ** (rj + rk), t)

    jump_part = 0.0
    if cj in ("J4", "J5") and ck in ("J4", "J5"):
        jump_part = z_law_covariance(item_j.function.derivative, item_k.function.derivative, path, t)

    value = continuous_part + jump_part
    if item_j == item_k:
        value = max(value, 0.0)
    return value


def item_variance(item: FunctionalItem, path: PathBundle, t: Optional[float] = None) -> float:
    """Conditional asymptotic variance at t, without admissibility checks.

    Uses the one-theorem formulas, never ``pair_covariance``, so the diagonal
    of the joint covariance can be checked against it:

        T4          (1 − 2/π) C_t
        T5          ∫ ρ_σu(g²) − ρ_σu(g)² du
        T6, T6p     (m_2r − m_r²) ∫ c_u^r du,    r = 2 for T6p
        T7i         C(f')_t
        T7ii        2 ∫ c_u² du + C(f')_t
    """
    t = path.horizon if t is None else t
    f = item.function
    if item.theorem == "T4":
        value = (1.0 - 2.0 / math.pi) * _integrate(path, lambda s: s * s, t)
    elif item.theorem == "T5":
        value = _integrate(path, lambda s: rho_square(f, s) - rho_many(f, s) ** 2, t)
    elif item.theorem in ("T6", "T6p"):
        r = _component_power(item)
        value = (abs_moment(2.0 * r) - abs_moment(r) ** 2) * integrated_power(path, r).value_at(t)
    elif item.theorem == "T7i":
        value = z_law_variance(f.derivative, path, t)
    elif item.theorem == "T7ii":
        value = 2.0 * integrated_power(path, 2.0).value_at(t) + z_law_variance(f.derivative, path, t)
    else:
        raise ValueError(f"{item.theorem} has no central limit theorem")
    return max(value, 0.0)


def clt_variance(
    theorem: str,
    obj: Union[Target, FunctionalItem],
    path: PathBundle,
    t: Optional[float] = None,
    eta: Optional[float] = None,
) -> float:
    item = _item(theorem, obj, eta)
    check_admissible(item, path.spec, clt=True)
    return item_variance(item, path, t)


def rate_scale(theorem: str, delta_n: float) -> float:
    """Square of the CLT normalization: Δn for the √Δn theorems, 1 for T4."""
    return 1.0 if theorem == "T4" else delta_n


def theorem_target(
    theorem: str,
    obj: Union[Target, FunctionalItem],
    path: PathBundle,
    delta_n: Optional[float] = None,
    t: Optional[float] = None,
    eta: Optional[float] = None,
) -> TheoremTarget:
    item = _item(theorem, obj, eta)
    delta_n = delta_n or path.sampling.delta_n
    clt = item.is_clt
    flags = check_admissible(item, path.spec, clt=clt)
    series = item_limit(item, path, delta_n)
    variance = item_variance(item, path, t) if clt else None
    return TheoremTarget(
        theorem=item.theorem,
        limit_series=series,
        variance_t=variance,
        rate_scale=rate_scale(item.theorem, delta_n) if clt else 1.0,
        admissibility=flags,
        meta={"label": item.label, "delta_n": delta_n},
    )


def t8_admissibility(items: Sequence[FunctionalItem], spec: ModelSpec) -> Dict[str, Any]:
    """Hypotheses of the joint CLT for the components ``items``."""
    classes = [component_class(it.theorem) for it in items]
    for it in items:
        _check_lln(it, spec)
        _check_component(it, spec)

    s = activity_index(spec)
    continuous = spec.is_continuous
    conditions = []

    if "J1" in classes:
        conditions.append("J₁ ⇒ s < 1")
        if not continuous and not s < 1.0:
            raise AdmissibilityError(f"joint CLT refused: s = {s:g} ≥ 1 with a J₁ component", condition="s < 1")

    j2 = [it for it, c in zip(items, classes) if c == "J2"]
    if j2:
        powers = [class_membership(it.function).exact_power for it in j2]
        if any(r is None for r in powers):
            raise AdmissibilityError("J₂ components need f ∈ E_r", condition="f ∈ E_r")
        r_min = min(powers)
        profile = hypothesis_profile(spec)
        needs_h_prime = not (continuous and r_min > 1.0)
        if needs_h_prime and "H'" not in profile:
            raise AdmissibilityError("joint CLT refused: J₂ components need (H')", condition="(H')")
        if not continuous:
            if max(powers) >= 1.0:
                raise AdmissibilityError("J₂ components need r(j) ∈ (0,1) when X jumps", condition="r(j) < 1")
            if s > 2.0 / 3.0 and not (s < 1.0 and t6_lower_bound(s) < r_min):
                raise AdmissibilityError(
                    f"joint CLT refused: inf r = {r_min:g} at s = {s:g} violates (1−√(3s²−8s+5))/(2−s) < inf r",
                    condition="s ≤ 2/3, or 2/3 < s < 1 and (1−√(3s²−8s+5))/(2−s) < inf r",
                )
        conditions.append("J₂ ⇒ (H') and the T6 region at inf r")

    j3 = [it for it, c in zip(items, classes) if c == "J3"]
    if j3:
        bound = min(t6p_bound(it.truncation.varpi) for it in j3)
        if not continuous and not s < bound:
            raise AdmissibilityError(
                f"joint CLT refused: s = {s:g} ≥ inf (4ϖ−1)/(2ϖ) = {bound:.6g}",
                condition="s < inf (4ϖ−1)/(2ϖ)",
            )
        conditions.append("J₃ ⇒ s < inf (4ϖ−1)/(2ϖ)")

    return {"classes": classes, "activity_index": s, "conditions": conditions}
