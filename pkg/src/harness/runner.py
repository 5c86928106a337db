"""
Monte Carlo runs of an ExperimentPlan.

Rung ``j`` of the ladder draws its replicate seeds from
``derive_seed(base_seed, j)``; replicate ``k`` of the rung uses
``derive_seed(rung_seed, k)``. Replicates are independent pure functions of
their seed and come back in submission order, and every aggregate is taken
with ``math.fsum``, so reports do not depend on the number of workers.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from src.constants import CLT_MIN_REPLICATES, DIAGONAL_RTOL
from src.errors import AdmissibilityError, DegenerateVarianceError
from src.limits.targets import (
    check_admissible,
    component_class,
    item_variance,
    pair_covariance,
    rate_scale,
    region_for,
    t8_admissibility,
)
from src.limits.theorems import CLT_THEOREMS, FunctionalItem
from src.simulate.paths import replicate_seeds, simulate_path
from src.utils import derive_seed

from .measures import Measurement, levy_compensators, measure
from .plan import ExperimentPlan
from .statistics import RateFit, fit_rate, ks_distance, summarize

logger = logging.getLogger(__name__)


def _replicate(
    plan: ExperimentPlan,
    items: Sequence[FunctionalItem],
    delta_n: float,
    seed: int,
    compensators: Dict[str, float],
    with_variance: bool,
) -> List[Measurement]:
    path = simulate_path(plan.model, plan.sampling_for(delta_n), seed, plan.strict_grid)
    t = plan.discretized_time(delta_n)
    return [
        measure(
            item, path, delta_n, t,
            compensator=compensators.get(item.label),
            with_variance=with_variance,
            feasible=with_variance and plan.feasible and item.theorem == "T6p",
            limit_law=with_variance and item.theorem in ("T7i", "T7ii"),
        )
        for item in items
    ]


def _run_rung(
    plan: ExperimentPlan,
    items: Sequence[FunctionalItem],
    rung: int,
    jobs: int,
    with_variance: bool,
) -> List[List[Measurement]]:
    """Measurements indexed [replicate][item]."""
    delta_n = plan.delta_ladder[rung]
    seeds = replicate_seeds(derive_seed(plan.base_seed, rung), plan.replicates)
    compensators = levy_compensators(items, plan.model, delta_n)
    tasks = (delayed(_replicate)(plan, items, delta_n, s, compensators, with_variance) for s in seeds)
    if jobs == 1:
        results = (task[0](*task[1], **task[2]) for task in tasks)
    else:
        results = Parallel(n_jobs=jobs, return_as="generator")(tasks)
    desc = f"{plan.name} Δn=2^{math.log2(delta_n):g}"
    quiet = not logger.isEnabledFor(logging.INFO)
    return list(tqdm(results, total=plan.replicates, desc=desc, disable=quiet, leave=False))


def _refusal(exc: Exception) -> Dict[str, Any]:
    return {
        "kind": type(exc).__name__,
        "message": str(exc),
        "condition": getattr(exc, "condition", None),
        "exponent": getattr(exc, "exponent", None),
    }


def _admit(items: Sequence[FunctionalItem], plan: ExperimentPlan, clt: bool):
    admitted, entries = [], {}
    for item in items:
        try:
            flags = check_admissible(item, plan.model, clt=clt)
        except AdmissibilityError as exc:
            logger.warning("%s refused: %s", item.label, exc)
            entries[item.label] = {"label": item.label, "theorem": item.theorem, "refused": _refusal(exc),
                                   "passed": None}
        else:
            admitted.append(item)
            entries[item.label] = {"label": item.label, "theorem": item.theorem, "admissibility": flags}
    return admitted, entries


def _band_check(value: float, lo: float, hi: float) -> Dict[str, Any]:
    return {"value": value, "band": [lo, hi], "passed": bool(math.isfinite(value) and lo <= value <= hi)}


def _finish(result: Dict[str, Any]) -> Dict[str, Any]:
    entries = result["functionals"]
    verdicts = [e["passed"] for e in entries if e.get("passed") is not None]
    result["refused"] = any("refused" in e for e in entries)
    result["passed"] = all(verdicts) and not result["refused"]
    return result


def _rung_summary(delta_n: float, errors: np.ndarray, limits: np.ndarray) -> Dict[str, Any]:
    s = summarize(errors)
    mean_abs_limit = summarize(np.abs(limits))["mean"]
    rel = s["rmse"] / mean_abs_limit if mean_abs_limit > 0.0 else s["rmse"]
    return {
        "delta_n": delta_n,
        "mean_error": s["mean"],
        "rmse": s["rmse"],
        "error_variance": s["variance"],
        "mean_abs_limit": mean_abs_limit,
        "rel_rmse": rel,
    }


def _rate(rungs: List[Dict[str, Any]], key: str = "rmse") -> Optional[RateFit]:
    if len(rungs) < 2:
        return None
    fit = fit_rate([r["delta_n"] for r in rungs], [r[key] for r in rungs])
    if not fit.degenerate and all(r["error_variance"] == 0.0 for r in rungs):
        return RateFit(fit.slope, fit.stderr, fit.intercept, True, "errors are deterministic across replicates")
    return fit


def run_lln(plan: ExperimentPlan, jobs: int = 1) -> Dict[str, Any]:
    """Error curves over the ladder, rate slope and the relative-error band at the finest rung."""
    items, entries = _admit(plan.functionals, plan, clt=False)
    per_rung = [_run_rung(plan, items, j, jobs, with_variance=False) for j in range(len(plan.delta_ladder))] \
        if items else []
    bands = plan.bands

    for idx, item in enumerate(items):
        entry = entries[item.label]
        rungs, scaled = [], []
        for delta_n, measurements in zip(plan.delta_ladder, per_rung):
            errors = np.array([m[idx].error for m in measurements])
            limits = np.array([m[idx].limit for m in measurements])
            rungs.append(_rung_summary(delta_n, errors, limits))
            if plan.exploratory:
                scaled.append(_rung_summary(delta_n, errors / math.sqrt(delta_n), limits))
        fit = _rate(rungs)
        entry["rungs"] = rungs
        entry["rate"] = fit.to_dict() if fit else None

        if plan.exploratory:
            # no CLT for 2 < r ≤ 3: tabulate, never judge
            scaled_fit = _rate(scaled)
            entry["exploratory"] = {"rungs": scaled, "rate": scaled_fit.to_dict() if scaled_fit else None}
            entry["passed"] = None
            continue

        checks = {"rel_error": {"value": rungs[-1]["rel_rmse"], "band": [0.0, bands.max_rel_error],
                                "passed": bool(rungs[-1]["rel_rmse"] <= bands.max_rel_error)}}
        if bands.slope_band:
            lo, hi = bands.slope_band
            if fit is None or fit.degenerate:
                checks["slope"] = {"value": None, "band": [lo, hi], "passed": False,
                                   "reason": fit.reason if fit else "≥ 2 rungs required"}
            else:
                checks["slope"] = _band_check(fit.slope, lo, hi)
        if plan.degenerate_rate and item.theorem in CLT_THEOREMS:
            entry["degenerate_rate"] = _degenerate_rate(item, plan, fit)
            if "passed" in entry["degenerate_rate"]:
                checks["degenerate_rate"] = {"passed": entry["degenerate_rate"]["passed"]}
        entry["checks"] = checks
        entry["passed"] = all(c["passed"] for c in checks.values())

    return _finish({"experiment": plan.name, "command": "lln", "plan": plan.to_dict(),
                    "functionals": [entries[it.label] for it in plan.functionals]})


def _degenerate_rate(item: FunctionalItem, plan: ExperimentPlan, fit: Optional[RateFit]) -> Dict[str, Any]:
    region = region_for(item, plan.model)
    block: Dict[str, Any] = {"region": region.to_dict()}
    if region.clt_holds:
        block["note"] = "CLT region holds; no degenerate-branch bound to check"
        return block
    if fit is None or fit.degenerate:
        block["passed"] = False
        block["reason"] = fit.reason if fit else "≥ 2 rungs required"
        return block
    # error = o(Δn^exponent): the observed decay rate −slope must reach the exponent
    observed = -fit.slope
    block.update(observed_rate=observed, exponent=region.exponent,
                 passed=bool(observed >= region.exponent - 2.0 * fit.stderr))
    return block


def standardize(errors: np.ndarray, variances: np.ndarray, scale: float) -> np.ndarray:
    """z_m = e_m / √(scale·v_m); raises when any conditional variance is zero."""
    if np.any(variances <= 0.0):
        raise DegenerateVarianceError(
            f"conditional variance is 0 on {int(np.sum(variances <= 0.0))} of {variances.size} paths; "
            "cannot standardize"
        )
    return errors / np.sqrt(scale * variances)


def _clt_block(z: np.ndarray, bands) -> Dict[str, Any]:
    s = summarize(z)
    d, p = ks_distance(z)
    lo, hi = bands.variance_band
    return {
        "count": int(z.size),
        "z_mean": s["mean"],
        "z_variance": s["variance"],
        "ks_distance": d,
        "ks_pvalue": p,
        "checks": {
            "variance": _band_check(s["variance"], lo, hi),
            "ks": {"value": p, "band": [bands.ks_p_min, 1.0], "passed": bool(p >= bands.ks_p_min)},
        },
    }


def run_clt(plan: ExperimentPlan, jobs: int = 1) -> Dict[str, Any]:
    """Studentized errors at the finest Δn, conditionally on each path."""
    rung = len(plan.delta_ladder) - 1
    delta_n = plan.delta_ladder[rung]
    items, entries = _admit(plan.functionals, plan, clt=True)
    if plan.replicates < CLT_MIN_REPLICATES:
        raise ValueError(f"the KS check needs M ≥ {CLT_MIN_REPLICATES} replicates, got {plan.replicates}")
    if plan.feasible:
        logger.warning("feasible T6p studentization is experimental")
    measurements = _run_rung(plan, items, rung, jobs, with_variance=True) if items else []

    for idx, item in enumerate(items):
        entry = entries[item.label]
        errors = np.array([m[idx].error for m in measurements])
        variances = np.array([m[idx].variance for m in measurements])
        scale = rate_scale(item.theorem, delta_n)
        entry["delta_n"] = delta_n
        entry["variance_mean"] = summarize(variances)["mean"]

        if item.theorem == "T7i":
            # Z(f') vanishes on paths without jumps
            keep = variances > 0.0
            entry["excluded_zero_variance"] = int(np.sum(~keep))
            errors, variances = errors[keep], variances[keep]
            measurements_kept = [m for m, k in zip(measurements, keep) if k]
        else:
            measurements_kept = measurements
        try:
            z = standardize(errors, variances, scale)
            if z.size < 8:
                raise DegenerateVarianceError(f"only {z.size} paths with a positive conditional variance")
        except DegenerateVarianceError as exc:
            logger.warning("%s: %s", item.label, exc)
            entry["refused"] = _refusal(exc)
            entry["passed"] = None
            continue

        block = _clt_block(z, plan.bands)
        checks = dict(block["checks"])
        if item.theorem in ("T7i", "T7ii"):
            draws = np.array([m[idx].extra["limit_draw"] for m in measurements_kept])
            entry["limit_law"] = _clt_block(draws / np.sqrt(variances), plan.bands)
            checks["limit_law_variance"] = entry["limit_law"]["checks"]["variance"]
        if plan.feasible and item.theorem == "T6p":
            estimated = np.array([m[idx].extra["feasible_variance"] for m in measurements])
            try:
                entry["feasible"] = {"experimental": True,
                                     **_clt_block(standardize(errors, estimated, scale), plan.bands)}
            except DegenerateVarianceError as exc:
                entry["feasible"] = {"experimental": True, "error": str(exc)}
        entry["clt"] = block
        entry["passed"] = all(c["passed"] for c in checks.values())

    return _finish({"experiment": plan.name, "command": "clt", "plan": plan.to_dict(),
                    "functionals": [entries[it.label] for it in plan.functionals]})


def run_covariance_pair(plan: ExperimentPlan, jobs: int = 1) -> Dict[str, Any]:
    """Empirical covariance of two √Δn-scaled errors against the averaged conditional target."""
    rung = len(plan.delta_ladder) - 1
    delta_n = plan.delta_ladder[rung]
    item_j, item_k = plan.functionals
    result = {"experiment": plan.name, "command": "cov", "plan": plan.to_dict()}
    entry: Dict[str, Any] = {"label": f"{item_j.label} | {item_k.label}", "theorem": "T8pair",
                             "classes": [component_class(item_j.theorem), component_class(item_k.theorem)]}
    try:
        entry["admissibility"] = t8_admissibility([item_j, item_k], plan.model)
    except AdmissibilityError as exc:
        logger.warning("%s refused: %s", entry["label"], exc)
        entry["refused"] = _refusal(exc)
        entry["passed"] = None
        result["functionals"] = [entry]
        return _finish(result)

    seeds = replicate_seeds(derive_seed(plan.base_seed, rung), plan.replicates)
    tasks = (delayed(_pair_replicate)(plan, item_j, item_k, delta_n, s) for s in seeds)
    if jobs == 1:
        rows = [task[0](*task[1], **task[2]) for task in tasks]
    else:
        rows = list(Parallel(n_jobs=jobs, return_as="generator")(tasks))
    rows = np.array(rows)
    yj, yk, target, var_j, var_k, diag_gap = rows.T

    m = yj.size
    cj, ck = yj - math.fsum(yj.tolist()) / m, yk - math.fsum(yk.tolist()) / m
    products = cj * ck
    empirical = math.fsum(products.tolist()) / (m - 1)
    theoretical = math.fsum(target.tolist()) / m
    stderr = math.sqrt(summarize(products)["variance"] / m)
    z = (empirical - theoretical) / stderr if stderr > 0.0 else math.inf
    emp_var_j = math.fsum((cj * cj).tolist()) / (m - 1)
    emp_var_k = math.fsum((ck * ck).tolist()) / (m - 1)
    eig_min = float(np.linalg.eigvalsh(np.array([[emp_var_j, empirical], [empirical, emp_var_k]])).min())

    entry["covariance"] = {
        "delta_n": delta_n,
        "empirical": empirical,
        "theoretical": theoretical,
        "stderr": stderr,
        "z": z,
        "empirical_variances": [emp_var_j, emp_var_k],
        "theoretical_variances": [math.fsum(var_j.tolist()) / m, math.fsum(var_k.tolist()) / m],
        "psd": bool(eig_min >= -1e-12 * max(emp_var_j, emp_var_k, 1.0)),
        "max_diagonal_gap": float(np.max(diag_gap)),
        "diagonal_consistent": bool(np.max(diag_gap) <= DIAGONAL_RTOL),
    }
    entry["checks"] = {
        "covariance_z": {"value": z, "band": [-plan.bands.max_abs_z, plan.bands.max_abs_z],
                         "passed": bool(abs(z) <= plan.bands.max_abs_z)},
        "diagonal": _band_check(float(np.max(diag_gap)), 0.0, DIAGONAL_RTOL),
    }
    entry["passed"] = all(c["passed"] for c in entry["checks"].values())
    result["functionals"] = [entry]
    return _finish(result)


def _pair_replicate(plan: ExperimentPlan, item_j: FunctionalItem, item_k: FunctionalItem, delta_n: float,
                    seed: int):
    path = simulate_path(plan.model, plan.sampling_for(delta_n), seed, plan.strict_grid)
    t = plan.discretized_time(delta_n)
    root = math.sqrt(delta_n)
    mj = measure(item_j, path, delta_n, t)
    mk = measure(item_k, path, delta_n, t)
    var_j = pair_covariance(item_j, item_j, path, t)
    var_k = pair_covariance(item_k, item_k, path, t)
    gap = max(_relative_gap(var_j, item_variance(item_j, path, t)),
              _relative_gap(var_k, item_variance(item_k, path, t)))
    return (
        mj.error / root,
        mk.error / root,
        pair_covariance(item_j, item_k, path, t),
        var_j,
        var_k,
        gap,
    )


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0.0 else 0.0


def run_plan(plan: ExperimentPlan, jobs: int = 1) -> Dict[str, Any]:
    if plan.command == "lln":
        return run_lln(plan, jobs)
    elif plan.command == "clt":
        return run_clt(plan, jobs)
    elif plan.command == "cov":
        return run_covariance_pair(plan, jobs)
    else:
        raise ValueError(f"Unknown command: {plan.command}")
