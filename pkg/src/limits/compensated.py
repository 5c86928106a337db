import logging
import math
from typing import Optional

import numpy as np

from src.errors import AdmissibilityError
from src.functionals.realized import FunctionalSeries
from src.functionals.targets import jump_functional
from src.functions.test_functions import CutoffPsi, TestFunction, class_membership
from src.model.spec import ModelSpec
from src.simulate.paths import PathBundle

logger = logging.getLogger(__name__)


def compensator_rate(f: TestFunction, eta: float, spec: ModelSpec) -> float:
    """λ·E[(fψ_η)(J)]: the drift of (fψ_η)⋆ν for a compound-Poisson model."""
    jumps = spec.jumps
    if jumps.kind == "none":
        return 0.0
    psi = CutoffPsi(eta)
    breakpoints = [0.0]
    if math.isfinite(eta):
        breakpoints += [-2.0 * eta, -eta, eta, 2.0 * eta]
    if f.kind == "square_indicator":
        breakpoints += [-f.u, f.u]
    return jumps.rate * jumps.size_law.expect(lambda x: f(x) * psi(x), breakpoints=breakpoints)


def compensated_jump_sum(
    f: TestFunction,
    eta: float,
    path: PathBundle,
    spec: Optional[ModelSpec] = None,
    delta_n: Optional[float] = None,
) -> FunctionalSeries:
    """Σ(f, ψ_η)_t = f⋆μ_t − t·λE[(fψ_η)(J)] on the observation grid."""
    spec = spec or path.spec
    if spec.jumps.kind not in ("none", "compound_poisson"):
        raise AdmissibilityError(
            "Σ(f, ψ_η) is computed for finite-activity jumps only",
            condition="compound_poisson jumps",
        )
    if not math.isfinite(eta) and not class_membership(f).bounded:
        raise AdmissibilityError(f"η = ∞ needs a bounded f, got {f.label}", condition="η < ∞ or f bounded")
    sums = jump_functional(f, path, delta_n)
    rate = compensator_rate(f, eta, spec)
    values = sums.values - sums.times * rate
    meta = dict(sums.meta, eta=eta, compensator_rate=rate)
    return FunctionalSeries(times=sums.times, values=values, kind="Sigma", label=f.label, step=sums.step, meta=meta)


def t2_limit_compound_poisson(
    f: TestFunction,
    eta: float,
    path: PathBundle,
    spec: Optional[ModelSpec] = None,
    delta_n: Optional[float] = None,
) -> FunctionalSeries:
    membership = class_membership(f)
    if not membership.order > 1.0:
        raise AdmissibilityError(
            f"{f.label} is in no E''_r with r ∈ (1,2)",
            condition="f ∈ E''_r for some r ∈ (1,2)",
        )
    return compensated_jump_sum(f, eta, path, spec, delta_n)
