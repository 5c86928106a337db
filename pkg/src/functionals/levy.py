"""
H(f) = E[f(X_Δn - X_0)] for Lévy models (constant drift, constant σ,
compound-Poisson jumps).

With k ~ Poisson(λΔn) jumps in the step, the increment is
bΔn + σ√Δn·U + J_1 + ... + J_k. The sum is expanded for k = 0, 1, 2; each
term is the integral of f against the exact law of the jump sum convolved
with the Gaussian part, and P(k ≥ 3)·sup|f| is reported as the
truncation tail.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, stats

from src.errors import AdmissibilityError, NotLevyError
from src.functions.test_functions import CutoffPsi, TestFunction, class_membership
from src.model.spec import JumpSizeLaw, ModelSpec, require_valid

logger = logging.getLogger(__name__)

_Z_SPAN = 12.0


@dataclass(frozen=True)
class LevyExpectation:
    value: float
    error_bound: float
    tail_bound: float


@dataclass(frozen=True)
class _Component:
    """One mixture component of the k-jump sum: an atom, a normal, or a density on a half-line."""

    weight: float
    kind: str
    loc: float = 0.0
    var: float = 0.0
    density: Optional[Callable[[float], float]] = None
    support: Tuple[float, float] = (0.0, 0.0)


def _jump_sum_components(law: JumpSizeLaw, k: int) -> List[_Component]:
    if k == 0:
        return [_Component(1.0, "atom", loc=0.0)]
    if law.kind == "fixed":
        return [_Component(1.0, "atom", loc=k * law.size)]
    if law.kind == "gaussian":
        return [_Component(1.0, "normal", loc=k * law.mean, var=k * law.variance)]

    a, b, p = law.eta_up, law.eta_down, law.p_up
    span_up, span_dn = 60.0 / a, 60.0 / b
    if k == 1:
        return [
            _Component(p, "density", density=lambda x: a * math.exp(-a * x), support=(0.0, span_up)),
            _Component(1.0 - p, "density", density=lambda x: b * math.exp(b * x), support=(-span_dn, 0.0)),
        ]
    # k == 2: Gamma(2) on each side, asymmetric Laplace for opposite signs
    lap = a * b / (a + b)
    return [
        _Component(p * p, "density", density=lambda x: a * a * x * math.exp(-a * x), support=(0.0, span_up)),
        _Component((1.0 - p) ** 2, "density", density=lambda x: -b * b * x * math.exp(b * x), support=(-span_dn, 0.0)),
        _Component(2.0 * p * (1.0 - p), "density", density=lambda x: lap * math.exp(-a * x), support=(0.0, span_up)),
        _Component(2.0 * p * (1.0 - p), "density", density=lambda x: lap * math.exp(b * x), support=(-span_dn, 0.0)),
    ]


def _gaussian_smooth(g: Callable[[float], float], y: float, s: float, kinks: Sequence[float], eps: float) -> float:
    """F_s(y) = E[g(y + sU)]."""
    if s == 0.0:
        return g(y)
    pts = sorted({(kk - y) / s for kk in kinks if abs(kk - y) < _Z_SPAN * s})
    value, _ = integrate.quad(
        lambda z: g(y + s * z) * math.exp(-0.5 * z * z),
        -_Z_SPAN, _Z_SPAN, points=pts or None, limit=200, epsabs=eps, epsrel=1e-12,
    )
    return value / math.sqrt(2.0 * math.pi)


def _component_expectation(g, comp: _Component, m: float, s: float, kinks, eps: float) -> float:
    if comp.kind == "atom":
        return _gaussian_smooth(g, m + comp.loc, s, kinks, eps)
    if comp.kind == "normal":
        return _gaussian_smooth(g, m + comp.loc, math.sqrt(s * s + comp.var), kinks, eps)
    lo, hi = comp.support
    pts = sorted({kk - m for kk in kinks if lo < kk - m < hi})
    value, _ = integrate.quad(
        lambda y: _gaussian_smooth(g, m + y, s, kinks, eps) * comp.density(y),
        lo, hi, points=pts or None, limit=200, epsabs=eps, epsrel=1e-10,
    )
    return value


def _integrand(f: TestFunction, eta: Optional[float]):
    psi = CutoffPsi(eta) if eta is not None else None

    def g(x: float) -> float:
        v = float(f(np.array([x]))[0])
        return v * float(psi(np.array([x]))[0]) if psi is not None else v

    kinks = [0.0]
    if f.kind == "square_indicator":
        kinks += [-f.u, f.u]
    scales = [s for s in (f.eta, eta) if s is not None and math.isfinite(s)]
    for sc in scales:
        kinks += [-2.0 * sc, -sc, sc, 2.0 * sc]
    return g, sorted(set(kinks))


def _sup_norm(f: TestFunction, eta: Optional[float]) -> float:
    # ψ_η ≤ 1 and vanishes off [-2η, 2η]
    if eta is not None and f.kind == "power":
        return (2.0 * eta) ** f.r
    return class_membership(f).sup_norm


def levy_increment_expectation(
    spec: ModelSpec,
    f: TestFunction,
    delta_n: float,
    precision: float = 1e-10,
    eta: Optional[float] = None,
) -> LevyExpectation:
    """H(f), or H(f·ψ_η) when ``eta`` is given."""
    require_valid(spec)
    if not spec.is_levy:
        raise NotLevyError(
            "levy_increment_expectation needs constant drift, constant σ and compound-Poisson jumps",
            condition="X is a Lévy process with finite jump activity",
        )
    sup = _sup_norm(f, eta)
    if not math.isfinite(sup):
        raise AdmissibilityError(f"{f.label} is unbounded; pass a finite cutoff η", condition="f bounded or η < ∞")

    g, kinks = _integrand(f, eta)
    m = spec.drift.value * delta_n
    s = spec.vol.sigma0 * math.sqrt(delta_n) if spec.has_diffusion else 0.0
    jumps = spec.jumps
    lam = jumps.rate * delta_n if jumps.kind == "compound_poisson" else 0.0

    weights = stats.poisson.pmf([0, 1, 2], lam) if lam > 0.0 else np.array([1.0, 0.0, 0.0])
    eps = precision / 10.0
    total = 0.0
    for k, w in enumerate(weights):
        if w == 0.0:
            continue
        part = math.fsum(
            comp.weight * _component_expectation(g, comp, m, s, kinks, eps)
            for comp in _jump_sum_components(jumps.size_law, k)
        )
        total += w * part

    tail = float(stats.poisson.sf(2, lam)) * sup if lam > 0.0 else 0.0
    logger.debug("H(%s) at Δn=%g: %.12g (tail %.3g)", f.label, delta_n, total, tail)
    return LevyExpectation(value=total, error_bound=precision + tail, tail_bound=tail)
