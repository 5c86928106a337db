"""
Gaussian absolute moments m_r and the Gaussian functional ρ_σ(g) = E[g(σU)].

Powers use the closed form, the truncated square uses the error function,
everything else goes through probabilists' Gauss–Hermite quadrature with the
node count doubled from 32 until two successive estimates agree for a given
σ. Every σ still unconverged at the node cap falls back to adaptive
quadrature; a QuadratureError is raised when that misses the tolerance too.
"""

import logging
import math
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import integrate, special

from src.constants import HERMITE_CHUNK, HERMITE_MAX_NODES, HERMITE_MIN_NODES, QUAD_ATOL, RHO_RTOL
from src.errors import QuadratureError
from src.functions.test_functions import TestFunction

logger = logging.getLogger(__name__)

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_NODES = {}


def _hermite_nodes(n: int):
    if n not in _NODES:
        x, w = hermegauss(n)
        _NODES[n] = (x, w / _SQRT_2PI)
    return _NODES[n]


def abs_moment(r: float) -> float:
    """m_r = E|U|^r = 2^{r/2} Γ((r+1)/2) / √π; exact (r-1)!! for even integers."""
    if r < 0.0:
        raise ValueError(f"absolute moment needs r >= 0, got {r}")
    if r % 2.0 == 0.0 and r <= 340.0:
        k = int(r) // 2
        return float(math.prod(range(2 * k - 1, 0, -2)))
    return float(2.0 ** (r / 2.0) * special.gamma((r + 1.0) / 2.0) / math.sqrt(math.pi))


def _kinks(g) -> Sequence[float]:
    """Points where the integrand may fail to be smooth."""
    if isinstance(g, TestFunction):
        if g.kind == "square_indicator":
            return (-g.u, 0.0, g.u)
        if g.kind == "power_cutoff":
            return (-2.0 * g.eta, -g.eta, 0.0, g.eta, 2.0 * g.eta)
    return (0.0,)


def _quad_expectation(func: Callable, sigma: float, kinks: Iterable[float], rtol: float = RHO_RTOL) -> float:
    lo, hi = -40.0 * sigma, 40.0 * sigma
    pts = sorted({p for p in kinks if lo < p < hi})

    def integrand(x: float) -> float:
        return float(np.asarray(func(np.array([x])))[0]) * math.exp(-0.5 * (x / sigma) ** 2)

    value, abserr = integrate.quad(integrand, lo, hi, points=pts or None, limit=400, epsabs=0.0, epsrel=1e-12)
    norm = sigma * _SQRT_2PI
    if not math.isfinite(value) or abserr / norm > max(rtol * abs(value) / norm, QUAD_ATOL):
        raise QuadratureError(
            f"E[g(σU)] at σ = {sigma:g}: adaptive quadrature error {abserr / norm:.3g} exceeds rtol = {rtol:g}"
        )
    return value / norm


def _hermite_block(func: Callable, sigmas: np.ndarray, rtol: float):
    """Per-σ Gauss–Hermite values and a mask of the σ that converged."""
    values = np.full(sigmas.size, np.nan)
    done = np.zeros(sigmas.size, dtype=bool)
    previous = None
    n = HERMITE_MIN_NODES
    while n <= HERMITE_MAX_NODES and not done.all():
        todo = np.flatnonzero(~done)
        x, w = _hermite_nodes(n)
        current = np.asarray(func(sigmas[todo, None] * x[None, :]), dtype=float) @ w
        if previous is None:
            previous = current
        else:
            agree = np.abs(current - previous) <= rtol * np.maximum(np.abs(current), 1e-300)
            values[todo[agree]] = current[agree]
            done[todo[agree]] = True
            previous = current[~agree]
        n *= 2
    return values, done


def gaussian_expectation(func: Callable, sigmas, rtol: float = RHO_RTOL, kinks: Sequence[float] = (0.0,)) -> np.ndarray:
    """E[func(σU)] for every σ in ``sigmas`` (vectorized over σ)."""
    sigmas = np.asarray(sigmas, dtype=float)
    shape = sigmas.shape
    flat = sigmas.ravel()
    if np.any(flat < 0.0):
        raise ValueError("σ must be >= 0")
    unique, inverse = np.unique(flat, return_inverse=True)
    out = np.empty_like(unique)
    zero = unique == 0.0
    if np.any(zero):
        out[zero] = float(np.asarray(func(np.zeros(1)))[0])
    positive = np.flatnonzero(~zero)
    for start in range(0, positive.size, HERMITE_CHUNK):
        idx = positive[start:start + HERMITE_CHUNK]
        values, done = _hermite_block(func, unique[idx], rtol)
        if not done.all():
            missed = np.flatnonzero(~done)
            logger.info("Gauss–Hermite missed rtol=%g at %d nodes for %d σ values; using adaptive quadrature",
                        rtol, HERMITE_MAX_NODES, missed.size)
            values[missed] = [_quad_expectation(func, s, kinks, rtol) for s in unique[idx][missed]]
        out[idx] = values
    return out[inverse].reshape(shape)


def rho_many(g: TestFunction, sigmas, rtol: float = RHO_RTOL) -> np.ndarray:
    """ρ_σ(g) for an array of σ values."""
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(sigmas < 0.0):
        raise ValueError("σ must be >= 0")
    if g.kind == "power":
        return abs_moment(g.r) * sigmas ** g.r
    if g.kind == "square_indicator":
        out = np.zeros_like(sigmas)
        pos = sigmas > 0.0
        a = g.u / sigmas[pos]
        out[pos] = sigmas[pos] ** 2 * (special.erf(a / math.sqrt(2.0)) - 2.0 * a * np.exp(-0.5 * a * a) / _SQRT_2PI)
        return out
    if g.kind == "power_cutoff":
        # m_r σ^r minus the smooth tail E[|σU|^r (1 - ψ_η(σU))]
        tail = gaussian_expectation(lambda x: np.abs(x) ** g.r - g(x), sigmas, rtol=rtol, kinks=_kinks(g))
        main = abs_moment(g.r) * sigmas ** g.r
        return main - tail
    return gaussian_expectation(g, sigmas, rtol=rtol, kinks=_kinks(g))


def rho(g: TestFunction, sigma: float, rtol: float = RHO_RTOL) -> float:
    """ρ_σ(g) = ∫ g dN(0, σ²); ρ_0(g) = g(0)."""
    if sigma < 0.0:
        raise ValueError(f"σ must be >= 0, got {sigma}")
    return float(rho_many(g, np.array([sigma]), rtol=rtol)[0])


def rho_square(g: TestFunction, sigmas) -> np.ndarray:
    """ρ_σ(g²); exact for powers."""
    if g.kind == "power":
        return rho_many(TestFunction.power(2.0 * g.r), sigmas)
    return gaussian_expectation(lambda x: g(x) ** 2, sigmas, kinks=_kinks(g))


def rho_product(f: Callable, g: Callable, sigmas) -> np.ndarray:
    """ρ_σ(f·g) with exact moments when both factors are powers."""
    if isinstance(f, TestFunction) and isinstance(g, TestFunction) and f.kind == g.kind == "power":
        return rho_many(TestFunction.power(f.r + g.r), sigmas)
    kinks = tuple(sorted(set(_kinks(f)) | set(_kinks(g))))
    return gaussian_expectation(lambda x: f(x) * g(x), sigmas, kinks=kinks)
