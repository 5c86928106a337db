"""Goodness of fit to N(0,1), rate-slope regression and order-free sample summaries."""

import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np
from scipy import special, stats

from src.constants import KS_MIN_SAMPLES, KS_SERIES_TERMS


def kolmogorov_sf(lam: float) -> float:
    """P(K > λ) for the Kolmogorov distribution, series truncated at KS_SERIES_TERMS terms."""
    if lam <= 0.18:
        return 1.0
    k = np.arange(1, KS_SERIES_TERMS + 1, dtype=float)
    terms = np.where(k % 2 == 1, 1.0, -1.0) * np.exp(-2.0 * k * k * lam * lam)
    p = 2.0 * math.fsum(terms.tolist())
    return min(1.0, max(0.0, p))


def ks_distance(samples: Sequence[float]) -> Tuple[float, float]:
    """One-sample KS distance to N(0,1) and its asymptotic p-value."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < KS_MIN_SAMPLES:
        raise ValueError(f"KS needs at least {KS_MIN_SAMPLES} samples, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("KS samples must be finite")
    cdf = special.ndtr(x)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    d = float(max(upper.max(), lower.max()))
    return d, kolmogorov_sf(math.sqrt(n) * d)


def summarize(values: Sequence[float]) -> Dict[str, float]:
    """Mean, RMSE and variance with math.fsum, so the result ignores input order."""
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 0:
        raise ValueError("empty sample")
    mean = math.fsum(v.tolist()) / n
    mean_sq = math.fsum((v * v).tolist()) / n
    centered = v - mean
    variance = math.fsum((centered * centered).tolist()) / (n - 1) if n > 1 else 0.0
    return {"mean": mean, "rmse": math.sqrt(mean_sq), "variance": variance, "count": n}


@dataclass(frozen=True)
class RateFit:
    slope: float
    stderr: float
    intercept: float
    degenerate: bool
    reason: str = ""

    def fitted(self, x: np.ndarray) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "degenerate": self.degenerate,
            "reason": self.reason,
        }


def rate_axis(delta_ns: Sequence[float]) -> np.ndarray:
    """log₂(1/Δn): RMSE ∝ Δn^a fits slope −a."""
    return -np.log2(np.asarray(delta_ns, dtype=float))


def fit_rate(delta_ns: Sequence[float], rmse: Sequence[float]) -> RateFit:
    """Least-squares slope of log₂ RMSE against log₂(1/Δn)."""
    x = rate_axis(delta_ns)
    y = np.asarray(rmse, dtype=float)
    if x.size < 2:
        raise ValueError("≥ 2 rungs required")
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        # exactly representable errors: nothing to regress
        return RateFit(math.nan, math.nan, math.nan, True, "zero or non-finite RMSE on some rung")
    fit = stats.linregress(x, np.log2(y))
    stderr = float(fit.stderr) if x.size > 2 else math.nan
    return RateFit(float(fit.slope), stderr, float(fit.intercept), False)
