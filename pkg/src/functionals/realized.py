"""Realized functionals V^n(f), V'^n(f), V''^n(ϖ, α) as running sums over observation steps."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
import pandas as pd

from src.functions.test_functions import TestFunction
from src.model.spec import TruncationSpec
from src.utils import grid_index


@dataclass(frozen=True, eq=False)
class FunctionalSeries:
    """Running values on a uniform time grid; ``values[0]`` is the value at time 0."""

    times: np.ndarray
    values: np.ndarray
    kind: str
    label: str
    step: float
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def terminal(self) -> float:
        return float(self.values[-1])

    def value_at(self, t: float) -> float:
        """Value at step·[t/step]."""
        return float(self.values[grid_index(t, self.step, self.values.size - 1)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"time": self.times, "value": self.values})


def running_series(terms: np.ndarray, step: float, kind: str, label: str, **meta) -> FunctionalSeries:
    values = np.concatenate(([0.0], np.cumsum(terms)))
    times = np.arange(values.size, dtype=float) * step
    return FunctionalSeries(times=times, values=values, kind=kind, label=label, step=step, meta=dict(meta))


def v_n(f: TestFunction, increments: np.ndarray, delta_n: float) -> FunctionalSeries:
    """V^n(f)_t = Σ_{i ≤ [t/Δn]} f(Δⁿᵢ X)."""
    increments = np.asarray(increments, dtype=float)
    return running_series(f(increments), delta_n, "V", f.label, delta_n=delta_n)


def v_prime_n(f: TestFunction, increments: np.ndarray, delta_n: float) -> FunctionalSeries:
    """V'^n(f)_t = Σ f(Δⁿᵢ X / √Δn)."""
    increments = np.asarray(increments, dtype=float)
    if f.kind == "power":
        # (Δn^{1-r/2} / Δn) V^n(h_r): Δn·V'^n then equals Δn^{1-r/2}·V^n bit for bit on dyadic Δn
        base = v_n(f, increments, delta_n)
        factor = delta_n ** (1.0 - f.r / 2.0) / delta_n
        return FunctionalSeries(times=base.times, values=factor * base.values, kind="V'",
                                label=f.label, step=delta_n, meta={"delta_n": delta_n})
    return running_series(f(increments / math.sqrt(delta_n)), delta_n, "V'", f.label, delta_n=delta_n)


def truncated_power_variation(r: float, trunc: TruncationSpec, increments: np.ndarray, delta_n: float) -> FunctionalSeries:
    """Σ |Δⁿᵢ X|^r 1{|Δⁿᵢ X| ≤ αΔn^ϖ}."""
    increments = np.asarray(increments, dtype=float)
    kept = np.abs(increments) <= trunc.threshold(delta_n)
    terms = np.where(kept, np.abs(increments) ** r, 0.0)
    return running_series(terms, delta_n, "V''", f"{trunc.label},r={r:g}", delta_n=delta_n,
                          threshold=trunc.threshold(delta_n))


def v_trunc_n(trunc: TruncationSpec, increments: np.ndarray, delta_n: float) -> FunctionalSeries:
    """V''^n(ϖ, α)_t = Σ (Δⁿᵢ X)² 1{|Δⁿᵢ X| ≤ αΔn^ϖ}."""
    increments = np.asarray(increments, dtype=float)
    kept = np.abs(increments) <= trunc.threshold(delta_n)
    terms = np.where(kept, increments * increments, 0.0)
    return running_series(terms, delta_n, "V''", trunc.label, delta_n=delta_n, threshold=trunc.threshold(delta_n))
