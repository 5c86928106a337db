"""
Test functions h_r, h_r·ψ_η, a small catalog of bounded C² functions and
the indicator-truncated square, together with their class membership.

ψ is glued from the C^∞ bump e(t) = exp(-1/t):

    S(t) = e(t) / (e(t) + e(1 - t)),    ψ(y) = 1 - S(|y| - 1),

so ψ = 1 on [-1, 1], ψ = 0 outside [-2, 2] and 0 ≤ ψ ≤ 1 in between.
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.constants import BOUNDED_C2_CATALOG


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _bump_prime(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = np.exp(-1.0 / t[pos]) / t[pos] ** 2
    return out


def smooth_step(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    a, b = _bump(t), _bump(1.0 - t)
    return a / (a + b)


def smooth_step_prime(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    a, b = _bump(t), _bump(1.0 - t)
    da, db = _bump_prime(t), _bump_prime(1.0 - t)
    return (da * b + a * db) / (a + b) ** 2


@dataclass(frozen=True)
class CutoffPsi:
    eta: float = math.inf

    def __post_init__(self):
        if not self.eta > 0.0:
            raise ValueError(f"cutoff scale η must be > 0, got {self.eta}")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if math.isinf(self.eta):
            return np.ones_like(x)
        return 1.0 - smooth_step(np.abs(x) / self.eta - 1.0)

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if math.isinf(self.eta):
            return np.zeros_like(x)
        return -smooth_step_prime(np.abs(x) / self.eta - 1.0) * np.sign(x) / self.eta


def phi(r: float, x) -> np.ndarray:
    """φ_r(x) = 1 ∧ |x|^r for r > 0, and 1{x ≠ 0} for r = 0."""
    x = np.abs(np.asarray(x, dtype=float))
    if r == 0.0:
        return (x != 0.0).astype(float)
    return np.minimum(1.0, x ** r)


@dataclass(frozen=True)
class ClassMembership:
    """
    Position of a test function in the classes E_r, E'_r, E''_r, E'''_r.

    ``order`` is the exponent p with f(x) = O(|x|^p) at 0 and not o(|x|^p);
    ``equivalent_power`` is set when f(x) ~ |x|^p, ``exact_power`` when
    f(x) = |x|^p on a neighbourhood of 0.
    """

    order: float
    equivalent_power: Optional[float]
    exact_power: Optional[float]
    bounded: bool
    continuous: bool
    c1: bool
    c2: bool
    even: bool
    sup_norm: float

    def in_class(self, name: str, r: float) -> bool:
        if name == "E":
            return self.exact_power == r
        if name == "E'":
            return self.equivalent_power == r
        if name == "E''":
            return r <= self.order
        if name == "E'''":
            return r < self.order
        raise ValueError(f"Unknown function class: {name}")

    def classes(self) -> List[str]:
        b = "^b" if self.bounded else ""
        out = []
        if self.exact_power is not None:
            out.append(f"E_{self.exact_power:g}{b}")
        if self.equivalent_power is not None:
            out.append(f"E'_{self.equivalent_power:g}{b}")
        out.append(f"E''_r{b} for r ≤ {self.order:g}")
        out.append(f"E'''_r{b} for r < {self.order:g}")
        return out


@dataclass(frozen=True)
class TestFunction:
    __test__ = False

    kind: str
    r: Optional[float] = None
    eta: Optional[float] = None
    name: Optional[str] = None
    u: Optional[float] = None

    def __post_init__(self):
        if self.kind in ("power", "power_cutoff"):
            if self.r is None or not self.r > 0.0:
                raise ValueError(f"{self.kind}: r must be > 0, got {self.r}")
            if self.kind == "power_cutoff" and (self.eta is None or not self.eta > 0.0):
                raise ValueError(f"power_cutoff: η must be > 0, got {self.eta}")
        elif self.kind == "bounded_c2":
            if self.name not in BOUNDED_C2_CATALOG:
                raise ValueError(f"Unknown bounded_c2 function: {self.name}. Expected one of {BOUNDED_C2_CATALOG}")
        elif self.kind == "square_indicator":
            if self.u is None or not self.u > 0.0:
                raise ValueError(f"square_indicator: threshold u must be > 0, got {self.u}")
        else:
            raise ValueError(f"Unknown test function kind: {self.kind}")

    @classmethod
    def power(cls, r: float) -> "TestFunction":
        return cls(kind="power", r=float(r))

    @classmethod
    def power_cutoff(cls, r: float, eta: float) -> "TestFunction":
        return cls(kind="power_cutoff", r=float(r), eta=float(eta))

    @classmethod
    def bounded_c2(cls, name: str) -> "TestFunction":
        return cls(kind="bounded_c2", name=name)

    @classmethod
    def square_indicator(cls, u: float) -> "TestFunction":
        return cls(kind="square_indicator", u=float(u))

    @property
    def label(self) -> str:
        if self.kind == "power":
            return f"power:r={self.r:g}"
        if self.kind == "power_cutoff":
            return f"power_cutoff:r={self.r:g},eta={self.eta:g}"
        if self.kind == "bounded_c2":
            return f"bounded_c2:name={self.name}"
        return f"square_indicator:u={self.u:g}"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            return np.abs(x) ** self.r
        if self.kind == "power_cutoff":
            return np.abs(x) ** self.r * CutoffPsi(self.eta)(x)
        if self.kind == "bounded_c2":
            if self.name == "cos_bump":
                return 0.5 * (1.0 - np.cos(x))
            return x * x / (1.0 + x * x)
        return np.where(np.abs(x) <= self.u, x * x, 0.0)

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind in ("power", "power_cutoff"):
            with np.errstate(divide="ignore", invalid="ignore"):
                dh = self.r * np.abs(x) ** (self.r - 1.0) * np.sign(x)
            dh = np.where(x == 0.0, 0.0, dh)
            if self.kind == "power":
                return dh
            psi = CutoffPsi(self.eta)
            return dh * psi(x) + np.abs(x) ** self.r * psi.derivative(x)
        if self.kind == "bounded_c2":
            if self.name == "cos_bump":
                return 0.5 * np.sin(x)
            return 2.0 * x / (1.0 + x * x) ** 2
        raise ValueError("square_indicator is not differentiable at ±u")


def evaluate(f: TestFunction, x) -> np.ndarray:
    return f(x)


def derivative(f: TestFunction):
    """f' as a vectorized callable."""
    if f.kind == "square_indicator":
        raise ValueError("square_indicator is not differentiable at ±u")
    return f.derivative


def class_membership(f: TestFunction) -> ClassMembership:
    if f.kind == "power":
        return ClassMembership(
            order=f.r, equivalent_power=f.r, exact_power=f.r, bounded=False, continuous=True,
            c1=f.r > 1.0, c2=f.r >= 2.0, even=True, sup_norm=math.inf,
        )
    if f.kind == "power_cutoff":
        return ClassMembership(
            order=f.r, equivalent_power=f.r, exact_power=f.r, bounded=True, continuous=True,
            c1=f.r > 1.0, c2=f.r >= 2.0, even=True, sup_norm=(2.0 * f.eta) ** f.r,
        )
    if f.kind == "bounded_c2":
        # cos_bump ~ x²/4 at 0: O(x²) but not ~ x²
        equivalent = 2.0 if f.name == "rational_square" else None
        return ClassMembership(
            order=2.0, equivalent_power=equivalent, exact_power=None, bounded=True, continuous=True,
            c1=True, c2=True, even=True, sup_norm=1.0,
        )
    return ClassMembership(
        order=2.0, equivalent_power=2.0, exact_power=2.0, bounded=True, continuous=False,
        c1=False, c2=False, even=True, sup_norm=f.u ** 2,
    )
