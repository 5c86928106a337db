"""
Declarative model specifications.

A model is X = x0 + ∫ b_s ds + ∫ σ_s dW_s + jumps, with σ either absent,
constant, or σ₀·exp(Y) for an Ornstein-Uhlenbeck factor Y (optionally
shifted by a fixed log-factor at every jump of X). Construction never
raises: ``validate_model`` reports every violated invariant at once.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy import integrate

from src.constants import CUTOFF_POLICIES, DRIFT_KINDS, JUMP_KINDS, SIZE_LAWS, VOL_KINDS
from src.errors import ModelValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SamplingSpec:
    horizon: float
    delta_n: float
    refine: int = 8

    @property
    def n_obs(self) -> int:
        """[T/Δn], the number of observation increments."""
        return int(math.floor(self.horizon / self.delta_n + 1e-9))

    @property
    def n_fine(self) -> int:
        return self.n_obs * self.refine

    @property
    def fine_step(self) -> float:
        return self.delta_n / self.refine

    @property
    def effective_horizon(self) -> float:
        return self.n_obs * self.delta_n

    def with_delta_n(self, delta_n: float) -> "SamplingSpec":
        return SamplingSpec(horizon=self.horizon, delta_n=delta_n, refine=self.refine)


@dataclass(frozen=True)
class DriftSpec:
    kind: str = "constant"
    value: float = 0.0
    amplitude: float = 0.0
    frequency: float = 1.0

    @classmethod
    def constant(cls, b: float) -> "DriftSpec":
        return cls(kind="constant", value=b)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "time_function":
            return self.value + self.amplitude * np.sin(2.0 * math.pi * self.frequency * t)
        return np.full_like(t, self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0 and (self.kind == "constant" or self.amplitude == 0.0)


@dataclass(frozen=True)
class VolSpec:
    kind: str = "constant"
    sigma0: float = 1.0
    mean_reversion: float = 1.0
    vol_of_vol: float = 0.0
    leverage: float = 0.0
    cojump: float = 0.0

    @classmethod
    def none(cls) -> "VolSpec":
        return cls(kind="none", sigma0=0.0)

    @classmethod
    def constant(cls, sigma0: float) -> "VolSpec":
        return cls(kind="constant", sigma0=sigma0)

    @classmethod
    def ou(cls, sigma0: float, mean_reversion: float, vol_of_vol: float, leverage: float = 0.0) -> "VolSpec":
        return cls(kind="ou_vol", sigma0=sigma0, mean_reversion=mean_reversion,
                   vol_of_vol=vol_of_vol, leverage=leverage)

    @property
    def is_stochastic(self) -> bool:
        return self.kind in ("ou_vol", "jump_vol")


@dataclass(frozen=True)
class JumpSizeLaw:
    """Law of a compound-Poisson jump size."""

    kind: str = "fixed"
    size: float = 1.0
    mean: float = 0.0
    variance: float = 1.0
    eta_up: float = 1.0
    eta_down: float = 1.0
    p_up: float = 0.5

    @classmethod
    def fixed(cls, a: float) -> "JumpSizeLaw":
        return cls(kind="fixed", size=a)

    @classmethod
    def gaussian(cls, m: float, v: float) -> "JumpSizeLaw":
        return cls(kind="gaussian", mean=m, variance=v)

    @classmethod
    def double_exponential(cls, eta_up: float, eta_down: float, p_up: float = 0.5) -> "JumpSizeLaw":
        return cls(kind="double_exponential", eta_up=eta_up, eta_down=eta_down, p_up=p_up)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "fixed":
            return np.full(n, float(self.size))
        if self.kind == "gaussian":
            return self.mean + math.sqrt(self.variance) * rng.standard_normal(n)
        up = rng.random(n) < self.p_up
        magnitude = rng.standard_exponential(n)
        return np.where(up, magnitude / self.eta_up, -magnitude / self.eta_down)

    def expect(self, func: Callable[[np.ndarray], np.ndarray], breakpoints=()) -> float:
        """E[func(J)] by adaptive quadrature against the size law."""
        def scalar(x: float) -> float:
            return float(np.asarray(func(np.array([x])))[0])

        if self.kind == "fixed":
            return scalar(self.size)
        if self.kind == "gaussian":
            sd = math.sqrt(self.variance)
            if sd == 0.0:
                return scalar(self.mean)
            lo, hi = self.mean - 12.0 * sd, self.mean + 12.0 * sd
            pts = sorted(p for p in breakpoints if lo < p < hi)
            density = lambda x: math.exp(-0.5 * ((x - self.mean) / sd) ** 2) / (sd * math.sqrt(2.0 * math.pi))
            value, _ = integrate.quad(lambda x: scalar(x) * density(x), lo, hi,
                                      points=pts or None, limit=200, epsabs=1e-13, epsrel=1e-11)
            return value
        upper = 40.0 / self.eta_up
        lower = 40.0 / self.eta_down
        pts_up = sorted(p for p in breakpoints if 0.0 < p < upper)
        pts_dn = sorted(-p for p in breakpoints if -lower < p < 0.0)
        up, _ = integrate.quad(lambda x: scalar(x) * self.eta_up * math.exp(-self.eta_up * x), 0.0, upper,
                               points=pts_up or None, limit=200, epsabs=1e-13, epsrel=1e-11)
        down, _ = integrate.quad(lambda y: scalar(-y) * self.eta_down * math.exp(-self.eta_down * y), 0.0, lower,
                                 points=pts_dn or None, limit=200, epsabs=1e-13, epsrel=1e-11)
        return self.p_up * up + (1.0 - self.p_up) * down

    def second_moment(self) -> float:
        if self.kind == "fixed":
            return self.size ** 2
        if self.kind == "gaussian":
            return self.variance + self.mean ** 2
        return 2.0 * (self.p_up / self.eta_up ** 2 + (1.0 - self.p_up) / self.eta_down ** 2)


@dataclass(frozen=True)
class JumpSpec:
    kind: str = "none"
    rate: float = 0.0
    size_law: JumpSizeLaw = field(default_factory=JumpSizeLaw)
    beta: float = 1.0
    scale: float = 1.0
    cutoff_policy: str = "discard"
    cutoff: Optional[float] = None

    @classmethod
    def none(cls) -> "JumpSpec":
        return cls(kind="none")

    @classmethod
    def compound_poisson(cls, rate: float, size_law: JumpSizeLaw) -> "JumpSpec":
        return cls(kind="compound_poisson", rate=rate, size_law=size_law)

    @classmethod
    def stable_like(cls, beta: float, scale: float = 1.0, cutoff_policy: str = "discard",
                    cutoff: Optional[float] = None) -> "JumpSpec":
        return cls(kind="stable_like", beta=beta, scale=scale, cutoff_policy=cutoff_policy, cutoff=cutoff)

    def simulation_cutoff(self, fine_step: float) -> float:
        """Small-jump cutoff ε_sim; jumps of size at most ε_sim are not recorded."""
        if self.cutoff is not None:
            return float(self.cutoff)
        return fine_step ** (1.0 / self.beta)

    def rate_above(self, epsilon: float) -> float:
        """Intensity of stable-like jumps with |x| in (ε, 1]."""
        if epsilon >= 1.0:
            return 0.0
        return 2.0 * self.scale * (epsilon ** (-self.beta) - 1.0)

    def small_jump_variance(self, epsilon: float) -> float:
        """∫_{|x|≤ε} x² ν(dx) per unit time."""
        eps = min(epsilon, 1.0)
        return 2.0 * self.scale * self.beta * eps ** (2.0 - self.beta) / (2.0 - self.beta)


@dataclass(frozen=True)
class ModelSpec:
    drift: DriftSpec = field(default_factory=DriftSpec)
    vol: VolSpec = field(default_factory=VolSpec)
    jumps: JumpSpec = field(default_factory=JumpSpec)
    x0: float = 0.0

    @property
    def is_continuous(self) -> bool:
        return self.jumps.kind == "none"

    @property
    def has_diffusion(self) -> bool:
        return self.vol.kind != "none"

    @property
    def is_levy(self) -> bool:
        """Constant drift, constant or absent σ, and finite-activity jumps."""
        return (
            self.drift.kind == "constant"
            and self.vol.kind in ("none", "constant")
            and self.jumps.kind in ("none", "compound_poisson")
        )


@dataclass(frozen=True)
class TruncationSpec:
    varpi: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.varpi < 0.5:
            raise ValueError(f"truncation exponent ϖ must lie in (0, 1/2), got {self.varpi}")
        if not self.alpha > 0.0:
            raise ValueError(f"truncation level α must be > 0, got {self.alpha}")

    def threshold(self, delta_n: float) -> float:
        return self.alpha * delta_n ** self.varpi

    @property
    def label(self) -> str:
        return f"truncation:varpi={self.varpi:g},alpha={self.alpha:g}"


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def validate_model(spec: ModelSpec) -> List[str]:
    """Every violated invariant of ``spec``; an empty list means valid."""
    issues: List[str] = []

    drift = spec.drift
    if drift.kind not in DRIFT_KINDS:
        issues.append(f"drift.kind: unknown drift kind {drift.kind!r}, expected one of {DRIFT_KINDS}")
    elif not _finite(drift.value, drift.amplitude, drift.frequency):
        issues.append("drift: drift parameters must be finite")

    vol = spec.vol
    if vol.kind not in VOL_KINDS:
        issues.append(f"vol.kind: unknown vol kind {vol.kind!r}, expected one of {VOL_KINDS}")
    elif vol.kind != "none":
        if not (math.isfinite(vol.sigma0) and vol.sigma0 > 0.0):
            issues.append("vol.sigma0: σ₀ must be > 0")
        if vol.is_stochastic:
            if not (math.isfinite(vol.mean_reversion) and vol.mean_reversion >= 0.0):
                issues.append("vol.mean_reversion: λ̃ must be finite and >= 0")
            if not (math.isfinite(vol.vol_of_vol) and vol.vol_of_vol >= 0.0):
                issues.append("vol.vol_of_vol: σ̃ must be finite and >= 0")
            if not -1.0 <= vol.leverage <= 1.0:
                issues.append("vol.leverage: ρ̃ ∈ [−1, 1] required")
        if vol.kind == "jump_vol":
            if not math.isfinite(vol.cojump):
                issues.append("vol.cojump: ζ must be finite")
            if spec.jumps.kind != "compound_poisson":
                issues.append("vol.kind: jump_vol requires compound_poisson jumps")

    jumps = spec.jumps
    if jumps.kind not in JUMP_KINDS:
        issues.append(f"jumps.kind: unknown jump kind {jumps.kind!r}, expected one of {JUMP_KINDS}")
    elif jumps.kind == "compound_poisson":
        if not (math.isfinite(jumps.rate) and jumps.rate > 0.0):
            issues.append("jumps.rate: λ must be > 0")
        law = jumps.size_law
        if law.kind not in SIZE_LAWS:
            issues.append(f"jumps.size_law: unknown size law {law.kind!r}, expected one of {SIZE_LAWS}")
        elif law.kind == "fixed" and not math.isfinite(law.size):
            issues.append("jumps.size: jump size must be finite")
        elif law.kind == "gaussian" and not (_finite(law.mean, law.variance) and law.variance >= 0.0):
            issues.append("jumps.variance: v must be finite and >= 0")
        elif law.kind == "double_exponential":
            if not (law.eta_up > 0.0 and law.eta_down > 0.0):
                issues.append("jumps.eta_up/eta_down: η₊, η₋ must be > 0")
            if not 0.0 <= law.p_up <= 1.0:
                issues.append("jumps.p_up: p_up ∈ [0, 1] required")
    elif jumps.kind == "stable_like":
        if not 0.0 < jumps.beta < 2.0:
            issues.append("jumps.beta: β ∈ (0,2) required")
        if not (math.isfinite(jumps.scale) and jumps.scale > 0.0):
            issues.append("jumps.scale: scale must be > 0")
        if jumps.cutoff_policy not in CUTOFF_POLICIES:
            issues.append(f"jumps.cutoff_policy: expected one of {CUTOFF_POLICIES}")
        if jumps.cutoff is not None and not 0.0 < jumps.cutoff < 1.0:
            issues.append("jumps.cutoff: ε_sim ∈ (0, 1) required")

    if not math.isfinite(spec.x0):
        issues.append("x0: initial value must be finite")
    return issues


def validate_sampling(sampling: SamplingSpec) -> List[str]:
    issues: List[str] = []
    if not (math.isfinite(sampling.horizon) and sampling.horizon > 0.0):
        issues.append("sampling.horizon: T must be > 0")
    if not (math.isfinite(sampling.delta_n) and sampling.delta_n > 0.0):
        issues.append("sampling.delta_n: Δn must be > 0")
    elif sampling.delta_n > sampling.horizon:
        issues.append("sampling.delta_n: Δn ≤ T required")
    elif sampling.n_obs < 1:
        issues.append("sampling: [T/Δn] ≥ 1 required")
    if not (isinstance(sampling.refine, int) and sampling.refine >= 1):
        issues.append("sampling.refine: refine must be an integer ≥ 1")
    return issues


def require_valid(spec: ModelSpec, sampling: Optional[SamplingSpec] = None) -> None:
    issues = validate_model(spec)
    if sampling is not None:
        issues += validate_sampling(sampling)
    if issues:
        raise ModelValidationError(issues)
