"""
Where a model sits in the chain (L-s') ⇒ (L-s) ⇒ (K) ⇒ (H), plus (H').

Membership is decided analytically per jump kind. For the stable-like
density scale·β/|x|^{1+β} on 0 < |x| ≤ 1,

    ∫ φ_s(x) ν(dx) = 2·scale·β ∫_0^1 x^{s-1-β} dx = 2·scale·β / (s - β)

is finite iff s > β, so (L-s) holds exactly on (β, 2].
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

from src.functions.test_functions import phi
from src.model.spec import ModelSpec, require_valid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HypothesisProfile:
    h: bool
    k: bool
    h_prime: bool
    s_min: float
    s_min_included: bool

    def holds_l(self, s: float) -> bool:
        """Whether (L-s) holds."""
        if not 0.0 <= s <= 2.0:
            return False
        return s > self.s_min or (self.s_min_included and s == self.s_min)

    def names(self) -> List[str]:
        out = []
        if self.h:
            out.append("H")
        if self.k:
            out.append("K")
        bracket = "[" if self.s_min_included else "("
        out.append(f"L-s for s ∈ {bracket}{self.s_min:g}, 2]")
        if self.h_prime:
            out.append("H'")
        return out

    def __contains__(self, name: str) -> bool:
        if name in ("H", "K"):
            return getattr(self, name.lower())
        if name == "H'":
            return self.h_prime
        if name.startswith("L-"):
            return self.holds_l(float(name[2:]))
        return False


def activity_index(spec: ModelSpec) -> float:
    require_valid(spec)
    if spec.jumps.kind == "stable_like":
        return float(spec.jumps.beta)
    return 0.0


def jump_index_set(spec: ModelSpec) -> Tuple[float, bool]:
    """Lower end of I = {r ≥ 0 : φ_r ⋆ ν_t < ∞} and whether it is included."""
    require_valid(spec)
    if spec.jumps.kind == "stable_like":
        return float(spec.jumps.beta), False
    return 0.0, True


def in_index_set(spec: ModelSpec, r: float) -> bool:
    lower, closed = jump_index_set(spec)
    return r > lower or (closed and r == lower)


def phi_intensity(spec: ModelSpec, r: float) -> float:
    """∫ φ_r(x) ν(dx) per unit time, ``inf`` when the integral diverges."""
    require_valid(spec)
    jumps = spec.jumps
    if jumps.kind == "none":
        return 0.0
    if jumps.kind == "compound_poisson":
        return jumps.rate * jumps.size_law.expect(lambda x: phi(r, x), breakpoints=(-1.0, 0.0, 1.0))
    if r <= jumps.beta:
        return math.inf
    return 2.0 * jumps.scale * jumps.beta / (r - jumps.beta)


def hypothesis_profile(spec: ModelSpec) -> HypothesisProfile:
    require_valid(spec)
    s_min, included = jump_index_set(spec)
    return HypothesisProfile(
        h=True,
        k=True,
        h_prime=spec.vol.kind in ("constant", "ou_vol", "jump_vol"),
        s_min=s_min,
        s_min_included=included,
    )
