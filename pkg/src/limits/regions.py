"""
Which branch of a CLT applies at activity index s.

Outside the CLT region each theorem only bounds the error by a power of
Δn; ``RegionCheck.exponent`` carries that power:

    T5:  1 − s/2
    T6:  (2−s)(1+r)(2−r) / (4 + 2s(1−r))
    T6': (2−s)ϖ
"""

import math
from dataclasses import dataclass
from typing import Optional

from src.errors import AdmissibilityError

T6_LOWER_TEXT = "(1−√(3s²−8s+5))/(2−s)"
T6P_BOUND_TEXT = "(4ϖ−1)/(2ϖ)"


@dataclass(frozen=True)
class RegionCheck:
    theorem: str
    clt_holds: bool
    exponent: Optional[float]
    condition: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "clt_holds": self.clt_holds,
            "exponent": self.exponent,
            "condition": self.condition,
            "detail": self.detail,
        }


def t6_lower_bound(s: float) -> float:
    """(1 − √(3s² − 8s + 5))/(2 − s), the lower end of the r-window for 2/3 < s < 1."""
    return (1.0 - math.sqrt(3.0 * s * s - 8.0 * s + 5.0)) / (2.0 - s)


def t6_rate_exponent(s: float, r: float) -> float:
    return (2.0 - s) * (1.0 + r) * (2.0 - r) / (4.0 + 2.0 * s * (1.0 - r))


def t6p_bound(varpi: float) -> float:
    return (4.0 * varpi - 1.0) / (2.0 * varpi)


def clt_region_check(
    theorem: str,
    s: float,
    r: Optional[float] = None,
    varpi: Optional[float] = None,
    continuous: bool = False,
) -> RegionCheck:
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"activity index s must lie in [0, 2], got {s}")

    if theorem == "T5":
        if continuous or s <= 1.0:
            return RegionCheck(theorem, True, None, "s ≤ 1")
        return RegionCheck(theorem, False, 1.0 - s / 2.0, "s ≤ 1", f"s = {s:g} > 1")

    if theorem == "T6":
        if r is None or not r > 0.0:
            raise ValueError(f"T6 needs r > 0, got {r}")
        if continuous:
            return RegionCheck(theorem, True, None, "r > 0 (X continuous)")
        if r > 1.0:
            raise ValueError(f"T6 needs r ∈ (0, 1] when X has jumps, got {r}")
        exponent = t6_rate_exponent(s, r)
        if s <= 2.0 / 3.0:
            if r < 1.0:
                return RegionCheck(theorem, True, None, "s ≤ 2/3 and r < 1")
            return RegionCheck(theorem, False, exponent, "r < 1", f"r = {r:g}")
        if s < 1.0:
            lower = t6_lower_bound(s)
            condition = f"{T6_LOWER_TEXT} < r < 1"
            if lower < r < 1.0:
                return RegionCheck(theorem, True, None, condition)
            if r <= lower:
                detail = f"r = {r:g} ≤ {T6_LOWER_TEXT} = {lower:.6g} at s = {s:g}"
            else:
                detail = f"r = {r:g}, r < 1 required"
            return RegionCheck(theorem, False, exponent, condition, detail)
        return RegionCheck(theorem, False, exponent, "s < 1", f"s = {s:g} ≥ 1")

    if theorem == "T6p":
        if varpi is None or not 0.0 < varpi < 0.5:
            raise ValueError(f"T6p needs ϖ ∈ (0, 1/2), got {varpi}")
        condition = f"s ≤ {T6P_BOUND_TEXT}"
        if continuous:
            return RegionCheck(theorem, True, None, "X continuous")
        bound = t6p_bound(varpi)
        if s <= bound:
            return RegionCheck(theorem, True, None, condition)
        return RegionCheck(theorem, False, (2.0 - s) * varpi, condition,
                           f"s = {s:g} > {T6P_BOUND_TEXT} = {bound:.6g} at ϖ = {varpi:g}")

    if theorem in ("T4", "T7i", "T7ii"):
        # no restriction on s beyond the hypotheses every model here satisfies
        return RegionCheck(theorem, True, None, "(K)" if theorem == "T7i" else "(L-2)")

    raise ValueError(f"Unknown CLT theorem: {theorem}")


def require_clt_region(check: RegionCheck) -> RegionCheck:
    if check.clt_holds:
        return check
    raise AdmissibilityError(
        f"{check.theorem} CLT refused: {check.detail}; requires {check.condition} "
        f"(degenerate branch, error o(Δn^{check.exponent:.6g}))",
        condition=check.condition,
        exponent=check.exponent,
    )
