"""Theorem catalogue and the (theorem, test function or truncation) pairs the harness runs."""

from dataclasses import dataclass
from typing import Dict, Optional, Union

from src.functions.test_functions import TestFunction
from src.model.spec import TruncationSpec


@dataclass(frozen=True)
class TheoremInfo:
    tag: str
    kind: str  # "lln", "clt" or "pair"
    statement: str
    scaling: str
    conditions: str
    target: str = "function"  # or "truncation"
    levy_only: bool = False


THEOREMS: Dict[str, TheoremInfo] = {
    info.tag: info
    for info in (
        TheoremInfo("T1a", "lln", "V^n(f) → f⋆μ", "1",
                    "f ∈ E'''_2; or C = 0 with f ∈ E''_r, r ∈ I ∩ (1,2); or f ∈ E'''_1, 1 ∈ I, C = 0; "
                    "or f ∈ E''_r, r ∈ I ∩ (0,1], C = B̄ = 0"),
        TheoremInfo("T1b", "lln", "V^n(f) → f⋆μ + C", "1", "f ∈ E'_2"),
        TheoremInfo("T1c", "lln", "V^n(f) → f⋆μ + v(B̄)", "1", "f ∈ E'_1, C = 0, 1 ∈ I"),
        TheoremInfo("T2", "lln", "V^n(f) − [t/Δn]·H(fψ_η) → Σ(f, ψ_η)", "1",
                    "Lévy, finite activity; f ∈ E''_r for some r ∈ (1,2); η < ∞ or f bounded", levy_only=True),
        TheoremInfo("T3i", "lln", "Δn·V'^n(g) → ∫ρ_σu(g)du", "1",
                    "g continuous; g(x)/x² → 0 at ∞ unless X is continuous"),
        TheoremInfo("T3ii", "lln", "Δn^{1−r/2}·V^n(f) → m_r ∫c^{r/2}du", "1",
                    "f ∈ E'_r, r ∈ (0,2); any r > 0 when X is continuous"),
        TheoremInfo("T3iii", "lln", "V''^n(ϖ, α) → C", "1", "ϖ ∈ (0,1/2), α > 0", target="truncation"),
        TheoremInfo("T4", "clt", "V^n(f) − [t/Δn]·H(fψ_η) − Σ(f, ψ_η) ⇒ √(1−2/π)∫σ dW̄", "1",
                    "Lévy, finite activity; f ∈ E'_1; η < ∞ or f bounded", levy_only=True),
        TheoremInfo("T5", "clt", "(Δn·V'^n(g) − ∫ρ_σu(g)du)/√Δn ⇒ ∫√(ρ(g²) − ρ(g)²)dW̄", "√Δn",
                    "g even C²_b (even C¹ with g' of polynomial growth when X is continuous); s ≤ 1"),
        TheoremInfo("T6", "clt", "(Δn^{1−r/2}V^n(f) − m_r∫c^{r/2}du)/√Δn ⇒ √(m_2r − m_r²)∫c^{r/2}dW̄", "√Δn",
                    "f ∈ E_r, r ∈ (0,1]; (H'); s ≤ 2/3 and r < 1, or 2/3 < s < 1 and "
                    "(1−√(3s²−8s+5))/(2−s) < r < 1; all r > 0 when X is continuous"),
        TheoremInfo("T6p", "clt", "(V''^n(ϖ, α) − C)/√Δn ⇒ √2∫c dW̄", "√Δn", "s ≤ (4ϖ−1)/(2ϖ)",
                    target="truncation"),
        TheoremInfo("T7i", "clt", "(V^n(f) − f⋆μ)/√Δn ⇒ Z(f')", "√Δn",
                    "f C¹, C² near 0, f(0) = f'(0) = 0, f''(x) = o(|x|)"),
        TheoremInfo("T7ii", "clt", "(V^n(f) − C − f⋆μ)/√Δn ⇒ Z(f') + √2∫c dW̄", "√Δn", "f ∈ E_2 ∩ C¹; (L-2)"),
        TheoremInfo("T8pair", "pair", "joint limit of two CLT components, covariance (θθ*)^{jk}", "√Δn",
                    "J₁ ⇒ s < 1; J₂ ⇒ (H') and the T6 region at inf r; J₃ ⇒ s < inf (4ϖ−1)/(2ϖ)"),
    )
}

LLN_THEOREMS = ("T1", "T1a", "T1b", "T1c", "T2", "T3i", "T3ii", "T3iii")
CLT_THEOREMS = ("T4", "T5", "T6", "T6p", "T7i", "T7ii")

# statistic of the CLT theorems as an LLN
LLN_ANALOGUE = {"T5": "T3i", "T6": "T3ii", "T6p": "T3iii"}


def theorem_info(tag: str) -> TheoremInfo:
    if tag == "T1":
        return TheoremInfo("T1", "lln", "V^n(f) → V(f), case chosen from the class of f", "1",
                           "one of T1a, T1b, T1c")
    if tag not in THEOREMS:
        raise ValueError(f"Unknown theorem: {tag}. Expected one of {sorted(THEOREMS) + ['T1']}")
    return THEOREMS[tag]


@dataclass(frozen=True)
class FunctionalItem:
    """One theorem applied to one test function (or truncation), with an optional cutoff scale η."""

    theorem: str
    target: Union[TestFunction, TruncationSpec]
    eta: Optional[float] = None

    def __post_init__(self):
        info = theorem_info(self.theorem)
        if info.kind == "pair":
            raise ValueError("T8pair names a covariance check, not a single functional")
        wants_truncation = info.target == "truncation"
        if wants_truncation != isinstance(self.target, TruncationSpec):
            expected = "a truncation" if wants_truncation else "a test function"
            raise ValueError(f"{self.theorem} takes {expected}, got {self.target.label}")

    @property
    def function(self) -> Optional[TestFunction]:
        return self.target if isinstance(self.target, TestFunction) else None

    @property
    def truncation(self) -> Optional[TruncationSpec]:
        return self.target if isinstance(self.target, TruncationSpec) else None

    @property
    def label(self) -> str:
        text = f"{self.theorem} {self.target.label}"
        if self.eta is not None:
            text += f" eta={self.eta:g}"
        return text

    @property
    def is_clt(self) -> bool:
        return self.theorem in CLT_THEOREMS
