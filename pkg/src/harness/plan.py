import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.constants import CLT_MIN_REPLICATES, COVARIANCE_MAX_ABS_Z
from src.functions.function_factory import get_test_function, parse_parameters
from src.limits.targets import COMPONENT_CLASSES
from src.limits.theorems import CLT_THEOREMS, LLN_THEOREMS, FunctionalItem
from src.model.spec import ModelSpec, SamplingSpec, TruncationSpec, validate_model, validate_sampling

logger = logging.getLogger(__name__)

EXPERIMENT_COMMANDS = ("lln", "clt", "cov")


def parse_truncation(text: str) -> TruncationSpec:
    """``"truncation:varpi=0.49,alpha=3"`` -> TruncationSpec(0.49, 3)."""
    kind, _, rest = text.strip().partition(":")
    if kind != "truncation":
        raise ValueError(f"Unknown truncation kind: {kind}")
    params = parse_parameters(rest)
    if sorted(params) != ["alpha", "varpi"]:
        raise ValueError(f"truncation takes parameters varpi, alpha (got {sorted(params)})")
    return TruncationSpec(varpi=float(params["varpi"]), alpha=float(params["alpha"]))


def parse_functional(text: str, eta: Optional[float] = None) -> FunctionalItem:
    """``"T3ii power:r=1"`` or ``"T6p truncation:varpi=0.49,alpha=3"``."""
    parts = text.split()
    if len(parts) != 2:
        raise ValueError(f"Malformed functional {text!r}, expected '<theorem> <kind:params>'")
    theorem, target = parts
    if target.startswith("truncation:"):
        return FunctionalItem(theorem, parse_truncation(target), eta)
    return FunctionalItem(theorem, get_test_function(target), eta)


@dataclass(frozen=True)
class AcceptanceBands:
    max_rel_error: float = 0.02
    slope_band: Optional[Tuple[float, float]] = None
    variance_band: Tuple[float, float] = (0.85, 1.15)
    ks_p_min: float = 0.001
    max_abs_z: float = COVARIANCE_MAX_ABS_Z

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_rel_error": self.max_rel_error,
            "slope_band": list(self.slope_band) if self.slope_band else None,
            "variance_band": list(self.variance_band),
            "ks_p_min": self.ks_p_min,
            "max_abs_z": self.max_abs_z,
        }


@dataclass(frozen=True)
class ExperimentPlan:
    name: str
    command: str
    model: ModelSpec
    sampling: SamplingSpec
    functionals: Tuple[FunctionalItem, ...]
    delta_ladder: Tuple[float, ...]
    replicates: int
    base_seed: int
    t_eval: Optional[float] = None
    bands: AcceptanceBands = field(default_factory=AcceptanceBands)
    feasible: bool = False
    degenerate_rate: bool = False
    exploratory: bool = False
    strict_grid: bool = False

    @property
    def evaluation_time(self) -> float:
        return self.sampling.horizon if self.t_eval is None else self.t_eval

    def discretized_time(self, delta_n: float) -> float:
        """Δn·[t/Δn] for the evaluation time."""
        return delta_n * math.floor(self.evaluation_time / delta_n + 1e-9)

    def sampling_for(self, delta_n: float) -> SamplingSpec:
        return self.sampling.with_delta_n(delta_n)

    def validate(self) -> List[str]:
        issues = list(validate_model(self.model))
        if self.command not in EXPERIMENT_COMMANDS:
            issues.append(f"command: expected one of {EXPERIMENT_COMMANDS}, got {self.command!r}")
        if not self.functionals:
            issues.append("functionals: at least one functional required")
        if not self.delta_ladder:
            issues.append("ladder: at least one Δn required")
        for a, b in zip(self.delta_ladder, self.delta_ladder[1:]):
            if not b < a:
                issues.append("ladder: Δn values must be strictly decreasing")
                break
        for delta_n in self.delta_ladder:
            issues += validate_sampling(self.sampling_for(delta_n))
        if self.replicates < 2:
            issues.append("replicates: M ≥ 2 required")
        if self.t_eval is not None and not 0.0 < self.t_eval <= self.sampling.horizon:
            issues.append("t_eval: 0 < t_eval ≤ T required")
        elif self.delta_ladder and self.discretized_time(self.delta_ladder[0]) <= 0.0:
            issues.append("t_eval: evaluation time shorter than the coarsest Δn")

        if self.command == "clt":
            for item in self.functionals:
                if item.theorem not in CLT_THEOREMS:
                    issues.append(f"functionals: {item.theorem} has no CLT")
            if self.replicates < CLT_MIN_REPLICATES:
                issues.append(f"replicates: the KS check needs M ≥ {CLT_MIN_REPLICATES}")
        elif self.command == "cov":
            if len(self.functionals) != 2:
                issues.append("functionals: a covariance check takes exactly two functionals")
            for item in self.functionals:
                if item.theorem not in COMPONENT_CLASSES:
                    issues.append(f"functionals: {item.theorem} is not a component of the joint CLT")
        elif self.command == "lln":
            for item in self.functionals:
                if item.theorem not in LLN_THEOREMS + CLT_THEOREMS:
                    issues.append(f"functionals: unknown theorem {item.theorem}")

        if self.feasible and any(item.theorem != "T6p" for item in self.functionals):
            issues.append("feasible: the feasible mode studentizes T6p only")
        if self.exploratory:
            for item in self.functionals:
                f = item.function
                if f is None or f.kind != "power" or not 2.0 < f.r <= 3.0:
                    issues.append(f"exploratory: {item.label} is not a power r ∈ (2, 3]")
        return issues

    def to_dict(self) -> Dict[str, Any]:
        """Plan echo written into every report."""
        model = self.model
        return {
            "name": self.name,
            "command": self.command,
            "model": {
                "x0": model.x0,
                "drift": vars(model.drift).copy(),
                "vol": vars(model.vol).copy(),
                "jumps": {**{k: v for k, v in vars(model.jumps).items() if k != "size_law"},
                          "size_law": vars(model.jumps.size_law).copy()},
            },
            "sampling": {"horizon": self.sampling.horizon, "refine": self.sampling.refine},
            "functionals": [item.label for item in self.functionals],
            "delta_ladder": list(self.delta_ladder),
            "replicates": self.replicates,
            "base_seed": self.base_seed,
            "t_eval": self.evaluation_time,
            "bands": self.bands.to_dict(),
            "feasible": self.feasible,
            "degenerate_rate": self.degenerate_rate,
            "exploratory": self.exploratory,
            "strict_grid": self.strict_grid,
        }


def ladder_from_exponents(exponents: Sequence[int]) -> Tuple[float, ...]:
    """Δn = 2^-k, coarsest first."""
    return tuple(2.0 ** -k for k in sorted(set(int(k) for k in exponents)))
