from .hypotheses import (
    HypothesisProfile,
    activity_index,
    hypothesis_profile,
    in_index_set,
    jump_index_set,
    phi_intensity,
)
from .spec import (
    DriftSpec,
    JumpSizeLaw,
    JumpSpec,
    ModelSpec,
    SamplingSpec,
    TruncationSpec,
    VolSpec,
    require_valid,
    validate_model,
    validate_sampling,
)

__all__ = [
    "DriftSpec",
    "HypothesisProfile",
    "JumpSizeLaw",
    "JumpSpec",
    "ModelSpec",
    "SamplingSpec",
    "TruncationSpec",
    "VolSpec",
    "activity_index",
    "hypothesis_profile",
    "in_index_set",
    "jump_index_set",
    "phi_intensity",
    "require_valid",
    "validate_model",
    "validate_sampling",
]
