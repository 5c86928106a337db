from .io import dump_path, jump_frame, path_frame
from .paths import (
    JumpRecord,
    PathBundle,
    observation_indices,
    replicate_seeds,
    restrict_to_observations,
    simulate_batch,
    simulate_path,
)

__all__ = [
    "JumpRecord",
    "PathBundle",
    "dump_path",
    "jump_frame",
    "observation_indices",
    "path_frame",
    "replicate_seeds",
    "restrict_to_observations",
    "simulate_batch",
    "simulate_path",
]
