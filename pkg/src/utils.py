import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid, trapezoid

from src.constants import CSV_FLOAT_FORMAT, GOLDEN_GAMMA, MASK64, MIX_MULT_1, MIX_MULT_2

logger = logging.getLogger(__name__)


def mix64(z: int) -> int:
    """splitmix64 finalizer: a bijection on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_MULT_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MULT_2) & MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, k: int) -> int:
    """Seed of stream ``k``: mix64(base_seed XOR k * golden gamma)."""
    if k < 0:
        raise ValueError(f"stream index must be >= 0, got {k}")
    return mix64((base_seed & MASK64) ^ ((k * GOLDEN_GAMMA) & MASK64))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & MASK64)


def exact_sum(values: Iterable[float]) -> float:
    # order-free: identical result for any permutation of the inputs
    return math.fsum(float(v) for v in values)


def exact_mean(values) -> float:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("mean of an empty sample")
    return math.fsum(values.tolist()) / values.size


def running_integral(grid: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Running trapezoid integral of ``y`` over ``grid``, starting at 0."""
    return cumulative_trapezoid(y, grid, initial=0.0)


def integral_to_index(grid: np.ndarray, y: np.ndarray, k: int) -> float:
    if k <= 0:
        return 0.0
    return float(trapezoid(y[: k + 1], grid[: k + 1]))


def grid_index(t: float, step: float, n_max: int) -> int:
    """Index of the last grid point at or before ``t`` on a uniform grid."""
    k = int(math.floor(t / step + 1e-9))
    return max(0, min(k, n_max))


def _atomic_replace(path: Path, write) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            write(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    return _atomic_replace(Path(path), lambda handle: handle.write(text))


def atomic_write_frame(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    return _atomic_replace(
        Path(path), lambda handle: frame.to_csv(handle, index=False, float_format=CSV_FLOAT_FORMAT)
    )
