import logging
from pathlib import Path
from typing import Tuple, Union

import pandas as pd

from src.constants import JUMP_CSV_COLUMNS, PATH_CSV_COLUMNS
from src.utils import atomic_write_frame

from .paths import PathBundle

logger = logging.getLogger(__name__)


def path_frame(path: PathBundle) -> pd.DataFrame:
    return pd.DataFrame({"t": path.grid, "x": path.x, "c": path.c}, columns=PATH_CSV_COLUMNS)


def jump_frame(path: PathBundle) -> pd.DataFrame:
    jumps = path.jumps
    return pd.DataFrame(
        {"t": jumps.times, "dx": jumps.sizes, "c_left": jumps.c_left, "c_right": jumps.c_right},
        columns=JUMP_CSV_COLUMNS,
    )


def dump_path(path: PathBundle, directory: Union[str, Path], stem: str) -> Tuple[Path, Path]:
    """Write ``<stem>.csv`` (t,x,c) and ``<stem>-jumps.csv`` (t,dx,c_left,c_right)."""
    directory = Path(directory)
    path_csv = atomic_write_frame(directory / f"{stem}.csv", path_frame(path))
    jump_csv = atomic_write_frame(directory / f"{stem}-jumps.csv", jump_frame(path))
    logger.debug("wrote %s and %s (%d jumps)", path_csv, jump_csv, len(path.jumps))
    return path_csv, jump_csv
