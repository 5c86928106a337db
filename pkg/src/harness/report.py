import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import ujson as json

from src.constants import RATE_PLOT_COLUMNS, REPORT_SCHEMA
from src.errors import ReportError
from src.utils import atomic_write_frame, atomic_write_text

from .statistics import rate_axis

logger = logging.getLogger(__name__)

FLAT_COLUMNS = ["experiment", "functional", "theorem", "section", "delta_n", "key", "value"]


def _sanitize(obj: Any) -> Any:
    """Non-finite floats become null; numpy scalars become python ones."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def build_report(command: str, experiments: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    experiments = list(experiments)
    return _sanitize({
        "schema": REPORT_SCHEMA,
        "command": command,
        "experiments": experiments,
        "passed": bool(experiments) and all(e["passed"] for e in experiments),
        "refused": any(e["refused"] for e in experiments),
    })


def write_report_json(report: Dict[str, Any], path: Union[str, Path]) -> Path:
    text = json.dumps(_sanitize(report), sort_keys=True, indent=2, ensure_ascii=False)
    return atomic_write_text(path, text + "\n")


def _rows(experiment: str, entry: Dict[str, Any]):
    label, theorem = entry.get("label"), entry.get("theorem")

    def row(section, delta_n, key, value):
        return [experiment, label, theorem, section, delta_n, key, value]

    if "refused" in entry:
        yield row("refused", None, "message", entry["refused"]["message"])
        yield row("refused", None, "exponent", entry["refused"].get("exponent"))
    for rung in entry.get("rungs", []):
        for key in ("mean_error", "rmse", "error_variance", "rel_rmse"):
            yield row("rung", rung["delta_n"], key, rung[key])
    if entry.get("rate"):
        for key in ("slope", "stderr", "intercept"):
            yield row("rate", None, key, entry["rate"][key])
    for section in ("clt", "limit_law", "feasible"):
        block = entry.get(section)
        if block:
            for key in ("z_mean", "z_variance", "ks_distance", "ks_pvalue"):
                if key in block:
                    yield row(section, entry.get("delta_n"), key, block[key])
    if entry.get("covariance"):
        cov = entry["covariance"]
        for key in ("empirical", "theoretical", "stderr", "z"):
            yield row("covariance", cov["delta_n"], key, cov[key])
    if entry.get("passed") is not None:
        yield row("verdict", None, "passed", entry["passed"])


def report_frame(report: Dict[str, Any]) -> pd.DataFrame:
    """Long table with one metric per row, for plotting tools."""
    rows: List[list] = []
    for experiment in report.get("experiments", []):
        for entry in experiment.get("functionals", []):
            rows.extend(_rows(experiment["experiment"], entry))
    return pd.DataFrame(rows, columns=FLAT_COLUMNS)


def write_report(report: Dict[str, Any], out_dir: Union[str, Path]) -> Tuple[Path, Path]:
    out_dir = Path(out_dir)
    command = report["command"]
    json_path = write_report_json(report, out_dir / f"report-{command}.json")
    csv_path = atomic_write_frame(out_dir / f"report-{command}.csv", report_frame(report))
    logger.info("Report written to %s and %s", json_path, csv_path)
    return json_path, csv_path


def load_report(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ReportError(f"cannot read report {path}: {exc}") from exc
    if not isinstance(report, dict) or report.get("schema") != REPORT_SCHEMA:
        raise ReportError(f"{path}: not a {REPORT_SCHEMA} report")
    return report


def rate_plot_frames(report: Dict[str, Any]) -> List[Tuple[str, str, pd.DataFrame]]:
    """(experiment, functional, frame) for every functional with a rate section.

    The fit column lies on the log₂(1/Δn) axis of the rate regression, so a
    √Δn rate plots with slope −0.5.
    """
    experiments = report.get("experiments") or []
    if not experiments:
        raise ReportError("empty report")
    frames = []
    for experiment in experiments:
        for entry in experiment.get("functionals", []):
            rungs = entry.get("rungs")
            if rungs is None:
                continue
            if len(rungs) < 2:
                raise ReportError(f"{entry['label']}: ≥ 2 rungs required")
            x = rate_axis([r["delta_n"] for r in rungs])
            rmse = np.array([np.nan if r["rmse"] is None else r["rmse"] for r in rungs], dtype=float)
            with np.errstate(divide="ignore"):
                y = np.where(rmse > 0.0, np.log2(np.where(rmse > 0.0, rmse, 1.0)), np.nan)
            rate = entry.get("rate") or {}
            if rate.get("slope") is None or rate.get("intercept") is None:
                fit = np.full_like(x, np.nan)
            else:
                fit = rate["intercept"] + rate["slope"] * x
            frame = pd.DataFrame({"log2_inv_delta_n": x, "log2_rmse": y, "log2_rmse_fit": fit},
                                 columns=RATE_PLOT_COLUMNS)
            frames.append((experiment["experiment"], entry["label"], frame))
    if not frames:
        raise ReportError("report has no rate section")
    return frames
