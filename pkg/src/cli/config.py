"""
Experiment configs: TOML tables mapped onto the argument dataclasses of
src/params.py, then converted into ModelSpec, SamplingSpec and ExperimentPlan.

    seed = 20240601
    output_dir = "runs/bm"

    [model]            x0
    [model.drift]      DriftArguments
    [model.vol]        VolArguments
    [model.jumps]      JumpArguments
    [sampling]         SamplingArguments
    [[experiments]]    ExperimentArguments, one table per plan

Every error names the file and the line of the offending table or key.
"""

import logging
import re
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback with the same API
    import tomli as tomllib
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type

from transformers import HfArgumentParser

from src.errors import ConfigError
from src.harness.plan import AcceptanceBands, ExperimentPlan, ladder_from_exponents, parse_functional
from src.model.spec import DriftSpec, JumpSizeLaw, JumpSpec, ModelSpec, SamplingSpec, VolSpec, validate_model
from src.params import (
    ConfigArguments,
    DriftArguments,
    ExperimentArguments,
    JumpArguments,
    ModelArguments,
    SamplingArguments,
    VolArguments,
)

logger = logging.getLogger(__name__)

_TOML_LINE = re.compile(r"line (\d+)")


@dataclass
class Config:
    path: str
    seed: int
    output_dir: str
    model: ModelSpec
    sampling: SamplingSpec
    strict_grid: bool
    experiments: List[ExperimentPlan]


class _Locator:
    """Line numbers of table headers and keys in the raw TOML text."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def _headers(self, header: str) -> List[int]:
        pattern = re.compile(r"^\s*\[{1,2}\s*" + re.escape(header) + r"\s*\]{1,2}\s*(#.*)?$")
        return [i + 1 for i, line in enumerate(self.lines) if pattern.match(line)]

    def line(self, table: str, key: Optional[str] = None, index: int = 0) -> Optional[int]:
        if table:
            headers = self._headers(table)
            if index >= len(headers):
                return None
            start = headers[index]
        else:
            start = 0
        if key is None:
            return start or None
        key_pattern = re.compile(r"^\s*" + re.escape(key) + r"\s*=")
        for number in range(start + 1, len(self.lines) + 1):
            line = self.lines[number - 1]
            if line.lstrip().startswith("["):
                break
            if key_pattern.match(line):
                return number
        return start or None


class _Reader:
    def __init__(self, path: str, text: str):
        self.path = path
        self.locator = _Locator(text)

    def error(self, message: str, table: str = "", key: Optional[str] = None, index: int = 0) -> ConfigError:
        where = ".".join(p for p in (table, key) if p)
        text = f"{where}: {message}" if where else message
        return ConfigError(text, self.path, self.locator.line(table, key, index))

    def parse(self, cls: Type, values: Dict[str, Any], table: str = "", index: int = 0):
        known = {f.name for f in fields(cls)}
        for key in values:
            if key not in known:
                raise self.error(f"unknown key (expected one of {sorted(known)})", table, key, index)
        try:
            (args,) = HfArgumentParser(cls).parse_dict(values, allow_extra_keys=False)
        except (TypeError, ValueError) as exc:
            raise self.error(str(exc), table, index=index) from exc
        return args


def _table(values: Dict[str, Any], key: str, reader: _Reader, parent: str = "") -> Dict[str, Any]:
    value = values.get(key, {})
    if not isinstance(value, dict):
        raise reader.error("expected a table", parent, key)
    return value


def build_model(model: ModelArguments, drift: DriftArguments, vol: VolArguments, jumps: JumpArguments) -> ModelSpec:
    if jumps.size_law == "fixed":
        size_law = JumpSizeLaw.fixed(jumps.size)
    elif jumps.size_law == "gaussian":
        size_law = JumpSizeLaw.gaussian(jumps.mean, jumps.variance)
    elif jumps.size_law == "double_exponential":
        size_law = JumpSizeLaw.double_exponential(jumps.eta_up, jumps.eta_down, jumps.p_up)
    else:
        raise ValueError(
            f"Unknown size law: {jumps.size_law}. Should be one of fixed, gaussian or double_exponential."
        )
    return ModelSpec(
        drift=DriftSpec(kind=drift.kind, value=drift.value, amplitude=drift.amplitude, frequency=drift.frequency),
        vol=VolSpec(
            kind=vol.kind,
            sigma0=vol.sigma0,
            mean_reversion=vol.mean_reversion,
            vol_of_vol=vol.vol_of_vol,
            leverage=vol.leverage,
            cojump=vol.cojump,
        ),
        jumps=JumpSpec(
            kind=jumps.kind,
            rate=jumps.rate,
            size_law=size_law,
            beta=jumps.beta,
            scale=jumps.scale,
            cutoff_policy=jumps.cutoff_policy,
            cutoff=jumps.cutoff,
        ),
        x0=model.x0,
    )


def _band(values: List[float], name: str) -> Tuple[float, float]:
    if len(values) != 2 or not values[0] <= values[1]:
        raise ValueError(f"{name} must be [lo, hi] with lo ≤ hi")
    return float(values[0]), float(values[1])


def build_plan(
    exp: ExperimentArguments,
    model: ModelSpec,
    sampling: SamplingSpec,
    seed: int,
    strict_grid: bool = False,
) -> ExperimentPlan:
    functionals = tuple(parse_functional(text, exp.eta) for text in exp.functionals)
    ladder = ladder_from_exponents(exp.ladder) if exp.ladder else (sampling.delta_n,)
    if exp.command in ("clt", "cov"):
        ladder = (exp.delta_n if exp.delta_n is not None else ladder[-1],)
    bands = AcceptanceBands(
        max_rel_error=exp.max_rel_error,
        slope_band=_band(exp.slope_band, "slope_band") if exp.slope_band else None,
        variance_band=_band(exp.variance_band, "variance_band"),
        ks_p_min=exp.ks_p_min,
        max_abs_z=exp.max_abs_z,
    )
    return ExperimentPlan(
        name=exp.name,
        command=exp.command,
        model=model,
        sampling=sampling,
        functionals=functionals,
        delta_ladder=ladder,
        replicates=exp.replicates,
        base_seed=seed,
        t_eval=exp.t_eval,
        bands=bands,
        feasible=exp.feasible,
        degenerate_rate=exp.degenerate_rate,
        exploratory=exp.exploratory,
        strict_grid=strict_grid,
    )


def load_config(path: str, seed: Optional[int] = None, replicates: Optional[int] = None) -> Config:
    """Parse and validate a config; ``seed`` and ``replicates`` override the file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _TOML_LINE.search(str(exc))
        raise ConfigError(f"invalid TOML: {exc}", path, int(match.group(1)) if match else None) from exc

    reader = _Reader(path, text)
    top = {k: v for k, v in raw.items() if k not in ("model", "sampling", "experiments")}
    conf = reader.parse(ConfigArguments, top)

    model_table = _table(raw, "model", reader)
    model_args = reader.parse(
        ModelArguments, {k: v for k, v in model_table.items() if k not in ("drift", "vol", "jumps")}, "model"
    )
    drift = reader.parse(DriftArguments, _table(model_table, "drift", reader, "model"), "model.drift")
    vol = reader.parse(VolArguments, _table(model_table, "vol", reader, "model"), "model.vol")
    jumps = reader.parse(JumpArguments, _table(model_table, "jumps", reader, "model"), "model.jumps")
    try:
        model = build_model(model_args, drift, vol, jumps)
    except ValueError as exc:
        raise reader.error(str(exc), "model.jumps", "size_law") from exc
    issues = validate_model(model)
    if issues:
        head = issues[0].partition(":")[0].strip()
        table, _, key = head.rpartition(".")
        raise reader.error("; ".join(issues), f"model.{table}" if table else "model", key or None)

    sampling_args = reader.parse(SamplingArguments, _table(raw, "sampling", reader), "sampling")
    sampling = SamplingSpec(horizon=sampling_args.horizon, delta_n=sampling_args.delta_n,
                            refine=sampling_args.refine)

    base_seed = conf.seed if seed is None else seed
    if not 0 <= base_seed < 2 ** 64:
        raise reader.error("seed must be an unsigned 64-bit integer", "", "seed")

    experiments = []
    tables = raw.get("experiments", [])
    if not isinstance(tables, list):
        raise reader.error("expected an array of tables [[experiments]]", "", "experiments")
    for index, values in enumerate(tables):
        exp = reader.parse(ExperimentArguments, values, "experiments", index)
        if replicates is not None:
            exp.replicates = replicates
        try:
            plan = build_plan(exp, model, sampling, base_seed, sampling_args.strict_grid)
        except ValueError as exc:
            raise reader.error(str(exc), "experiments", "functionals", index) from exc
        issues = plan.validate()
        if issues:
            key = issues[0].partition(":")[0].strip()
            raise reader.error("; ".join(issues), "experiments", key if key in values else None, index)
        experiments.append(plan)

    logger.info("Loaded %s: %d experiment(s), seed %d", path, len(experiments), base_seed)
    return Config(
        path=path,
        seed=base_seed,
        output_dir=conf.output_dir,
        model=model,
        sampling=sampling,
        strict_grid=sampling_args.strict_grid,
        experiments=experiments,
    )
