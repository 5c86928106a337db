from dataclasses import dataclass, field
from typing import List, Optional

from src.constants import DEFAULT_LADDER_EXPONENTS, DEFAULT_REFINE, DEFAULT_SEED


@dataclass
class RunArguments:
    config: Optional[str] = field(default=None, metadata={"help": "Path to the experiment TOML file."})
    out: Optional[str] = field(
        default=None,
        metadata={"help": "Output directory. Defaults to `output_dir` of the config."}
    )
    seed: Optional[int] = field(default=None, metadata={"help": "Base seed (unsigned 64-bit), overrides the config."})
    replicates: Optional[int] = field(default=None, metadata={"help": "Replicates per ladder rung, overrides every experiment."})
    jobs: int = field(default=1, metadata={"help": "Worker hint. Results do not depend on it."})
    paths: int = field(default=1, metadata={"help": "Number of paths written by `simulate`."})
    dump: Optional[str] = field(
        default=None,
        metadata={"help": "Directory for path CSVs written by `simulate`. Defaults to <out>/paths."}
    )
    report: Optional[str] = field(default=None, metadata={"help": "Report JSON read by `rate-plot`."})
    log_level: str = field(default="INFO", metadata={"help": "Logging level (DEBUG, INFO, WARNING, ERROR)."})


@dataclass
class ConfigArguments:
    seed: int = field(default=DEFAULT_SEED, metadata={"help": "Single source of randomness for the whole config."})
    output_dir: str = field(default="runs", metadata={"help": "Where reports and dumps are written."})


@dataclass
class ModelArguments:
    x0: float = field(default=0.0, metadata={"help": "Initial value X_0."})


@dataclass
class DriftArguments:
    kind: str = field(
        default="constant",
        metadata={"help": "Drift kind. Should be one of `constant` or `time_function`."}
    )
    value: float = field(default=0.0, metadata={"help": "Drift level b (units of X per unit time)."})
    amplitude: float = field(default=0.0, metadata={"help": "time_function: amplitude of the sinusoid."})
    frequency: float = field(default=1.0, metadata={"help": "time_function: cycles per unit time."})


@dataclass
class VolArguments:
    kind: str = field(
        default="constant",
        metadata={"help": "Volatility kind. Should be one of `none`, `constant`, `ou_vol` or `jump_vol`."}
    )
    sigma0: float = field(default=1.0, metadata={"help": "Base volatility level σ₀."})
    mean_reversion: float = field(default=1.0, metadata={"help": "ou_vol: mean reversion of the log-vol factor."})
    vol_of_vol: float = field(default=0.0, metadata={"help": "ou_vol: volatility of the log-vol factor."})
    leverage: float = field(default=0.0, metadata={"help": "ou_vol: correlation with the Brownian driver of X."})
    cojump: float = field(default=0.0, metadata={"help": "jump_vol: log-vol shift ζ at every jump of X."})


@dataclass
class JumpArguments:
    kind: str = field(
        default="none",
        metadata={"help": "Jump kind. Should be one of `none`, `compound_poisson` or `stable_like`."}
    )
    rate: float = field(default=0.0, metadata={"help": "compound_poisson: intensity λ."})
    size_law: str = field(
        default="fixed",
        metadata={"help": "compound_poisson size law. Should be one of `fixed`, `gaussian` or `double_exponential`."}
    )
    size: float = field(default=1.0, metadata={"help": "fixed: jump size a."})
    mean: float = field(default=0.0, metadata={"help": "gaussian: mean m."})
    variance: float = field(default=1.0, metadata={"help": "gaussian: variance v."})
    eta_up: float = field(default=1.0, metadata={"help": "double_exponential: rate of upward jumps."})
    eta_down: float = field(default=1.0, metadata={"help": "double_exponential: rate of downward jumps."})
    p_up: float = field(default=0.5, metadata={"help": "double_exponential: probability of an upward jump."})
    beta: float = field(default=1.0, metadata={"help": "stable_like: index β in (0, 2)."})
    scale: float = field(default=1.0, metadata={"help": "stable_like: Lévy density scale."})
    cutoff_policy: str = field(
        default="discard",
        metadata={"help": "stable_like small jumps. Should be one of `discard` or `gaussian`."}
    )
    cutoff: Optional[float] = field(
        default=None,
        metadata={"help": "stable_like: small-jump cutoff. Defaults to fine_step ** (1 / β)."}
    )


@dataclass
class SamplingArguments:
    horizon: float = field(default=1.0, metadata={"help": "Time horizon T."})
    delta_n: float = field(default=2.0 ** -10, metadata={"help": "Default observation step Δn."})
    refine: int = field(default=DEFAULT_REFINE, metadata={"help": "Fine simulation steps per observation step."})
    strict_grid: bool = field(
        default=False,
        metadata={"help": "Raise instead of warn when jumps are too dense for the fine grid."}
    )


@dataclass
class ExperimentArguments:
    name: str = field(default="experiment", metadata={"help": "Experiment label used in reports."})
    command: str = field(default="lln", metadata={"help": "Should be one of `lln`, `clt` or `cov`."})
    functionals: List[str] = field(
        default_factory=list,
        metadata={"help": "Entries `<theorem> <function>`, e.g. `T3ii power:r=1` or `T6p truncation:varpi=0.49,alpha=3`."}
    )
    ladder: List[int] = field(
        default_factory=lambda: list(DEFAULT_LADDER_EXPONENTS),
        metadata={"help": "Exponents k of the ladder Δn = 2^-k."}
    )
    delta_n: Optional[float] = field(
        default=None,
        metadata={"help": "Step used by clt/cov. Defaults to the finest ladder rung."}
    )
    replicates: int = field(default=200, metadata={"help": "Replicates M per rung."})
    t_eval: Optional[float] = field(default=None, metadata={"help": "Evaluation time. Defaults to the horizon."})
    eta: Optional[float] = field(default=None, metadata={"help": "Cutoff scale η used by T2 and T4."})
    max_rel_error: float = field(default=0.02, metadata={"help": "LLN band on RMSE relative to the mean |limit|."})
    slope_band: List[float] = field(
        default_factory=list,
        metadata={"help": "LLN band `[lo, hi]` on the fitted rate slope. Empty disables the check."}
    )
    variance_band: List[float] = field(
        default_factory=lambda: [0.85, 1.15],
        metadata={"help": "CLT band on the variance of standardized errors."}
    )
    ks_p_min: float = field(default=0.001, metadata={"help": "CLT lower bound on the KS p-value."})
    max_abs_z: float = field(default=4.0, metadata={"help": "Covariance band on |z| of the empirical covariance."})
    feasible: bool = field(default=False, metadata={"help": "T6' only: studentize with estimated quarticity (experimental)."})
    degenerate_rate: bool = field(
        default=False,
        metadata={"help": "LLN: report the rate slope against the degenerate-branch exponent."}
    )
    exploratory: bool = field(
        default=False,
        metadata={"help": "LLN: tabulate √Δn-scaled errors with no acceptance verdict."}
    )
