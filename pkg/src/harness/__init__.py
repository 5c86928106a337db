from .measures import Measurement, levy_compensators, measure
from .plan import AcceptanceBands, ExperimentPlan, ladder_from_exponents, parse_functional, parse_truncation
from .report import build_report, load_report, rate_plot_frames, report_frame, write_report, write_report_json
from .runner import run_clt, run_covariance_pair, run_lln, run_plan, standardize
from .statistics import RateFit, fit_rate, kolmogorov_sf, ks_distance, rate_axis, summarize

__all__ = [
    "AcceptanceBands",
    "ExperimentPlan",
    "Measurement",
    "RateFit",
    "build_report",
    "fit_rate",
    "kolmogorov_sf",
    "ks_distance",
    "ladder_from_exponents",
    "levy_compensators",
    "load_report",
    "measure",
    "parse_functional",
    "parse_truncation",
    "rate_axis",
    "rate_plot_frames",
    "report_frame",
    "run_clt",
    "run_covariance_pair",
    "run_lln",
    "run_plan",
    "standardize",
    "summarize",
    "write_report",
    "write_report_json",
]
