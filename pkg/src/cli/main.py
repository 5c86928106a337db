"""
Command-line front end.

    python -m src.cli simulate      --config PATH [--paths N] [--dump DIR]
    python -m src.cli lln|clt|cov   --config PATH [--out DIR] [--seed U64] [--replicates M] [--jobs K]
    python -m src.cli rate-plot     --report PATH [--out DIR]
    python -m src.cli list-theorems

Exit codes: 0 pass, 1 a band failed, 2 admissibility refusal, 64 usage or
config error, 65 malformed report.
"""

import logging
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from tabulate import tabulate
from transformers import HfArgumentParser

from src.constants import COMMANDS, EXIT_BAD_REPORT, EXIT_FAIL, EXIT_PASS, EXIT_REFUSED, EXIT_USAGE
from src.errors import ConfigError, GridError, ModelValidationError, ReportError
from src.harness.report import build_report, load_report, rate_plot_frames, write_report
from src.harness.runner import run_plan
from src.limits.theorems import THEOREMS
from src.params import RunArguments
from src.simulate.io import dump_path
from src.simulate.paths import simulate_batch
from src.utils import atomic_write_frame

from .config import load_config

logger = logging.getLogger(__name__)

USAGE = "usage: python -m src.cli {" + ",".join(COMMANDS) + "} [flags]"


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.=_-]+", "_", text).strip("_")


def _require_config(args: RunArguments) -> None:
    if not args.config:
        raise ConfigError("--config is required for this command")


def cmd_simulate(args: RunArguments) -> int:
    _require_config(args)
    config = load_config(args.config, seed=args.seed)
    if args.paths <= 0:
        logger.warning("--paths %d: nothing to simulate, no files written", args.paths)
        return EXIT_PASS
    out = Path(args.out or config.output_dir)
    dump = Path(args.dump) if args.dump else out / "paths"
    rows = []
    batch = simulate_batch(config.model, config.sampling, config.seed, args.paths, args.jobs, config.strict_grid)
    for k, path in enumerate(batch):
        path_csv, jump_csv = dump_path(path, dump, f"path-{k:04d}")
        rows.append([k, path.seed, len(path.jumps), float(path.x[-1]), path_csv.name])
    print(tabulate(rows, headers=["k", "seed", "jumps", "X_T", "file"]))
    logger.info("Wrote %d path(s) to %s", len(rows), dump)
    return EXIT_PASS


def _summary_rows(report) -> List[list]:
    rows = []
    for experiment in report["experiments"]:
        for entry in experiment["functionals"]:
            if "refused" in entry:
                verdict = "refused"
            elif entry.get("passed") is None:
                verdict = "no verdict"
            else:
                verdict = "pass" if entry["passed"] else "FAIL"
            rate = entry.get("rate") or {}
            clt = entry.get("clt") or {}
            cov = entry.get("covariance") or {}
            rows.append([
                experiment["experiment"],
                entry["label"],
                rate.get("slope"),
                clt.get("z_variance"),
                clt.get("ks_pvalue"),
                cov.get("z"),
                verdict,
            ])
    return rows


def cmd_experiments(command: str, args: RunArguments) -> int:
    _require_config(args)
    config = load_config(args.config, seed=args.seed, replicates=args.replicates)
    plans = [plan for plan in config.experiments if plan.command == command]
    if not plans:
        raise ConfigError(f"no [[experiments]] with command = {command!r}", config.path)

    results = []
    for plan in plans:
        logger.info("Running %s (%s, %d functional(s), M = %d)", plan.name, command, len(plan.functionals),
                    plan.replicates)
        results.append(run_plan(plan, jobs=args.jobs))
    report = build_report(command, results)
    write_report(report, Path(args.out or config.output_dir))

    print(tabulate(_summary_rows(report), headers=["experiment", "functional", "slope", "var(z)", "KS p",
                                                   "cov z", "verdict"], floatfmt=".4g"))
    for experiment in report["experiments"]:
        for entry in experiment["functionals"]:
            if "refused" in entry:
                logger.error("%s: %s", entry["label"], entry["refused"]["message"])

    if report["refused"]:
        return EXIT_REFUSED
    return EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_rate_plot(args: RunArguments) -> int:
    if not args.report:
        raise ConfigError("--report is required for rate-plot")
    report = load_report(args.report)
    out = Path(args.out) if args.out else Path(args.report).parent
    for experiment, label, frame in rate_plot_frames(report):
        target = atomic_write_frame(out / f"rate-plot-{_slug(experiment)}-{_slug(label)}.csv", frame)
        logger.info("Wrote %s", target)
    return EXIT_PASS


def cmd_list_theorems() -> int:
    rows = [[info.tag, info.statement, info.scaling, info.conditions] for info in THEOREMS.values()]
    print(tabulate(rows, headers=["theorem", "statement", "CLT scaling", "conditions"], maxcolwidths=[None, 48, None, 60]))
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        print(USAGE, file=sys.stderr)
        return EXIT_USAGE
    command, rest = argv[0], argv[1:]
    try:
        (args,) = HfArgumentParser(RunArguments).parse_args_into_dataclasses(args=rest)
    except SystemExit as exc:
        # argparse exits 0 on --help
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    except ValueError as exc:
        print(f"{exc}\n{USAGE}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging(args.log_level)

    try:
        if command == "simulate":
            return cmd_simulate(args)
        elif command in ("lln", "clt", "cov"):
            return cmd_experiments(command, args)
        elif command == "rate-plot":
            return cmd_rate_plot(args)
        elif command == "list-theorems":
            return cmd_list_theorems()
        else:
            raise ValueError(f"Unknown command: {command}")
    except (ConfigError, ModelValidationError, GridError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except ReportError as exc:
        logger.error("%s", exc)
        return EXIT_BAD_REPORT


if __name__ == "__main__":
    sys.exit(main())
