"""
tools/check_determinism.py

Run one experiment command with --jobs 1 and --jobs 8 and compare the report bytes
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.cli.main import main as cli_main  # noqa: E402


def run_once(config: str, command: str, jobs: int, out_dir: Path, replicates: int = None) -> bytes:
    argv = [command, "--config", config, "--out", str(out_dir), "--jobs", str(jobs), "--log_level", "WARNING"]
    if replicates is not None:
        argv += ["--replicates", str(replicates)]
    status = cli_main(argv)
    report = out_dir / f"report-{command}.json"
    if not report.exists():
        raise SystemExit(f"{command} exited {status} without writing {report}")
    return report.read_bytes()


def main():
    import argparse

    parser = argparse.ArgumentParser(description="Check that reports do not depend on --jobs")
    parser.add_argument("--config", required=True, help="Experiment TOML")
    parser.add_argument("--command", default="lln", choices=["lln", "clt", "cov"])
    parser.add_argument("--replicates", type=int, default=None, help="Override replicates to keep the run short")
    parser.add_argument("--jobs", type=int, nargs=2, default=[1, 8], help="The two worker counts to compare")
    args = parser.parse_args()

    print(f"\n{'='*70}")
    print(f"🔁 Determinism check: {args.command} {args.config}")
    print(f"{'='*70}\n")

    with tempfile.TemporaryDirectory() as tmp:
        reports = []
        for jobs in args.jobs:
            print(f"Running with --jobs {jobs}...")
            reports.append(run_once(args.config, args.command, jobs, Path(tmp) / f"jobs-{jobs}", args.replicates))

    if reports[0] == reports[1]:
        print(f"\n✅ Reports are byte-identical ({len(reports[0])} bytes)")
        return 0
    print("\n❌ Reports differ between worker counts")
    return 1


if __name__ == "__main__":
    sys.exit(main())
