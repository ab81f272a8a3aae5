"""Command line entry point: ``hrnsim run`` and ``hrnsim verify``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import replace

from .config import PRESETS, ConfigError, load_config, preset_config
from .montecarlo import SWEEP_M, ExperimentConfig, SweepResult, run_sweep
from .oracle import run_checks

CSV_COLUMNS = ("scheme", "csi", "sweep_variable", "sweep_value", "mean_tx_power_W",
               "mean_tx_power_dBm", "mean_total_power_W", "ee_bits_per_joule", "std_err_W",
               "infeasible_count", "n_realizations", "seed")


def _num(x) -> str:
    # repr round-trips doubles exactly
    return repr(float(x))


def format_csv(result: SweepResult) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in result.rows:
        sweep_value = (str(int(row.sweep_value)) if row.sweep_variable == SWEEP_M
                       else _num(row.sweep_value))
        w.writerow([
            row.series.scheme_label, row.series.csi_label,
            "M" if row.sweep_variable == SWEEP_M else "R_th", sweep_value,
            _num(row.mean_tx_power), _num(row.mean_tx_power_dbm), _num(row.mean_total_power),
            _num(row.energy_efficiency), _num(row.std_err),
            row.infeasible_count, row.n_realizations, row.seed,
        ])
    return buf.getvalue()


def write_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(result))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hrnsim",
        description="Transmit power and energy efficiency of relay, IRS and hybrid links.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a parameter sweep and write a CSV")
    run.add_argument("--config", help="experiment file (INI); keys override the preset")
    run.add_argument("--preset", choices=sorted(PRESETS), help="start from a figure preset")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--seed", type=_seed, help="override the master seed")
    run.add_argument("--realizations", "-n", type=_positive_int,
                     help="override the number of channel realizations")
    run.add_argument("--threads", "-j", type=_positive_int, default=1,
                     help="worker threads (results do not depend on this)")

    verify = sub.add_parser("verify", help="run the analytical and brute-force oracle checks")
    verify.add_argument("--m", type=_positive_int, default=64,
                        help="unit cells for the trace checks (perfect square)")
    verify.add_argument("--n", type=_positive_int, default=100_000,
                        help="Monte Carlo draws for the trace checks")
    verify.add_argument("--trials", type=_positive_int, default=1000,
                        help="random phase configurations for the sCSI optimality check")
    verify.add_argument("--seed", type=_seed, default=2024)
    return parser


def _resolve_run_config(args) -> ExperimentConfig:
    if args.config is None and args.preset is None:
        raise ConfigError("run needs --config, --preset, or both")
    base = preset_config(args.preset) if args.preset else ExperimentConfig()
    config = load_config(args.config, base=base) if args.config else base
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.realizations is not None:
        overrides["realizations"] = args.realizations
    if overrides:
        config = replace(config, **overrides)
    return config


def cmd_run(args) -> int:
    try:
        config = _resolve_run_config(args)
    except ConfigError as exc:
        print(f"hrnsim: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    result = run_sweep(config, workers=args.threads)
    try:
        write_csv(result, args.out)
    except OSError as exc:
        print(f"hrnsim: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return 1
    flagged = sum(1 for r in result.rows if r.infeasible_count == r.n_realizations)
    print(f"wrote {len(result.rows)} rows to {args.out} "
          f"({time.perf_counter() - start:.1f} s, {flagged} all-infeasible points)",
          file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    if math.isqrt(args.m) ** 2 != args.m:
        print(f"hrnsim: --m must be a perfect square, got {args.m}", file=sys.stderr)
        return 2
    results = run_checks(n_elements=args.m, realizations=args.n, trials=args.trials,
                         seed=args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
