"""Command-line interface.

Exit codes: 0 success, 1 a figure/scenario check failed, 2 invalid input,
3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import experiments
from .allocator import (
    ConvergenceError,
    allocate_lnorm,
    allocate_minmax_exact,
    brute_force_minmax,
    min_bits_for_threshold,
    round_allocation,
)
from .model import AllocationReport, BitAllocation, SolverConfig, SystemParams, distortion, per_pu_interference
from .simulator import default_seed, measure_interference, rvq_interference

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_NO_CONVERGENCE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def parse_level(text: str, flag: str, as_db: bool = False) -> float:
    """Linear value from ``"20"``, ``"2/3"``, ``"20dB"``; with ``as_db`` a bare ``"20"`` means 20 dB."""
    t = text.strip()
    db = as_db
    if t.lower().endswith("db"):
        t, db = t[:-2], True
    try:
        value = float(Fraction(t.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: cannot parse {text!r} as a number") from None
    return 10.0 ** (value / 10.0) if db else value


def parse_list(text: str, flag: str, as_db: bool = False) -> List[float]:
    items = [s for s in text.split(",") if s.strip()]
    if not items:
        raise UsageError(f"{flag}: expected a comma-separated list")
    return [parse_level(s, flag, as_db) for s in items]


def _params(args) -> SystemParams:
    gains = parse_list(args.gains, "--gains", args.db)
    power = parse_level(args.power, "--power")
    try:
        return SystemParams(args.antennas, np.asarray(gains), power)
    except ValueError as exc:
        raise UsageError(f"--gains/--antennas/--power: {exc}") from None


def _fmt(x: float) -> str:
    return experiments._fmt(x)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_text(params: SystemParams, report: AllocationReport, extra: str = "") -> str:
    lines = [f"solver: {report.solver_tag.value}", f"budget: {_fmt(report.allocation.budget)}"]
    for k, (g, b, i) in enumerate(zip(params.avg_gains, report.bits, report.per_pu_interference)):
        lines.append(f"PU {k + 1}: gain={_fmt(g)} bits={_fmt(b)} interference={_fmt(i)}")
    lines.append(f"total bits: {_fmt(report.allocation.total)}")
    lines.append(f"max interference: {_fmt(report.max_interference)}")
    if extra:
        lines.append(extra)
    return "\n".join(lines) + "\n"


def _report_csv(params: SystemParams, report: AllocationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pu", "gain", "bits", "interference"])
    for k, (g, b, i) in enumerate(zip(params.avg_gains, report.bits, report.per_pu_interference)):
        w.writerow([k + 1, _fmt(g), _fmt(b), _fmt(i)])
    return buf.getvalue()


def cmd_allocate(args) -> int:
    params = _params(args)
    if args.budget < 0:
        raise UsageError("--budget: must be >= 0")
    solver = args.solver or ("lnorm" if args.lnorm else "brute" if args.brute else "exact")
    try:
        cfg = SolverConfig(l_exponent=args.L)
    except ValueError as exc:
        raise UsageError(f"--L: {exc}") from None
    if solver == "brute" or args.round:
        if float(args.budget) != int(args.budget):
            raise UsageError("--budget: must be an integer with --round or --solver brute")
    if solver == "brute":
        report = brute_force_minmax(params, int(args.budget))
    else:
        fn = allocate_lnorm if solver == "lnorm" else allocate_minmax_exact
        report = fn(params, args.budget, cfg)
        if args.round:
            rounded = round_allocation(report.allocation, int(args.budget), params)
            report = AllocationReport.from_bits(params, rounded.bits, rounded.budget, report.solver_tag)
    text = _report_csv(params, report) if args.format == "csv" else _report_text(params, report)
    _emit(text, args.out)
    return EXIT_OK


def cmd_minbits(args) -> int:
    params = _params(args)
    threshold = parse_level(args.threshold, "--threshold")
    if not threshold > 0:
        raise UsageError("--threshold: must be > 0")
    report = min_bits_for_threshold(params, threshold)
    if args.format == "csv":
        text = _report_csv(params, report)
    else:
        text = _report_text(params, report, f"unrounded total bits: {_fmt(report.unrounded_total)}")
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params(args)
    bits = parse_list(args.bits, "--bits")
    if len(bits) != params.num_pus:
        raise UsageError(f"--bits: expected {params.num_pus} values (one per gain), got {len(bits)}")
    if any(b != int(b) or b < 0 for b in bits):
        raise UsageError("--bits: must be non-negative integers")
    if params.num_antennas < params.num_pus + 1:
        raise UsageError(f"--antennas: zero-forcing needs at least K + 1 = {params.num_pus + 1}")
    if args.trials < 1:
        raise UsageError("--trials: must be >= 1")
    seed = default_seed() if args.seed is None else args.seed
    alloc = BitAllocation(bits, float(sum(bits)))
    stats = measure_interference(
        params, alloc, args.trials, seed, fixed_codebook=args.fixed_codebook, workers=args.workers
    )
    predicted = per_pu_interference(params, alloc.bits)
    rvq = rvq_interference(params, alloc.bits)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        [
            "pu", "gain", "bits", "trials", "seed",
            "predicted_interference", "predicted_rvq_interference", "measured_interference", "std_error",
            "model_distortion", "measured_distortion", "distortion_std_error",
        ]
    )
    for k in range(params.num_pus):
        w.writerow(
            [
                k + 1, _fmt(params.avg_gains[k]), int(bits[k]), stats.trials, stats.seed,
                _fmt(predicted[k]), _fmt(rvq[k]), _fmt(stats.mean_interference[k]), _fmt(stats.std_error[k]),
                _fmt(distortion(bits[k], params.num_antennas)), _fmt(stats.mean_distortion[k]),
                _fmt(stats.distortion_std_error[k]),
            ]
        )
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _finish_run(result: experiments.RunResult, out: Optional[str]) -> int:
    _emit(result.to_csv(), out)
    print(result.summary(), file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def cmd_figure(args) -> int:
    return _finish_run(experiments.FIGURES[args.id](), args.out)


def cmd_scenario(args) -> int:
    return _finish_run(experiments.run_scenario(args.file), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fballoc", description="Feedback-bit allocation for limited-feedback cognitive radio.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p):
        p.add_argument("--gains", required=True, help="comma-separated average channel gains, linear or with a dB suffix")
        p.add_argument("--antennas", type=int, required=True, help="transmit antennas N")
        p.add_argument("--power", default="1", help="transmit power P0, linear or with a dB suffix (default 1)")
        p.add_argument("--db", action="store_true", help="read unsuffixed gains as dB")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("allocate", help="min-max interference bit allocation")
    scenario_flags(p)
    p.add_argument("--budget", type=float, required=True, help="total feedback bits B")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--solver", choices=["exact", "lnorm", "brute"])
    group.add_argument("--exact", action="store_true", help="same as --solver exact")
    group.add_argument("--lnorm", action="store_true", help="same as --solver lnorm")
    group.add_argument("--brute", action="store_true", help="same as --solver brute")
    p.add_argument("--L", type=int, default=100, help="L-norm exponent (default 100)")
    p.add_argument("--round", action="store_true", help="round to integers within the budget")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("minbits", help="fewest bits meeting an interference threshold")
    scenario_flags(p)
    p.add_argument("--threshold", required=True, help="per-PU interference cap")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_minbits)

    p = sub.add_parser("simulate", help="Monte Carlo interference measurement")
    scenario_flags(p)
    p.add_argument("--bits", required=True, help="comma-separated integer bits per PU")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None, help="master seed (default $FBALLOC_SEED)")
    p.add_argument("--fixed-codebook", action="store_true", help="one codebook per PU for the whole run")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure", help="reproduce one of the canned figure sweeps as CSV")
    p.add_argument("--id", type=int, choices=sorted(experiments.FIGURES), required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("scenario", help="run a YAML scenario file")
    p.add_argument("--file", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (UsageError, experiments.ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
