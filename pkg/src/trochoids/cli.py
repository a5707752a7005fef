"""Command-line front end.

Exit codes: 0 success, 1 infeasible input, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

from trochoids.bench import BenchConfig, baseline_plan, run_bench
from trochoids.candidate_reduction import plan
from trochoids.dubins_core import validate_table
from trochoids.errors import TrochoidError
from trochoids.geom_frames import Pose, VehicleLimits, Wind


def _floats(n):
    def parse(text):
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return vals
    return parse


def _add_problem_args(p):
    p.add_argument("--start", type=_floats(4), required=True, metavar="X,Y,Z,PSI")
    p.add_argument("--goal", type=_floats(4), required=True, metavar="X,Y,Z,PSI")
    p.add_argument("--wind", type=_floats(2), default=[0.0, 0.0], metavar="WX,WY")
    p.add_argument("--airspeed", type=float, required=True, help="m/s")
    p.add_argument("--max-turn-rate", type=float, required=True, help="rad/s")
    p.add_argument("--dt", type=float, default=0.1, help="sample spacing [s]")


def _problem(args):
    sx, sy, sz, spsi = args.start
    gx, gy, gz, gpsi = args.goal
    try:
        limits = VehicleLimits(args.airspeed, args.max_turn_rate)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not args.dt > 0:
        raise argparse.ArgumentTypeError("--dt must be positive")
    return Pose(sx, sy, spsi, sz), Pose(gx, gy, gpsi, gz), Wind(*args.wind), limits


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trochoids", description="Time-optimal BSB paths in uniform wind.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan one path")
    _add_problem_args(p)
    p.add_argument("--out", help="write sampled path (.csv, or .json for JSON)")
    p.add_argument("--json", action="store_true", help="print the plan summary as JSON")

    b = sub.add_parser("bench", help="Monte-Carlo comparison against the exhaustive baseline")
    b.add_argument("--config", help="key = value file with bench settings")
    b.add_argument("--n", type=int, dest="n_samples")
    b.add_argument("--seed", type=int)
    b.add_argument("--position-range", type=float)
    b.add_argument("--wind-range", type=_floats(2))
    b.add_argument("--radius-range", type=_floats(2))
    b.add_argument("--airspeed", type=float)
    b.add_argument("--dt", type=float)
    b.add_argument("--radius-sampling", choices=("curvature", "radius"))
    b.add_argument("--no-timing", action="store_true")
    b.add_argument("--report", help="write the JSON report here")

    v = sub.add_parser("validate-table", help="check the decision table against exhaustive Dubins")
    v.add_argument("--d", type=float, default=4.01, help="distance in turning radii (> 4)")
    v.add_argument("--grid-n", type=int, default=200)
    v.add_argument("--uncorrected", action="store_true", help="use the table before the a12/a21/a34/a43 fixes")
    v.add_argument("--probe", type=_floats(2), action="append", metavar="ALPHA,BETA")
    v.add_argument("--regions", action="store_true", help="include per-block word maps")
    v.add_argument("--out", help="write the JSON report here instead of stdout")

    o = sub.add_parser("oracle", help="compare reduced and exhaustive planners on one instance")
    _add_problem_args(o)
    return parser


_CONFIG_TYPES = {
    "n_samples": int, "seed": int, "position_range": float, "airspeed": float, "dt": float,
    "wind_range": _floats(2), "radius_range": _floats(2), "radius_sampling": str,
}


def _read_config(path) -> dict:
    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_string("[bench]\n" + fh.read())
    out = {}
    for key, raw in cp["bench"].items():
        key = key.replace("-", "_")
        if key == "n":
            key = "n_samples"
        if key not in _CONFIG_TYPES:
            raise argparse.ArgumentTypeError(f"unknown config key {key!r}")
        out[key] = _CONFIG_TYPES[key](raw.strip())
    return out


def _cmd_plan(args) -> int:
    start, goal, wind, limits = _problem(args)
    result = plan(start, goal, wind, limits, args.dt)
    if args.out:
        if args.out.endswith(".json"):
            result.best.to_json(args.out)
        else:
            result.best.to_csv(args.out)
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
    elif args.out:
        print(f"{result.word} T={result.total_time:.6f}s regime={result.regime.value} "
              f"candidates={','.join(w.value for w in result.candidates_evaluated)} -> {args.out}")
    else:
        sys.stdout.write(result.best.to_csv())
    return 0


def _cmd_bench(args) -> int:
    settings = _read_config(args.config) if args.config else {}
    for key in _CONFIG_TYPES:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    for key in ("wind_range", "radius_range"):
        if key in settings:
            settings[key] = tuple(settings[key])
    cfg = BenchConfig(**settings, timing=not args.no_timing)
    try:
        cfg.validate()
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    report = run_bench(cfg).to_dict()
    text = json.dumps(report, indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
        summary = {k: report[k] for k in ("n_samples", "pct_d_gt_4R", "mean_numeric_solves",
                                          "mismatches", "speed_ratio", "word_distribution")}
        print(json.dumps(summary, indent=2))
    else:
        print(text)
    return 0


def _cmd_validate(args) -> int:
    if not args.d > 4.0:
        raise argparse.ArgumentTypeError("--d must exceed 4 (turning radii)")
    if args.grid_n < 1:
        raise argparse.ArgumentTypeError("--grid-n must be positive")
    probes = [tuple(p) for p in args.probe] if args.probe else [(0.36, 3.111)]
    report = validate_table(args.d, args.grid_n, corrected=not args.uncorrected, probes=probes,
                            keep_regions=args.regions)
    text = json.dumps(report.to_dict(include_region=args.regions))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"total_violations={report.total_violations} -> {args.out}")
    else:
        print(text)
    return 0


def _cmd_oracle(args) -> int:
    start, goal, wind, limits = _problem(args)
    reduced = plan(start, goal, wind, limits, dt=None)
    base = baseline_plan(start, goal, wind, limits, dt=None)
    agree = abs(reduced.total_time - base.total_time) <= 1e-6 * base.total_time
    print(json.dumps({"reduced": reduced.to_dict(), "baseline": base.to_dict(), "agree": agree}, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"plan": _cmd_plan, "bench": _cmd_bench, "validate-table": _cmd_validate,
               "oracle": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except argparse.ArgumentTypeError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except TrochoidError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
