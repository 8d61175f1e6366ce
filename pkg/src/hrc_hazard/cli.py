"""Command-line interface: analyze, simulate, heatmap, calibrate, compare.

Exit codes: 0 success, 1 I/O failure, 2 input validation failure (message
names the first offending frame), 3 configuration problem.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import hazard, pipeline, simulator
from .errors import ConfigError, HazardError, InvalidCalibration
from .kinematics import bundled_robot_path, load_robot_model
from .scene import load_scenario, segments_from_config

ENV_CONFIG = "HRC_HAZARD_CONFIG"


def _load_setup(args):
    """Resolve (model, raw hazard config dict, HazardConfig) from flags."""
    robot_path = args.robot if args.robot is not None else bundled_robot_path()
    model = load_robot_model(robot_path)
    config_path = args.config if args.config is not None else os.environ.get(ENV_CONFIG)
    raw = hazard.load_hazard_config(config_path)
    return model, raw, hazard.resolve_hazard_config(raw, model)


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def cmd_analyze(args) -> int:
    model, raw, cfg = _load_setup(args)
    frames = load_scenario(args.input, segments=segments_from_config(raw))
    report = pipeline.analyze_scenario(frames, model, cfg)

    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    csv_path = out_dir / f"{stem}_frames.csv"
    json_path = out_dir / f"{stem}_summary.json"
    pipeline.write_frames_csv(report, csv_path)
    pipeline.write_summary_json(report, json_path)
    _say(args, json.dumps({"frames": str(csv_path), "summary": str(json_path), **report.summary}, sort_keys=True))
    return 0


def cmd_simulate(args) -> int:
    model, _, _ = _load_setup(args)
    spec = simulator.ScenarioSpec(
        kind=args.kind,
        variant=args.variant,
        duration=args.duration,
        rate=args.rate,
        seed=args.seed,
    )
    out = Path(args.out) if args.out else Path(f"{args.kind}_{args.variant}.jsonl")
    records = simulator.generate(spec, model)
    with open(out, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    _say(args, f"wrote {len(records)} frames to {out}")
    return 0


def cmd_heatmap(args) -> int:
    model, _, cfg = _load_setup(args)
    try:
        n_v, n_theta = (int(x) for x in args.grid.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--grid must look like '101x181', got '{args.grid}'") from None
    if n_v < 2 or n_theta < 2:
        raise ConfigError(f"--grid must be at least 2x2, got {args.grid}")

    out = Path(args.out) if args.out else Path("heatmap.csv")
    speeds = np.linspace(0.0, model.v_max, n_v)
    thetas_deg = np.linspace(0.0, 180.0, n_theta)
    d_vec = np.array([1.0, 0.0, 0.0])
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("v,theta_deg,r_V\n")
        for v in speeds:
            for theta_deg in thetas_deg:
                theta = math.radians(theta_deg)
                v_vec = np.array([v * math.cos(theta), v * math.sin(theta), 0.0])
                r_v = hazard.velocity_hazard(v_vec, d_vec, cfg, model)
                fh.write(f"{float(v)!r},{float(theta_deg)!r},{float(r_v)!r}\n")
    _say(args, f"wrote {n_v}x{n_theta} grid to {out}")
    return 0


def cmd_calibrate(args) -> int:
    model, _, cfg = _load_setup(args)
    epsilon = cfg.epsilon_reach if args.epsilon is None else float(args.epsilon)
    d_min = hazard.d_min_from_stop_time(model.v_max, model.t_stop)
    alpha = hazard.calibrate_alpha(d_min, model.d_reach, epsilon)
    k_v = 1.0 / (model.v_max - model.v_min) ** 2
    print(
        json.dumps(
            {
                "alpha": alpha,
                "d_min": d_min,
                "k_V": k_v,
                "epsilon_reach": epsilon,
                "v_min": model.v_min,
                "v_max": model.v_max,
                "t_stop": model.t_stop,
                "d_reach": model.d_reach,
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_compare(args) -> int:
    report_a = pipeline.load_report_csv(args.report_a)
    report_b = pipeline.load_report_csv(args.report_b)
    comparison = pipeline.compare_scenarios(report_a, report_b)
    out = Path(args.out) if args.out else Path("comparison.csv")
    pipeline.write_comparison_csv(comparison, out)
    if comparison["warning"]:
        print(f"warning: {comparison['warning']}", file=sys.stderr)
    _say(args, json.dumps({"deltas": str(out), **comparison["summary"]}, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--robot", help="robot model TOML (default: bundled UR10-class arm)")
    common.add_argument(
        "--config",
        help=f"hazard config TOML (default: ${ENV_CONFIG} if set, else built-in defaults)",
    )
    common.add_argument("--out", help="output path (directory for analyze, file otherwise)")
    common.add_argument("--quiet", action="store_true", help="suppress informational output")

    parser = argparse.ArgumentParser(
        prog="hrc-hazard",
        description="Per-frame hazard indicators for human-robot collaboration scenes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyze a JSON Lines scenario")
    p.add_argument("input", help="scenario file, one frame per line (meters/seconds)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", parents=[common], help="generate a synthetic scenario")
    p.add_argument("--kind", choices=simulator.KINDS, required=True)
    p.add_argument("--variant", choices=simulator.VARIANTS, required=True)
    p.add_argument("--duration", type=float, default=10.0, help="scenario length (s)")
    p.add_argument("--rate", type=float, default=30.0, help="frame rate (frames/s)")
    p.add_argument("--seed", type=int, default=0, help="noise seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "heatmap", parents=[common], help="velocity-hazard grid over speed and angle"
    )
    p.add_argument(
        "--grid",
        default="101x181",
        help="speed x angle resolution over [0, v_max] m/s x [0, 180] deg",
    )
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser(
        "calibrate", parents=[common], help="print resolved alpha, d_min, k_V as JSON"
    )
    p.add_argument("--epsilon", type=float, help="override the distance-decay target at reach")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", parents=[common], help="diff two per-frame report CSVs")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidCalibration) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HazardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
