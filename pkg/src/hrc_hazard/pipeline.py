"""Per-frame scenario analysis: geometry -> kinematics -> indicators -> report.

The pipeline walks a validated frame stream sequentially (the
finite-difference velocity fallback couples each frame to its
predecessor), producing one :class:`FrameHazard` per frame plus summary
statistics, and persists results as CSV and JSON.
"""
from __future__ import annotations

import bisect
import csv
import json
import math
import statistics
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import geometry, hazard, kinematics
from .errors import EmptyScenario, HazardError
from .scene import SceneFrame, validate_stream

CSV_HEADER = "t,d_H,v_mag,cos_theta,phh_deg,r_D,r_V,r_PHH,R_total,closest_link,closest_segment,flags"

SUMMARY_INDICATORS = ("r_D", "r_V", "r_PHH", "R_total")


@dataclass(frozen=True)
class FrameHazard:
    """All per-frame outputs, including provenance of the closest pair."""

    t: float
    d_h: float
    v_mag: float
    cos_theta: float
    phh: float
    r_d: float
    r_v: float
    r_phh: float
    r_total: float
    closest_pair: tuple[int, int]
    flags: frozenset[str]

    def indicator(self, name: str) -> float:
        return {
            "r_D": self.r_d,
            "r_V": self.r_v,
            "r_PHH": self.r_phh,
            "R_total": self.r_total,
        }[name]


@dataclass(frozen=True)
class ScenarioReport:
    frames: list[FrameHazard]
    summary: dict
    config_echo: dict


def evaluate_frame(
    frame: SceneFrame,
    model: kinematics.RobotModel,
    cfg: hazard.HazardConfig,
    prev: SceneFrame | None = None,
    v_eff: float | None = None,
    velocity: tuple[np.ndarray, str] | None = None,
) -> FrameHazard:
    """Run the full indicator stack on one frame.

    ``prev`` feeds the finite-difference velocity fallback. ``v_eff``
    overrides the speed used by the velocity/gate logic (the pipeline's
    optional smoothing); the velocity *direction* always comes from the
    frame itself. ``velocity`` lets a caller that already computed
    ``cartesian_velocity`` pass it through instead of recomputing.
    """
    pose = kinematics.forward_kinematics(model, frame.robot.q)
    prox = geometry.min_human_robot_distance(frame.human, pose.link_capsules)
    if velocity is None:
        velocity = kinematics.cartesian_velocity(model, frame, prev)
    v_vec, v_mode = velocity
    v_raw = float(np.linalg.norm(v_vec))
    v_mag = v_raw if v_eff is None else v_eff

    d_vec = geometry.worst_case_direction(prox)
    ct = hazard.cos_theta(v_vec, d_vec)

    fcfg = hazard.frame_distance_config(cfg, model, v_mag)
    r_d = hazard.distance_hazard(prox.distance, fcfg, model)

    if v_mag < model.v_min:
        r_v = 0.0
    else:
        r_v = cfg.beta * hazard.velocity_magnitude_hazard(v_mag, model) + (
            1.0 - cfg.beta
        ) * hazard.directional_hazard(v_vec, d_vec)

    phh, phh_degenerate = hazard.phh_angle(frame.head, pose.ee_position)
    r_phh = hazard.phh_hazard(phh, cfg)

    r_total, gated = hazard.total_hazard(r_d, r_v, r_phh, prox.distance, v_mag, cfg, model)

    flags = set()
    if v_mode != "jacobian":
        flags.add("estimated-velocity")
    if d_vec is None:
        flags.add("contact-singularity")
    if gated:
        flags.add("gated-zero")
    if phh_degenerate:
        flags.add("degenerate-phh")

    return FrameHazard(
        t=frame.t,
        d_h=prox.distance,
        v_mag=v_mag,
        cos_theta=ct,
        phh=phh,
        r_d=r_d,
        r_v=r_v,
        r_phh=r_phh,
        r_total=r_total,
        closest_pair=prox.pair,
        flags=frozenset(flags),
    )


def _time_above(frames: list[FrameHazard], name: str, threshold: float) -> float:
    """Seconds spent strictly above a threshold; the last frame counts 0."""
    total = 0.0
    for i in range(len(frames) - 1):
        if frames[i].indicator(name) > threshold:
            total += frames[i + 1].t - frames[i].t
    return total


def summarize(frames: list[FrameHazard]) -> dict:
    out = {}
    for name in SUMMARY_INDICATORS:
        values = [f.indicator(name) for f in frames]
        out[name] = {
            "max": max(values),
            "mean": sum(values) / len(values),
            "time_above_0_5": _time_above(frames, name, 0.5),
            "time_above_0_8": _time_above(frames, name, 0.8),
        }
    return out


def _config_echo(model: kinematics.RobotModel, cfg: hazard.HazardConfig, velocity_mode: str) -> dict:
    return {
        "robot": {
            "name": model.name,
            "joint_count": model.joint_count,
            "v_min": model.v_min,
            "v_max": model.v_max,
            "t_stop": model.t_stop,
            "d_reach": model.d_reach,
        },
        "hazard": {
            "epsilon_reach": cfg.epsilon_reach,
            "beta": cfg.beta,
            "c_deg": math.degrees(cfg.c),
            "omega": list(cfg.omega),
            "d_min_policy": cfg.d_min_policy,
            "gate_mode": cfg.gate_mode,
            "v_smooth_window": cfg.v_smooth_window,
            "d_min": cfg.d_min,
            "alpha": cfg.alpha,
        },
        "velocity_mode": velocity_mode,
    }


def analyze_scenario(frames, model: kinematics.RobotModel, cfg: hazard.HazardConfig) -> ScenarioReport:
    """Analyze an ordered frame stream into a ScenarioReport.

    Deterministic: identical inputs and config produce identical reports.
    """
    frames = validate_stream(list(frames), model)
    if not frames:
        raise EmptyScenario("scenario contains no frames")

    results: list[FrameHazard] = []
    modes_seen: set[str] = set()
    window: deque[float] = deque(maxlen=cfg.v_smooth_window or 1)
    prev = None
    for frame in frames:
        v_vec, v_mode = kinematics.cartesian_velocity(model, frame, prev)
        modes_seen.add(v_mode)
        v_eff = None
        if cfg.v_smooth_window > 1:
            window.append(float(np.linalg.norm(v_vec)))
            v_eff = sum(window) / len(window)
        results.append(
            evaluate_frame(
                frame, model, cfg, prev=prev, v_eff=v_eff, velocity=(v_vec, v_mode)
            )
        )
        prev = frame

    if modes_seen <= {"jacobian"}:
        velocity_mode = "jacobian"
    elif "jacobian" not in modes_seen:
        velocity_mode = "finite-difference"
    else:
        velocity_mode = "mixed"

    return ScenarioReport(
        frames=results,
        summary=summarize(results),
        config_echo=_config_echo(model, cfg, velocity_mode),
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def write_frames_csv(report: ScenarioReport, path) -> None:
    """Write the per-frame table. Formatting is shortest-roundtrip floats,
    so identical runs produce byte-identical files."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for f in report.frames:
            row = [
                _fmt(f.t),
                _fmt(f.d_h),
                _fmt(f.v_mag),
                _fmt(f.cos_theta),
                _fmt(math.degrees(f.phh)),
                _fmt(f.r_d),
                _fmt(f.r_v),
                _fmt(f.r_phh),
                _fmt(f.r_total),
                str(f.closest_pair[0]),
                str(f.closest_pair[1]),
                "|".join(sorted(f.flags)),
            ]
            fh.write(",".join(row) + "\n")


def write_summary_json(report: ScenarioReport, path) -> None:
    payload = {
        "frame_count": len(report.frames),
        "summary": report.summary,
        "config_echo": report.config_echo,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report_csv(path) -> ScenarioReport:
    """Rebuild a report from a per-frame CSV written by write_frames_csv."""
    frames = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise HazardError(f"{path} does not look like a per-frame report CSV")
        for row in reader:
            frames.append(
                FrameHazard(
                    t=float(row["t"]),
                    d_h=float(row["d_H"]),
                    v_mag=float(row["v_mag"]),
                    cos_theta=float(row["cos_theta"]),
                    phh=math.radians(float(row["phh_deg"])),
                    r_d=float(row["r_D"]),
                    r_v=float(row["r_V"]),
                    r_phh=float(row["r_PHH"]),
                    r_total=float(row["R_total"]),
                    closest_pair=(int(row["closest_link"]), int(row["closest_segment"])),
                    flags=frozenset(x for x in row["flags"].split("|") if x),
                )
            )
    if not frames:
        raise EmptyScenario(f"{path} contains no frames")
    return ScenarioReport(frames=frames, summary=summarize(frames), config_echo={})


def compare_scenarios(report_a: ScenarioReport, report_b: ScenarioReport) -> dict:
    """Nearest-timestamp join of two reports with per-indicator deltas.

    Returns a dict with ``rows`` (t, per-indicator A-minus-B deltas),
    ``summary`` (aligned count, mean deltas, fraction of aligned frames
    where A's total strictly exceeds B's), and a ``warning`` when the time
    ranges do not overlap.
    """
    if not report_a.frames or not report_b.frames:
        raise EmptyScenario("cannot compare empty reports")

    def median_dt(frames):
        if len(frames) < 2:
            return None
        return statistics.median(
            frames[i + 1].t - frames[i].t for i in range(len(frames) - 1)
        )

    tolerances = [x for x in (median_dt(report_a.frames), median_dt(report_b.frames)) if x is not None]
    tol = max(tolerances) if tolerances else float("inf")

    ts_b = [f.t for f in report_b.frames]
    rows = []
    dominant = 0
    for fa in report_a.frames:
        i = bisect.bisect_left(ts_b, fa.t)
        candidates = [j for j in (i - 1, i) if 0 <= j < len(ts_b)]
        j = min(candidates, key=lambda k: abs(ts_b[k] - fa.t))
        if abs(ts_b[j] - fa.t) > tol:
            continue
        fb = report_b.frames[j]
        rows.append(
            {
                "t": fa.t,
                "delta_r_D": fa.r_d - fb.r_d,
                "delta_r_V": fa.r_v - fb.r_v,
                "delta_r_PHH": fa.r_phh - fb.r_phh,
                "delta_R_total": fa.r_total - fb.r_total,
            }
        )
        if fa.r_total > fb.r_total:
            dominant += 1

    summary = {
        "aligned_frames": len(rows),
        "alignment_tolerance": tol,
        "dominance_fraction": (dominant / len(rows)) if rows else 0.0,
    }
    for key in ("delta_r_D", "delta_r_V", "delta_r_PHH", "delta_R_total"):
        summary[f"mean_{key}"] = (
            sum(r[key] for r in rows) / len(rows) if rows else 0.0
        )
    warning = None
    if not rows:
        warning = "no frames aligned: the reports cover disjoint time ranges"
    return {"rows": rows, "summary": summary, "warning": warning}


def write_comparison_csv(comparison: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,delta_r_D,delta_r_V,delta_r_PHH,delta_R_total\n")
        for row in comparison["rows"]:
            fh.write(
                ",".join(
                    _fmt(row[k])
                    for k in ("t", "delta_r_D", "delta_r_V", "delta_r_PHH", "delta_R_total")
                )
                + "\n"
            )
