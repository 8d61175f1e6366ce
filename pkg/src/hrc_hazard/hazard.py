"""The three heuristic hazard indicators and their weighted aggregate.

Each indicator maps one measured scene parameter onto [0, 1], where 1 is
maximum danger:

* distance: exponential decay of separation between human and robot,
  pinned to 1 at the minimum protective distance and cut to 0 at reach;
* velocity: a quadratic speed term blended with a directional term that
  asks whether the tool moves toward the human's closest point;
* head orientation: sigmoid growth of the gaze deviation from the
  direction toward the tool, saturating at a quarter turn.

The aggregate is a normalized weighted sum, optionally gated to zero when
the scene is outside the hazardous envelope (robot slower than the
threshold speed, or human beyond reach).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from .errors import ConfigError, InvalidCalibration
from .scene import HeadPose

#: Horizontal projections shorter than this make the gaze deviation
#: undefined (looking straight up/down, or head on top of the tool).
_PROJECTION_EPS = 1e-9

GATE_MODES = ("strict", "ungated")
D_MIN_POLICIES = ("static", "per-frame")


@dataclass(frozen=True)
class HazardConfig:
    """Resolved tunables for the indicator set.

    ``alpha`` and ``d_min`` are derived values: ``d_min`` from the robot's
    stopping behavior and ``alpha`` from the constraint that the distance
    indicator decays to ``epsilon_reach`` at ``d_reach``.
    """

    epsilon_reach: float = 0.01
    beta: float = 0.75
    c: float = math.radians(40.0)
    omega: tuple[float, float, float] = (1.0, 1.0, 2.0)
    d_min_policy: str = "static"
    gate_mode: str = "strict"
    v_smooth_window: int = 0
    d_min: float = 0.0
    alpha: float = float("inf")


def load_hazard_config(path=None) -> dict:
    """Read the raw ``[hazard]`` (and optional ``[skeleton]``) config file."""
    if path is None:
        return {}
    try:
        with open(Path(path), "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"hazard config not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"hazard config {path} is not valid TOML: {exc}") from exc


def resolve_hazard_config(raw: dict, model) -> HazardConfig:
    """Merge a raw config dict with defaults and derive d_min and alpha."""
    section = raw.get("hazard", {})
    known = {
        "epsilon_reach", "beta", "c_deg", "omega", "d_min_policy",
        "gate_mode", "v_smooth_window",
    }
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown [hazard] keys: {sorted(unknown)}")

    epsilon = float(section.get("epsilon_reach", 0.01))
    beta = float(section.get("beta", 0.75))
    c_deg = float(section.get("c_deg", 40.0))
    omega = tuple(float(w) for w in section.get("omega", (1.0, 1.0, 2.0)))
    policy = str(section.get("d_min_policy", "static"))
    gate_mode = str(section.get("gate_mode", "strict"))
    window = int(section.get("v_smooth_window", 0))

    if not 0.0 < epsilon < 1.0:
        raise ConfigError(f"epsilon_reach must be in (0, 1), got {epsilon}")
    if not 0.0 <= beta <= 1.0:
        raise ConfigError(f"beta must be in [0, 1], got {beta}")
    if c_deg <= 0.0:
        raise ConfigError(f"c_deg must be positive, got {c_deg}")
    if len(omega) != 3 or any(w < 0.0 for w in omega) or sum(omega) == 0.0:
        raise ConfigError(f"omega must be 3 nonnegative weights, not all zero: {omega}")
    if policy not in D_MIN_POLICIES:
        raise ConfigError(f"d_min_policy must be one of {D_MIN_POLICIES}, got '{policy}'")
    if gate_mode not in GATE_MODES:
        raise ConfigError(f"gate_mode must be one of {GATE_MODES}, got '{gate_mode}'")
    if window < 0:
        raise ConfigError(f"v_smooth_window must be >= 0, got {window}")

    d_min = d_min_from_stop_time(model.v_max, model.t_stop)
    if d_min >= model.d_reach:
        raise ConfigError(
            f"derived d_min {d_min} m reaches past d_reach {model.d_reach} m; "
            "check t_stop/v_max"
        )
    alpha = calibrate_alpha(d_min, model.d_reach, epsilon)
    return HazardConfig(
        epsilon_reach=epsilon,
        beta=beta,
        c=math.radians(c_deg),
        omega=omega,  # type: ignore[arg-type]
        d_min_policy=policy,
        gate_mode=gate_mode,
        v_smooth_window=window,
        d_min=d_min,
        alpha=alpha,
    )


def calibrate_alpha(d_min: float, d_reach: float, epsilon_reach: float) -> float:
    """Steepness that makes the distance indicator hit ``epsilon_reach`` at reach.

    Solves ``exp(-alpha * (d_reach - d_min)) = epsilon_reach`` for alpha.
    """
    if d_min >= d_reach:
        raise InvalidCalibration(f"need d_min < d_reach, got {d_min} >= {d_reach}")
    if not 0.0 < epsilon_reach < 1.0:
        raise InvalidCalibration(f"epsilon_reach must be in (0, 1), got {epsilon_reach}")
    return math.log(1.0 / epsilon_reach) / (d_reach - d_min)


def d_min_from_stop_time(v: float, t_stop: float) -> float:
    """Minimum protective distance: the ground covered while stopping."""
    return v * t_stop


def frame_distance_config(cfg: HazardConfig, model, v_mag: float) -> HazardConfig:
    """Per-frame d_min/alpha under the ``per-frame`` policy.

    The static policy returns ``cfg`` unchanged. Per-frame, d_min follows
    the current speed and is clamped at d_reach (at which point the decay
    interval is empty and alpha is irrelevant).
    """
    if cfg.d_min_policy != "per-frame":
        return cfg
    d_min = min(d_min_from_stop_time(v_mag, model.t_stop), model.d_reach)
    if d_min < model.d_reach:
        alpha = calibrate_alpha(d_min, model.d_reach, cfg.epsilon_reach)
    else:
        alpha = float("inf")
    return replace(cfg, d_min=d_min, alpha=alpha)


def distance_hazard(d_h: float, cfg: HazardConfig, model) -> float:
    """Distance indicator: 1 inside d_min, exponential decay out to reach."""
    if d_h <= cfg.d_min:
        return 1.0
    if d_h >= model.d_reach:
        return 0.0
    return math.exp(-cfg.alpha * (d_h - cfg.d_min))


def velocity_magnitude_hazard(v: float, model) -> float:
    """Quadratic speed term: 0 below v_min, saturating to 1 at v_max.

    Evaluated as the squared normalized overshoot ``((v - v_min) /
    (v_max - v_min))**2`` so the endpoints are exact in floating point.
    """
    if v < model.v_min:
        return 0.0
    if v > model.v_max:
        return 1.0
    ratio = (v - model.v_min) / (model.v_max - model.v_min)
    return ratio * ratio


def cos_theta(v_vec, d_vec) -> float:
    """Cosine of the angle between the tool velocity and the worst-case
    direction; 0 (neutral) when either is undefined."""
    if d_vec is None:
        return 0.0
    v_vec = np.asarray(v_vec, dtype=float)
    v_norm = float(np.linalg.norm(v_vec))
    d_norm = float(np.linalg.norm(d_vec))
    if v_norm == 0.0 or d_norm == 0.0:
        return 0.0
    value = float(np.dot(v_vec, d_vec)) / (v_norm * d_norm)
    return min(1.0, max(-1.0, value))


def directional_hazard(v_vec, d_vec) -> float:
    """Directional term ``(1 + cos(theta)) / 2`` in [0, 1].

    1 means the tool moves straight at the human's closest point, 0
    straight away; undefined direction or zero velocity maps to the
    neutral 0.5.
    """
    return 0.5 * (1.0 + cos_theta(v_vec, d_vec))


def velocity_hazard(v_vec, d_vec, cfg: HazardConfig, model) -> float:
    """Velocity indicator: blend of speed and direction, zero below v_min.

    The hard zero below v_min is deliberate and discontinuous; above it the
    blend is ``beta * magnitude + (1 - beta) * direction``.
    """
    v = float(np.linalg.norm(np.asarray(v_vec, dtype=float)))
    if v < model.v_min:
        return 0.0
    return cfg.beta * velocity_magnitude_hazard(v, model) + (
        1.0 - cfg.beta
    ) * directional_hazard(v_vec, d_vec)


def phh_angle(head: HeadPose, ee_position) -> tuple[float, bool]:
    """Yaw deviation (rad, in [0, pi]) of the gaze from the head-to-tool line.

    Both the gaze and the head-to-tool vector are projected onto the
    horizontal plane first (yaw only). Returns ``(angle, degenerate)``;
    degenerate is True when either projection is too short to define a yaw,
    in which case the angle is reported as 0.
    """
    to_tool = np.asarray(ee_position, dtype=float) - head.position
    g = np.array([head.gaze[0], head.gaze[1]])
    p = np.array([to_tool[0], to_tool[1]])
    g_norm = float(np.linalg.norm(g))
    p_norm = float(np.linalg.norm(p))
    if g_norm < _PROJECTION_EPS or p_norm < _PROJECTION_EPS:
        return 0.0, True
    c = float(np.dot(g, p)) / (g_norm * p_norm)
    return math.acos(min(1.0, max(-1.0, c))), False


def phh_hazard(phh: float, cfg: HazardConfig) -> float:
    """Head-orientation indicator: sigmoid growth, hard 1 from 90 degrees on.

    Below the saturation angle the value is ``1 - exp(-(phh/c)^2)``; the
    clamp keeps the indicator at exactly 1 for any deviation of a quarter
    turn or more.
    """
    if phh >= 0.5 * math.pi:
        return 1.0
    ratio = phh / cfg.c
    return 1.0 - math.exp(-(ratio * ratio))


def total_hazard(
    r_d: float,
    r_v: float,
    r_phh: float,
    d_h: float,
    v_mag: float,
    cfg: HazardConfig,
    model,
) -> tuple[float, bool]:
    """Weighted aggregate of the three indicators, optionally gated.

    Returns ``(value, gated)``. Under ``gate_mode="strict"`` the value is
    forced to 0 unless the robot is at hazardous speed (v >= v_min) AND
    the human is within reach (d_H <= d_reach); ``gated`` reports whether
    the gate fired. ``gate_mode="ungated"`` never forces zero.
    """
    w1, w2, w3 = cfg.omega
    value = (w1 * r_d + w2 * r_v + w3 * r_phh) / (w1 + w2 + w3)
    if cfg.gate_mode == "strict" and not (v_mag >= model.v_min and d_h <= model.d_reach):
        return 0.0, True
    return value, False
