"""Scene data model: time-stamped frames of human skeleton, head pose, and
robot joint state, plus JSON Lines ingestion and validation.

Angles inside the data model are radians and positions are meters; file I/O
uses degrees only for fields suffixed ``_deg``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    HazardError,
    NonFiniteValue,
    NonMonotoneTimestamp,
    NonUnitGaze,
)

LIMB_RADIUS = 0.05
TRUNK_RADIUS = 0.10

#: Default humanoid: 14 capsules over 19 named joints (head, torso, both
#: arms with hands, both legs with feet). Trackers with different joint
#: names can override this via the ``[skeleton]`` config section.
DEFAULT_SEGMENTS: tuple[tuple[str, str, float], ...] = (
    ("neck", "head_top", TRUNK_RADIUS),
    ("pelvis", "neck", TRUNK_RADIUS),
    ("l_shoulder", "l_elbow", LIMB_RADIUS),
    ("l_elbow", "l_wrist", LIMB_RADIUS),
    ("l_wrist", "l_hand", LIMB_RADIUS),
    ("r_shoulder", "r_elbow", LIMB_RADIUS),
    ("r_elbow", "r_wrist", LIMB_RADIUS),
    ("r_wrist", "r_hand", LIMB_RADIUS),
    ("l_hip", "l_knee", LIMB_RADIUS),
    ("l_knee", "l_ankle", LIMB_RADIUS),
    ("l_ankle", "l_foot", LIMB_RADIUS),
    ("r_hip", "r_knee", LIMB_RADIUS),
    ("r_knee", "r_ankle", LIMB_RADIUS),
    ("r_ankle", "r_foot", LIMB_RADIUS),
)


@dataclass(frozen=True)
class HumanSkeleton:
    """Joint positions (m, world frame) plus the capsule segment list."""

    joints: dict[str, np.ndarray]
    segments: tuple[tuple[str, str, float], ...] = DEFAULT_SEGMENTS


@dataclass(frozen=True)
class HeadPose:
    """Head reference point (m) and unit gaze direction (world frame)."""

    position: np.ndarray
    gaze: np.ndarray


@dataclass(frozen=True)
class RobotJointState:
    """Joint angles q (rad) and optional joint velocities qd (rad/s)."""

    q: np.ndarray
    qd: np.ndarray | None = None


@dataclass(frozen=True)
class SceneFrame:
    t: float
    human: HumanSkeleton
    head: HeadPose
    robot: RobotJointState


def _as_vec3(value, what: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise DimensionMismatch(f"{what} must have 3 components, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteValue(f"{what} contains a non-finite component: {arr.tolist()}")
    return arr


def gaze_from_yaw(yaw_deg: float) -> np.ndarray:
    """Unit gaze vector for a world-frame yaw angle; pitch and roll zeroed."""
    yaw = math.radians(yaw_deg)
    return np.array([math.cos(yaw), math.sin(yaw), 0.0])


def segments_from_config(raw: dict) -> tuple[tuple[str, str, float], ...]:
    """Read a ``[skeleton]`` table with ``[[skeleton.segment]]`` entries.

    Returns :data:`DEFAULT_SEGMENTS` when the table is absent.
    """
    from .errors import ConfigError

    table = raw.get("skeleton")
    if table is None:
        return DEFAULT_SEGMENTS
    entries = table.get("segment", [])
    if not entries:
        raise ConfigError("[skeleton] present but lists no [[skeleton.segment]] entries")
    segments = []
    for i, entry in enumerate(entries):
        try:
            a, b = str(entry["a"]), str(entry["b"])
            radius = float(entry.get("radius", LIMB_RADIUS))
        except KeyError as exc:
            raise ConfigError(f"skeleton segment {i} is missing key {exc}") from exc
        if radius <= 0.0:
            raise ConfigError(f"skeleton segment {i} has non-positive radius {radius}")
        segments.append((a, b, radius))
    return tuple(segments)


def frame_from_dict(obj: dict, segments=DEFAULT_SEGMENTS) -> SceneFrame:
    """Build a SceneFrame from one decoded JSON Lines record."""
    try:
        t = float(obj["t"])
        joints_raw = obj["human"]["joints"]
        head_raw = obj["head"]
        robot_raw = obj["robot"]
    except (KeyError, TypeError) as exc:
        raise HazardError(f"frame record is missing field {exc}") from exc

    joints = {name: _as_vec3(pos, f"joint '{name}'") for name, pos in joints_raw.items()}

    position = _as_vec3(head_raw["position"], "head position")
    if "yaw_deg" in head_raw:
        gaze = gaze_from_yaw(float(head_raw["yaw_deg"]))
    else:
        gaze = _as_vec3(head_raw["gaze"], "gaze")

    q = np.asarray(robot_raw["q"], dtype=float)
    qd_raw = robot_raw.get("qd")
    qd = None if qd_raw is None else np.asarray(qd_raw, dtype=float)

    return SceneFrame(
        t=t,
        human=HumanSkeleton(joints=joints, segments=tuple(segments)),
        head=HeadPose(position=position, gaze=gaze),
        robot=RobotJointState(q=q, qd=qd),
    )


def validate_frame(frame: SceneFrame, model, prev_t: float | None = None) -> SceneFrame:
    """Check all frame invariants against a robot model; return the frame.

    Validation is idempotent: it never mutates the frame. ``prev_t`` is the
    timestamp of the previously accepted frame in the stream, used to enforce
    strict ordering.
    """
    if not math.isfinite(frame.t) or frame.t < 0.0:
        raise NonFiniteValue(f"timestamp must be finite and non-negative, got {frame.t}")
    if prev_t is not None and frame.t <= prev_t:
        raise NonMonotoneTimestamp(
            f"timestamp {frame.t} does not increase over previous {prev_t}"
        )

    for name, pos in frame.human.joints.items():
        if pos.shape != (3,):
            raise DimensionMismatch(f"joint '{name}' must have 3 components")
        if not np.isfinite(pos).all():
            raise NonFiniteValue(f"joint '{name}' contains a non-finite component")
    for a, b, radius in frame.human.segments:
        for endpoint in (a, b):
            if endpoint not in frame.human.joints:
                raise DimensionMismatch(
                    f"skeleton segment endpoint '{endpoint}' missing from frame joints"
                )
        if radius <= 0.0:
            raise HazardError(f"segment ({a}, {b}) has non-positive radius {radius}")

    if not np.isfinite(frame.head.position).all() or not np.isfinite(frame.head.gaze).all():
        raise NonFiniteValue("head pose contains a non-finite component")
    norm = float(np.linalg.norm(frame.head.gaze))
    if abs(norm - 1.0) > 1e-9:
        raise NonUnitGaze(f"gaze norm is {norm}, expected 1.0 within 1e-9")

    n = model.joint_count
    if frame.robot.q.shape != (n,):
        raise DimensionMismatch(
            f"robot q has {frame.robot.q.shape[0] if frame.robot.q.ndim == 1 else '?'} "
            f"joints, expected {n}"
        )
    if not np.isfinite(frame.robot.q).all():
        raise NonFiniteValue("robot q contains a non-finite component")
    if frame.robot.qd is not None:
        if frame.robot.qd.shape != (n,):
            raise DimensionMismatch(
                f"robot qd has {frame.robot.qd.shape[0] if frame.robot.qd.ndim == 1 else '?'} "
                f"joints, expected {n}"
            )
        if not np.isfinite(frame.robot.qd).all():
            raise NonFiniteValue("robot qd contains a non-finite component")
    return frame


def load_scenario(path, segments=DEFAULT_SEGMENTS) -> list[SceneFrame]:
    """Read and parse a JSON Lines scenario file (no model validation)."""
    frames = []
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise HazardError(f"frame {i}: invalid JSON ({exc})") from exc
            try:
                frames.append(frame_from_dict(obj, segments))
            except HazardError as exc:
                raise type(exc)(f"frame {i}: {exc}") from exc
    return frames


def validate_stream(
    frames: Iterable[SceneFrame], model
) -> list[SceneFrame]:
    """Validate an ordered frame sequence, reporting the offending index."""
    out: list[SceneFrame] = []
    prev_t = None
    for i, frame in enumerate(frames):
        try:
            validate_frame(frame, model, prev_t=prev_t)
        except HazardError as exc:
            raise type(exc)(f"frame {i}: {exc}") from exc
        prev_t = frame.t
        out.append(frame)
    return out
