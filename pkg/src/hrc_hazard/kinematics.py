"""Forward kinematics, Jacobian, and link capsules for a serial arm.

The robot is described by standard Denavit-Hartenberg parameters loaded
from a TOML file; nothing in here is specific to one manufacturer. Link
capsule ``i`` spans the origins of consecutive joint frames with the
configured radius, which is the usual swept-sphere approximation for
proximity monitoring.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from .errors import ConfigError, DimensionMismatch, ZeroTimeDelta
from .geometry import Capsule


@dataclass(frozen=True)
class RobotModel:
    """Kinematic chain plus the safety envelope parameters.

    ``dh`` rows are ``(a, alpha, d, theta_offset)`` per joint, lengths in
    meters and angles in radians. ``v_min``/``v_max`` bound the hazardous
    speed band, ``t_stop`` is the stopping time, and ``d_reach`` the
    maximum reach used as the distance-hazard cutoff.
    """

    name: str
    dh: tuple[tuple[float, float, float, float], ...]
    link_radii: tuple[float, ...]
    base_pose: np.ndarray
    v_min: float
    v_max: float
    t_stop: float
    d_reach: float

    @property
    def joint_count(self) -> int:
        return len(self.dh)


@dataclass(frozen=True)
class RobotPose:
    """World-frame joint transforms, link capsules, and tool position."""

    joint_frames: list[np.ndarray]
    link_capsules: list[Capsule]
    ee_position: np.ndarray


def _rpy_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    rz = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cp, 0.0, sp], [0.0, 1.0, 0.0], [-sp, 0.0, cp]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cr, -sr], [0.0, sr, cr]])
    return rz @ ry @ rx


def load_robot_model(path) -> RobotModel:
    """Read a robot description TOML file.

    Expected layout: ``[[joint]]`` tables with ``a``, ``alpha_deg``, ``d``,
    ``theta_offset_deg``; ``[safety]`` with ``v_min``, ``v_max``,
    ``t_stop``, ``d_reach``; ``[geometry]`` with ``link_radii``; optional
    ``[base]`` with ``xyz`` and ``rpy_deg``.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"robot config not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"robot config {path} is not valid TOML: {exc}") from exc

    joints = raw.get("joint", [])
    if not joints:
        raise ConfigError(f"robot config {path} defines no [[joint]] tables")
    dh = []
    for i, joint in enumerate(joints):
        try:
            dh.append(
                (
                    float(joint.get("a", 0.0)),
                    math.radians(float(joint.get("alpha_deg", 0.0))),
                    float(joint.get("d", 0.0)),
                    math.radians(float(joint.get("theta_offset_deg", 0.0))),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"joint {i} in {path} has a non-numeric field") from exc

    try:
        safety = raw["safety"]
        v_min = float(safety["v_min"])
        v_max = float(safety["v_max"])
        t_stop = float(safety["t_stop"])
        d_reach = float(safety["d_reach"])
    except KeyError as exc:
        raise ConfigError(f"robot config {path} is missing [safety] key {exc}") from exc

    if not v_min < v_max:
        raise ConfigError(f"require v_min < v_max, got {v_min} >= {v_max}")
    if t_stop <= 0.0 or d_reach <= 0.0:
        raise ConfigError("t_stop and d_reach must be positive")

    radii = raw.get("geometry", {}).get("link_radii")
    if radii is None or len(radii) != len(dh):
        raise ConfigError(
            f"[geometry].link_radii must list one radius per joint ({len(dh)})"
        )

    base = raw.get("base", {})
    xyz = base.get("xyz", [0.0, 0.0, 0.0])
    rpy = [math.radians(float(v)) for v in base.get("rpy_deg", [0.0, 0.0, 0.0])]
    base_pose = np.eye(4)
    base_pose[:3, :3] = _rpy_matrix(*rpy)
    base_pose[:3, 3] = np.asarray(xyz, dtype=float)

    return RobotModel(
        name=str(raw.get("name", path.stem)),
        dh=tuple(dh),
        link_radii=tuple(float(r) for r in radii),
        base_pose=base_pose,
        v_min=v_min,
        v_max=v_max,
        t_stop=t_stop,
        d_reach=d_reach,
    )


def bundled_robot_path() -> Path:
    """Path to the robot description shipped with the package."""
    return Path(str(files("hrc_hazard") / "data" / "ur10.toml"))


def dh_transform(a: float, alpha: float, d: float, theta: float) -> np.ndarray:
    """Homogeneous transform for one standard-DH joint."""
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def forward_kinematics(model: RobotModel, q) -> RobotPose:
    """Compose the DH chain; returns all joint frames and link capsules."""
    q = np.asarray(q, dtype=float)
    if q.shape != (model.joint_count,):
        raise DimensionMismatch(
            f"q has shape {q.shape}, expected ({model.joint_count},)"
        )
    frames = [model.base_pose.copy()]
    T = model.base_pose
    for (a, alpha, d, theta_offset), qi in zip(model.dh, q):
        T = T @ dh_transform(a, alpha, d, qi + theta_offset)
        frames.append(T.copy())
    capsules = [
        Capsule(a=frames[i][:3, 3], b=frames[i + 1][:3, 3], r=model.link_radii[i])
        for i in range(model.joint_count)
    ]
    return RobotPose(
        joint_frames=frames, link_capsules=capsules, ee_position=frames[-1][:3, 3]
    )


def jacobian(model: RobotModel, q) -> np.ndarray:
    """Linear-velocity Jacobian (3 x n) of the tool point.

    Column ``i`` is ``z_i x (p_ee - p_i)`` for revolute joint ``i``, with
    ``z_i`` the joint axis and ``p_i`` its frame origin, both in world
    coordinates.
    """
    pose = forward_kinematics(model, q)
    p_ee = pose.ee_position
    cols = []
    for i in range(model.joint_count):
        frame = pose.joint_frames[i]
        z_i = frame[:3, 2]
        p_i = frame[:3, 3]
        cols.append(np.cross(z_i, p_ee - p_i))
    return np.column_stack(cols)


def cartesian_velocity(model: RobotModel, frame, prev=None):
    """End-effector linear velocity (m/s) for one scene frame.

    Preference order: ``J(q) @ qd`` when joint velocities are present;
    otherwise backward differencing of FK positions against ``prev``;
    otherwise a zero vector. The second return value names the method
    actually used (``"jacobian"``, ``"finite-difference"``, or ``"zero"``)
    so callers can flag estimated velocities.
    """
    if frame.robot.qd is not None:
        return jacobian(model, frame.robot.q) @ frame.robot.qd, "jacobian"
    if prev is not None:
        dt = frame.t - prev.t
        if dt == 0.0:
            raise ZeroTimeDelta(f"cannot difference velocities across dt=0 at t={frame.t}")
        p_now = forward_kinematics(model, frame.robot.q).ee_position
        p_prev = forward_kinematics(model, prev.robot.q).ee_position
        return (p_now - p_prev) / dt, "finite-difference"
    return np.zeros(3), "zero"
