"""Synthetic scenario generator for tests and demos.

Three scenario kinds (handover, collaboration, coexistence), each in a
dangerous and a non-dangerous variant. The robot runs the same shuttle
trajectory in both variants of a kind — byte-identical joint states — so
any difference in the resulting hazard series is attributable to the
human. Variants differ in how close the human starts and stays, how the
approach is timed, and where the gaze points.

Trajectories are parametric profiles with seeded noise, not physics. The
robot shuttles its tool between a near and a far point along the world
x-axis using a joint pattern that keeps the wrist aligned with x, so the
tool leads every other link toward the human; the human's reaching hand
tracks the tool at a controlled gap. That construction keeps the closest
pair (tool link, reaching hand) stable by a wide margin, which the test
suite relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .kinematics import RobotModel, forward_kinematics

KINDS = ("handover", "collaboration", "coexistence")
VARIANTS = ("dangerous", "non-dangerous")

#: Bend parameter endpoints of the shuttle (dimensionless joint pattern
#: scale) and the corresponding tool x-range actually used.
_BEND_LO, _BEND_HI = 0.05, 1.18
_X_NEAR, _X_FAR = 0.72, 1.25
#: Exponent shaping each shuttle leg's speed bump: lower = flatter top,
#: shorter near-zero dwell at the turnarounds.
_LEG_GAMMA = 0.4
_LEG_PERIOD = 0.91  # target seconds per leg; rounded to fit the duration
_QD_STEP = 1e-5

#: Offsets (m) of every skeleton joint from the reaching hand tip; +x
#: points away from the robot. The reaching chain (hand, wrist, elbow,
#: shoulder) must keep increasing x so the hand stays the closest segment.
_JOINT_OFFSETS = {
    "r_hand": (0.0, 0.0, 0.0),
    "r_wrist": (0.08, 0.0, 0.0),
    "r_elbow": (0.22, -0.04, 0.26),
    "r_shoulder": (0.45, -0.05, 0.55),
    "neck": (0.50, 0.08, 0.62),
    "head_top": (0.52, 0.08, 0.90),
    "pelvis": (0.52, 0.10, 0.21),
    "l_shoulder": (0.52, 0.26, 0.59),
    "l_elbow": (0.54, 0.32, 0.29),
    "l_wrist": (0.56, 0.36, 0.03),
    "l_hand": (0.56, 0.38, -0.05),
    "l_hip": (0.52, 0.20, 0.18),
    "r_hip": (0.52, 0.00, 0.18),
    "l_knee": (0.50, 0.20, -0.27),
    "r_knee": (0.50, 0.00, -0.27),
    "l_ankle": (0.50, 0.20, -0.67),
    "r_ankle": (0.50, 0.00, -0.67),
    "l_foot": (0.38, 0.21, -0.71),
    "r_foot": (0.38, 0.01, -0.71),
}
_HEAD_OFFSET = (0.53, 0.08, 0.78)


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    variant: str
    duration: float = 10.0
    rate: float = 30.0
    seed: int = 0


def _validate_spec(spec: ScenarioSpec) -> None:
    if spec.kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got '{spec.kind}'")
    if spec.variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}, got '{spec.variant}'")
    if spec.duration <= 0.0:
        raise ConfigError(f"duration must be positive, got {spec.duration}")
    if spec.rate <= 0.0:
        raise ConfigError(f"rate must be positive, got {spec.rate}")


class _Shuttle:
    """Robot joint trajectory: tool shuttles between x-near and x-far.

    The pattern q = [pi, a, -2a, a, pi/2, 0] keeps the last link parallel
    to world x for every bend value ``a``, so the tool always points at
    the human side of the cell.
    """

    def __init__(self, model: RobotModel, duration: float):
        if model.joint_count != 6:
            raise ConfigError(
                "the built-in scenarios require the bundled 6-joint arm, "
                f"got a {model.joint_count}-joint model"
            )
        a_grid = np.linspace(_BEND_LO, _BEND_HI, 2001)
        x_of_a = np.array(
            [forward_kinematics(model, self._pattern(a)).ee_position[0] for a in a_grid]
        )
        # x decreases with the bend; store ascending for np.interp
        self._x_asc = x_of_a[::-1].copy()
        self._a_asc = a_grid[::-1].copy()
        if not (self._x_asc[0] <= _X_NEAR and self._x_asc[-1] >= _X_FAR):
            raise ConfigError(
                "robot cannot cover the built-in shuttle span "
                f"[{_X_NEAR}, {_X_FAR}] m (model spans "
                f"[{self._x_asc[0]:.3f}, {self._x_asc[-1]:.3f}] m)"
            )
        self.duration = duration
        self.n_legs = max(2, round(duration / _LEG_PERIOD))
        self.t_leg = duration / self.n_legs

        # normalized displacement along one leg for a sin^gamma speed bump
        u = np.linspace(0.0, 1.0, 2001)
        w = np.sin(np.pi * u) ** _LEG_GAMMA
        cum = np.concatenate([[0.0], np.cumsum((w[1:] + w[:-1]) * 0.5 * (u[1] - u[0]))])
        self._u_grid = u
        self._s_grid = cum / cum[-1]

    @staticmethod
    def _pattern(a: float) -> np.ndarray:
        return np.array([math.pi, a, -2.0 * a, a, 0.5 * math.pi, 0.0])

    def _reach(self, t: float) -> float:
        k = min(int(t / self.t_leg), self.n_legs - 1)
        u = (t - k * self.t_leg) / self.t_leg
        s = float(np.interp(u, self._u_grid, self._s_grid))
        if k % 2 == 0:
            return _X_FAR + (_X_NEAR - _X_FAR) * s
        return _X_NEAR + (_X_FAR - _X_NEAR) * s

    def bend(self, t: float) -> float:
        return float(np.interp(self._reach(t), self._x_asc, self._a_asc))

    def q(self, t: float) -> np.ndarray:
        return self._pattern(self.bend(t))

    def qd(self, t: float) -> np.ndarray:
        t0 = max(t - _QD_STEP, 0.0)
        t1 = t + _QD_STEP
        da = (self.bend(t1) - self.bend(t0)) / (t1 - t0)
        return da * np.array([0.0, 1.0, -2.0, 1.0, 0.0, 0.0])


def _smoothstep(u: float) -> float:
    u = min(max(u, 0.0), 1.0)
    return u * u * (3.0 - 2.0 * u)


def _ramp(f: float, f0: float, f1: float, y0: float, y1: float) -> float:
    return y0 + (y1 - y0) * _smoothstep((f - f0) / (f1 - f0))


def _gap_profile(kind: str, variant: str, t: float, duration: float) -> float:
    """Gap (m) between the tool tip and the reaching hand tip along x."""
    f = t / duration
    if kind == "handover":
        if variant == "non-dangerous":
            # walk in from outside reach, brief exchange, withdraw
            if f < 0.05:
                return 1.60
            if f < 0.35:
                return _ramp(f, 0.05, 0.35, 1.60, 0.35)
            if f < 0.45:
                return _ramp(f, 0.35, 0.45, 0.35, 0.12)
            if f < 0.58:
                return 0.12
            if f < 0.80:
                return _ramp(f, 0.58, 0.80, 0.12, 1.30)
            return 1.30
        # dangerous: starts close, presses in, lingers
        if f < 0.05:
            return 0.60
        if f < 0.30:
            return _ramp(f, 0.05, 0.30, 0.60, 0.10)
        if f < 0.80:
            return 0.10
        return _ramp(f, 0.80, 1.0001, 0.10, 0.50)
    if kind == "collaboration":
        if variant == "non-dangerous":
            return 0.45 + 0.10 * math.sin(2.0 * math.pi * 0.2 * t)
        return 0.20 + 0.06 * math.sin(2.0 * math.pi * 0.2 * t)
    # coexistence
    if variant == "non-dangerous":
        return 1.60 + 0.15 * math.cos(2.0 * math.pi * f)
    return 1.00 - 0.45 * math.sin(math.pi * f)


def _gaze_offset_deg(kind: str, t: float) -> float:
    """Distracted-gaze yaw offset profile for dangerous variants."""
    if kind == "handover":
        return 125.0 + 45.0 * math.sin(2.0 * math.pi * 0.08 * t)
    if kind == "collaboration":
        return 110.0 + 25.0 * math.sin(2.0 * math.pi * 0.1 * t)
    return 100.0 + 30.0 * math.sin(2.0 * math.pi * 0.1 * t)


def generate(spec: ScenarioSpec, model: RobotModel) -> list[dict]:
    """Produce one scenario as a list of JSON-ready frame records.

    Deterministic for a given (spec, model). The robot trajectory depends
    only on kind-independent timing, so the two variants of any kind carry
    bitwise-identical q and qd.
    """
    _validate_spec(spec)
    shuttle = _Shuttle(model, spec.duration)
    n_frames = max(1, int(round(spec.duration * spec.rate)))
    dangerous = spec.variant == "dangerous"

    rng = np.random.default_rng(
        [spec.seed, KINDS.index(spec.kind), VARIANTS.index(spec.variant)]
    )
    gaze_noise = np.clip(
        rng.normal(0.0, 2.0 if dangerous else 3.0, n_frames),
        -5.0 if dangerous else -8.0,
        5.0 if dangerous else 8.0,
    )
    head_bob = 0.004 * rng.standard_normal(n_frames)
    hip_sway = 0.005 * rng.standard_normal(n_frames)

    frames = []
    for i in range(n_frames):
        t = i / spec.rate
        q = shuttle.q(t)
        qd = shuttle.qd(t)
        tool = forward_kinematics(model, q).ee_position
        hand = tool + np.array([_gap_profile(spec.kind, spec.variant, t, spec.duration), 0.0, 0.0])

        joints = {
            name: hand + np.asarray(offset) for name, offset in _JOINT_OFFSETS.items()
        }
        for name in ("neck", "head_top"):
            joints[name] = joints[name] + np.array([0.0, 0.0, head_bob[i]])
        for name in ("pelvis", "l_hip", "r_hip"):
            joints[name] = joints[name] + np.array([0.0, hip_sway[i], 0.0])

        head_pos = hand + np.asarray(_HEAD_OFFSET) + np.array([0.0, 0.0, head_bob[i]])
        to_tool = tool - head_pos
        yaw_face = math.degrees(math.atan2(to_tool[1], to_tool[0]))
        if dangerous:
            yaw = yaw_face + _gaze_offset_deg(spec.kind, t) + gaze_noise[i]
            head = {"position": head_pos.tolist(), "yaw_deg": yaw}
        else:
            yaw = math.radians(yaw_face + gaze_noise[i])
            head = {
                "position": head_pos.tolist(),
                "gaze": [math.cos(yaw), math.sin(yaw), 0.0],
            }

        frames.append(
            {
                "t": t,
                "human": {"joints": {k: v.tolist() for k, v in joints.items()}},
                "head": head,
                "robot": {"q": q.tolist(), "qd": qd.tolist()},
            }
        )
    return frames
