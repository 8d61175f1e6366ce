"""Minimum-distance queries between capsules.

Human limbs and robot links are both modeled as capsules (line segments
swept by a sphere), which keeps every proximity query closed-form. The
module also builds the worst-case direction vector: the unit vector from
the robot's closest point toward the human's closest point, along which
robot motion is most dangerous.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGeometry
from .scene import HumanSkeleton

_EPS = 1e-14

#: Below this separation of the closest axis points the worst-case
#: direction is considered undefined (contact singularity).
DIRECTION_EPS = 1e-9


@dataclass(frozen=True)
class Capsule:
    """A line segment from ``a`` to ``b`` swept by a sphere of radius ``r``.

    ``a == b`` is allowed and degenerates to a sphere.
    """

    a: np.ndarray
    b: np.ndarray
    r: float


@dataclass(frozen=True)
class ProximityResult:
    """Outcome of a minimum-distance query between two capsule sets.

    Attributes
    ----------
    distance : float
        Surface-to-surface separation in meters, clamped at 0 for
        interpenetration.
    p_robot, p_human : ndarray
        The closest points on the two capsule axes (not surfaces).
    pair : tuple[int, int]
        ``(link index, segment index)`` realizing the minimum; ties broken
        toward the lowest pair.
    """

    distance: float
    p_robot: np.ndarray
    p_human: np.ndarray
    pair: tuple[int, int]


def segment_segment_distance(a0, a1, b0, b1):
    """Global minimum distance between segments [a0,a1] and [b0,b1].

    Implements the standard clamped-quadratic closest-point scheme,
    minimizing ``|a0 + s*(a1-a0) - b0 - t*(b1-b0)|`` over the unit square
    in (s, t). Degenerate (zero-length) segments are valid input.

    Returns
    -------
    (distance, p_a, p_b) : tuple[float, ndarray, ndarray]
        The separation and the realizing points on each segment.
    """
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    b0 = np.asarray(b0, dtype=float)
    b1 = np.asarray(b1, dtype=float)

    d1 = a1 - a0
    d2 = b1 - b0
    r = a0 - b0
    a = float(np.dot(d1, d1))
    e = float(np.dot(d2, d2))
    f = float(np.dot(d2, r))

    if a <= _EPS and e <= _EPS:
        s = t = 0.0
    elif a <= _EPS:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = float(np.dot(d1, r))
        if e <= _EPS:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = float(np.dot(d1, d2))
            denom = a * e - b * b
            # Parallel segments leave s free; pin it and let the t clamp
            # below recover the facing endpoints.
            if denom > _EPS * a * e:
                s = min(max((b * f - c * e) / denom, 0.0), 1.0)
            else:
                s = 0.0
            t = b * s + f
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > e:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
            else:
                t = t / e

    p_a = a0 + s * d1
    p_b = b0 + t * d2
    return float(np.linalg.norm(p_a - p_b)), p_a, p_b


def capsule_distance(cap_a: Capsule, cap_b: Capsule):
    """Surface distance between two capsules plus the axis witness points."""
    axis_dist, p_a, p_b = segment_segment_distance(cap_a.a, cap_a.b, cap_b.a, cap_b.b)
    return max(0.0, axis_dist - cap_a.r - cap_b.r), p_a, p_b


def skeleton_capsules(human: HumanSkeleton) -> list[Capsule]:
    """Capsules for each configured skeleton segment, in segment order."""
    return [
        Capsule(a=human.joints[a], b=human.joints[b], r=r)
        for a, b, r in human.segments
    ]


def min_human_robot_distance(human: HumanSkeleton, links: list[Capsule]) -> ProximityResult:
    """Minimum surface distance over all (robot link, human segment) pairs.

    Raises
    ------
    EmptyGeometry
        If either capsule set is empty.
    """
    segments = skeleton_capsules(human)
    if not segments or not links:
        raise EmptyGeometry(
            f"need at least one capsule on each side, got {len(links)} links "
            f"and {len(segments)} human segments"
        )
    best = None
    for li, link in enumerate(links):
        for si, seg in enumerate(segments):
            dist, p_r, p_h = capsule_distance(link, seg)
            if best is None or dist < best.distance:
                best = ProximityResult(
                    distance=dist, p_robot=p_r, p_human=p_h, pair=(li, si)
                )
    return best


def worst_case_direction(prox: ProximityResult) -> np.ndarray | None:
    """Unit vector from the robot's closest point toward the human's.

    Returns ``None`` when the closest points coincide (contact
    singularity); downstream consumers substitute the neutral directional
    value in that case.
    """
    delta = prox.p_human - prox.p_robot
    norm = float(np.linalg.norm(delta))
    if norm < DIRECTION_EPS:
        return None
    return delta / norm
