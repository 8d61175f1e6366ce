"""Property-based invariants of the indicator functions."""
import math
from dataclasses import replace
from types import SimpleNamespace

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from hrc_hazard import hazard

ENV = SimpleNamespace(v_min=0.25, v_max=1.0, t_stop=0.3, d_reach=1.3)
CFG = hazard.resolve_hazard_config({}, ENV)

finite = st.floats(allow_nan=False, allow_infinity=False)
vec3 = st.lists(st.floats(-10.0, 10.0), min_size=3, max_size=3).map(np.array)


@given(st.floats(0.0, 5.0))
def test_distance_hazard_bounded(d):
    assert 0.0 <= hazard.distance_hazard(d, CFG, ENV) <= 1.0


@given(st.floats(0.301, 1.299), st.floats(1e-6, 0.5))
def test_distance_hazard_strictly_decreasing_in_band(d, step):
    d2 = min(d + step, 1.299)
    if d2 > d:
        assert hazard.distance_hazard(d, CFG, ENV) > hazard.distance_hazard(d2, CFG, ENV)


@given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_velocity_magnitude_monotone(v1, v2):
    lo, hi = sorted((v1, v2))
    r_lo = hazard.velocity_magnitude_hazard(lo, ENV)
    r_hi = hazard.velocity_magnitude_hazard(hi, ENV)
    assert 0.0 <= r_lo <= 1.0
    assert r_lo <= r_hi


@given(vec3, vec3)
def test_directional_hazard_bounded(v, d):
    assert 0.0 <= hazard.directional_hazard(v, d) <= 1.0


@given(st.floats(-1.0, 1.0), st.floats(1e-9, 2.0))
def test_directional_hazard_monotone_in_cosine(c, step):
    c2 = min(c + step, 1.0)
    v1 = np.array([c, math.sqrt(max(0.0, 1.0 - c * c)), 0.0])
    v2 = np.array([c2, math.sqrt(max(0.0, 1.0 - c2 * c2)), 0.0])
    d = np.array([1.0, 0.0, 0.0])
    assert hazard.directional_hazard(v1, d) <= hazard.directional_hazard(v2, d) + 1e-12


@given(vec3, vec3)
def test_velocity_hazard_bounded(v, d):
    assert 0.0 <= hazard.velocity_hazard(v, d, CFG, ENV) <= 1.0


@given(vec3)
def test_velocity_hazard_neutral_without_direction(v):
    # an undefined worst-case direction must act like the neutral 0.5
    speed = float(np.linalg.norm(v))
    expected = 0.0
    if speed >= ENV.v_min:
        expected = CFG.beta * hazard.velocity_magnitude_hazard(speed, ENV) + (
            1.0 - CFG.beta
        ) * 0.5
    assert hazard.velocity_hazard(v, None, CFG, ENV) == expected


@given(st.floats(0.0, math.pi))
def test_phh_hazard_bounded(phh):
    assert 0.0 <= hazard.phh_hazard(phh, CFG) <= 1.0


@given(st.floats(0.0, math.pi), st.floats(0.0, math.pi))
def test_phh_hazard_monotone(a, b):
    lo, hi = sorted((a, b))
    assert hazard.phh_hazard(lo, CFG) <= hazard.phh_hazard(hi, CFG)


@given(st.floats(math.pi / 2, math.pi))
def test_phh_hazard_saturated_beyond_quarter_turn(phh):
    assert hazard.phh_hazard(phh, CFG) == 1.0


rs = st.floats(0.0, 1.0)


@given(rs, rs, rs, st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_total_hazard_bounded_and_gate_consistent(r_d, r_v, r_phh, d_h, v_mag):
    value, gated = hazard.total_hazard(r_d, r_v, r_phh, d_h, v_mag, CFG, ENV)
    assert 0.0 <= value <= 1.0
    if gated:
        assert value == 0.0
        assert v_mag < ENV.v_min or d_h > ENV.d_reach
    else:
        assert v_mag >= ENV.v_min and d_h <= ENV.d_reach


@given(rs, rs, rs, st.floats(0.1, 20.0))
def test_total_hazard_weight_scaling(r_d, r_v, r_phh, scale):
    base = replace(CFG, gate_mode="ungated")
    scaled = replace(base, omega=tuple(scale * w for w in base.omega))
    a, _ = hazard.total_hazard(r_d, r_v, r_phh, 0.5, 0.5, base, ENV)
    b, _ = hazard.total_hazard(r_d, r_v, r_phh, 0.5, 0.5, scaled, ENV)
    assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@given(rs)
def test_total_hazard_matches_single_active_weight(r_phh):
    # with only the head-orientation weight nonzero the aggregate is r_phh
    solo = replace(CFG, omega=(0.0, 0.0, 2.0), gate_mode="ungated")
    value, _ = hazard.total_hazard(0.3, 0.9, r_phh, 0.5, 0.5, solo, ENV)
    assert math.isclose(value, r_phh, rel_tol=1e-15, abs_tol=1e-15)
