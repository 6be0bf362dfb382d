"""Tests for the triangle-frame angle inequalities."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as orc
from sector_symmetry import angle_relations as ar
from sector_symmetry import sector_geometry as sg

PI = math.pi
SQRT3 = math.sqrt(3.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ar.TriangleConfig(alpha=PI / 3, beta=PI / 3, s=0.5)  # equal angles
    with pytest.raises(ValueError):
        ar.TriangleConfig(alpha=PI / 4, beta=PI / 3, s=0.5)  # beta > alpha
    with pytest.raises(ValueError):
        ar.TriangleConfig(alpha=1.1 * PI, beta=PI / 3, s=0.5)
    with pytest.raises(ValueError):
        ar.TriangleConfig(alpha=PI / 2, beta=PI / 3, s=0.0)
    with pytest.raises(ValueError):
        ar.TriangleConfig(alpha=PI / 2, beta=PI / 3, s=1.0)


def test_vertex_opens_at_beta():
    cfg = ar.TriangleConfig(alpha=2 * PI / 3, beta=PI / 3, s=0.5)
    vx, vy = cfg.vertex
    ax, ay = cfg.corner_lower
    ux, uy = cfg.corner_upper
    opening = ar._angle_between((vx, vy), (ax, ay), (ux, uy))
    assert abs(opening - cfg.beta) < 1e-13


def test_center_sees_corners_at_alpha():
    cfg = ar.TriangleConfig(alpha=5 * PI / 6, beta=PI / 2, s=0.3)
    opening = ar._angle_between(cfg.center, cfg.corner_lower, cfg.corner_upper)
    assert abs(opening - cfg.alpha) < 1e-13


def test_collinearity_point_is_collinear_and_on_the_lower_side():
    cfg = ar.TriangleConfig(alpha=2 * PI / 3, beta=5 * PI / 12, s=0.5)
    px, py = ar.collinearity_point(cfg)
    ux, uy = cfg.corner_upper
    # on the line through the center and the upper corner
    assert abs(px * uy - py * ux) < 1e-13
    vx, vy = cfg.vertex
    ax, ay = cfg.corner_lower
    cross = (px - vx) * (ay - vy) - (py - vy) * (ax - vx)
    assert abs(cross) < 1e-13


def test_collinearity_distance_matches_closed_form():
    for alpha, beta in [
        (2 * PI / 3, PI / 3),
        (2 * PI / 3, PI / 2),
        (5 * PI / 6, 5 * PI / 12),
        (PI, 7 * PI / 12),
    ]:
        cfg = ar.TriangleConfig(alpha=alpha, beta=beta, s=0.5)
        spec = sg.SectorSpec(alpha=alpha, beta=beta)
        want = sg.derive_constants(spec).lambda_C
        assert abs(ar.collinearity_distance(cfg) - want) < 1e-12
        assert abs(ar.collinearity_distance(cfg) - orc.collinear_pivot_distance(alpha, beta)) < 1e-12


def test_angles_at_P_basic_example():
    cfg = ar.TriangleConfig(alpha=2 * PI / 3, beta=PI / 3, s=0.5)
    theta_a, theta_b = ar.angles_at_P(cfg)
    assert 0.0 < theta_a < PI
    assert 0.0 < theta_b < PI
    assert theta_b < 2.0 * theta_a


def test_angles_at_P_small_s_limits():
    cfg = ar.TriangleConfig(alpha=2 * PI / 3, beta=PI / 3, s=1e-9)
    theta_a, theta_b = ar.angles_at_P(cfg)
    assert abs(theta_a - cfg.beta / 2.0) < 1e-7
    assert abs(theta_b - cfg.beta) < 1e-7


def test_angles_agree_with_the_sector_route():
    for alpha in (0.8, 1.4, 2 * PI / 3, 2.5, PI):
        for frac in (0.15, 0.45, 0.75):
            beta = frac * alpha
            if not beta < alpha:
                continue
            spec = sg.SectorSpec(alpha=alpha, beta=beta)
            lam_c = sg.derive_constants(spec).lambda_C
            for s in (0.1, 0.3, 0.5, 0.7, 0.9):
                cfg = ar.TriangleConfig(alpha=alpha, beta=beta, s=s)
                theta_a, theta_b = ar.angles_at_P(cfg)
                ang = sg.critical_angles(spec, s * lam_c)
                assert abs(theta_a - ang.theta_A) < 1e-10
                assert abs(theta_b - ang.theta_B) < 1e-10


def test_margins_positive_on_seeded_sweep():
    rng = random.Random(2028)
    n_checked = {"doubling": 0, "steep": 0, "wide": 0, "entry": 0}
    for _ in range(10000):
        beta = rng.uniform(0.05, 2 * PI / 3)
        alpha = rng.uniform(beta + 1e-6, PI)
        s = rng.uniform(1e-3, 1.0 - 1e-9)
        m = ar.check_lemma28(ar.TriangleConfig(alpha=alpha, beta=beta, s=s))
        assert m.doubling > 1e-10
        n_checked["doubling"] += 1
        if m.steep is not None:
            assert m.steep > 1e-10
            n_checked["steep"] += 1
        if m.wide is not None:
            assert m.wide > 1e-10
            n_checked["wide"] += 1
        if m.entry is not None:
            assert m.entry > 1e-10
            n_checked["entry"] += 1
    assert n_checked["wide"] == 10000  # beta <= 2 pi/3 throughout
    assert n_checked["steep"] > 100
    assert n_checked["entry"] > 100


def test_margins_positive_beyond_the_wide_angle_range():
    # the first inequality carries no side condition at all
    rng = random.Random(77)
    for _ in range(2000):
        beta = rng.uniform(2 * PI / 3, PI - 1e-3)
        alpha = rng.uniform(beta + 1e-6, PI)
        s = rng.uniform(1e-3, 1.0 - 1e-9)
        m = ar.check_lemma28(ar.TriangleConfig(alpha=alpha, beta=beta, s=s))
        assert m.doubling > 1e-10
        assert m.wide is None


def test_doubling_margin_vanishes_as_s_to_zero():
    cfg_small = ar.TriangleConfig(alpha=2 * PI / 3, beta=PI / 3, s=1e-7)
    cfg_large = ar.TriangleConfig(alpha=2 * PI / 3, beta=PI / 3, s=0.5)
    small = ar.check_lemma28(cfg_small).doubling
    large = ar.check_lemma28(cfg_large).doubling
    assert 0.0 < small < 1e-5 < large


def test_conditions_gate_the_margins():
    # steep corner margin only reported below a right angle at the corner
    cfg = ar.TriangleConfig(alpha=PI, beta=3 * PI / 4, s=0.5)
    m = ar.check_lemma28(cfg)
    theta_a, theta_b = ar.angles_at_P(cfg)
    assert (m.steep is None) == (theta_b >= PI / 2)
    assert m.wide is None  # beta > 2 pi/3
    assert (m.entry is None) == (theta_a < cfg.beta)


def test_f_aux_zero_at_the_critical_slope():
    for eps in (0.0, 0.2, 1.0, 5.0, 1e4):
        assert abs(ar.f_aux(0.0, SQRT3, eps)) < 1e-12


def test_f_aux_at_t_zero_matches_closed_form():
    for kappa in (0.2, 0.7, 1.0, SQRT3, 4.0):
        for eps in (0.0, 0.3, 2.0):
            want = 3.0 * math.atan(kappa) - PI
            assert abs(ar.f_aux(0.0, kappa, eps) - want) < 1e-13


def test_f_aux_negative_below_critical_slope():
    for kappa in (0.1, 0.5, 1.0, 1.5, SQRT3):
        for eps in (0.0, 0.1, 1.0, 10.0):
            for t in (1e-4, 0.01, 0.3, 1.0, 5.0, 50.0):
                val = ar.f_aux(t, kappa, eps)
                cap = ar.f_aux(t, SQRT3, eps)
                assert val <= cap + 1e-13
                assert cap < 0.0


def test_f_aux_increasing_in_kappa():
    for eps in (0.0, 0.5, 3.0):
        for t in (0.0, 0.2, 1.0, 4.0):
            prev = -math.inf
            for i in range(1, 60):
                val = ar.f_aux(t, 0.05 * i, eps)
                assert val > prev
                prev = val


def test_f_aux_argument_validation():
    with pytest.raises(ValueError):
        ar.f_aux(-0.1, 1.0, 0.0)
    with pytest.raises(ValueError):
        ar.f_aux(0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        ar.f_aux(0.1, 1.0, -1.0)


def test_f_aux_reproduces_the_wide_margin():
    # the algebraic function and the vector geometry measure the same excess
    rng = random.Random(5)
    for _ in range(300):
        beta = rng.uniform(0.2, 2 * PI / 3)
        alpha = rng.uniform(beta + 0.05, PI - 0.01)
        s = rng.uniform(0.05, 0.9)
        cfg = ar.TriangleConfig(alpha=alpha, beta=beta, s=s)
        theta_a, theta_b = ar.angles_at_P(cfg)
        t, kappa, eps = ar.f_aux_from_config(cfg)
        got = ar.f_aux(t, kappa, eps)
        assert abs(got - (2.0 * theta_b - theta_a - PI)) < 1e-10


@given(
    beta=st.floats(min_value=0.05, max_value=2 * PI / 3),
    gap=st.floats(min_value=1e-4, max_value=1.0),
    s=st.floats(min_value=1e-3, max_value=0.999),
)
@settings(max_examples=500, deadline=None)
def test_wide_margin_property(beta, gap, s):
    alpha = min(PI, beta + gap * (PI - beta))
    if not beta < alpha <= PI:
        return
    m = ar.check_lemma28(ar.TriangleConfig(alpha=alpha, beta=beta, s=s))
    assert m.wide is not None
    assert m.wide > 0.0
    assert m.doubling > 0.0
