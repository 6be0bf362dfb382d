"""Tests for barriers, small-volume trials, and Sobolev-ratio probes."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as orc
import sector_symmetry.sobolev_mp as sob

J0 = sob.bessel_j0

# -- Bessel evaluation ---------------------------------------------------------


def test_j0_at_origin_is_exactly_one() -> None:
    assert J0(0.0) == 1.0


def test_first_zero_matches_oracle() -> None:
    assert abs(sob.bessel_j0_first_zero() - orc.J0_FIRST_ZERO) <= 1e-9


def test_j0_vanishes_at_its_first_zero() -> None:
    assert abs(J0(sob.bessel_j0_first_zero())) <= 1e-11


def test_j0_accuracy_envelope_against_reference() -> None:
    # series branch: full float64 accuracy
    x = np.linspace(0.0, 8.0, 2001)
    assert np.max(np.abs(J0(x) - orc.bessel_j0_reference(x))) <= 1e-12
    # far asymptotic branch: full accuracy again
    x = np.linspace(14.0, 60.0, 2001)
    assert np.max(np.abs(J0(x) - orc.bessel_j0_reference(x))) <= 1e-12
    # near the switchover the truncated expansion bottoms out around 1e-9
    x = np.linspace(8.0 + 1e-9, 14.0, 2001)
    assert np.max(np.abs(J0(x) - orc.bessel_j0_reference(x))) <= 2e-9


def test_j0_even_and_shape_preserving() -> None:
    x = np.array([0.3, 1.7, 5.0, 9.2, 20.0])
    assert np.array_equal(J0(x), J0(-x))
    assert isinstance(J0(1.0), float)
    assert J0(x).shape == x.shape


# -- thresholds ----------------------------------------------------------------


def test_threshold_formulas() -> None:
    assert sob.narrow_band_threshold(4.0) == math.pi / 4.0
    assert sob.sector_band_threshold(4.0) == sob.bessel_j0_first_zero() / 2.0
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            sob.narrow_band_threshold(bad)
        with pytest.raises(ValueError):
            sob.sector_band_threshold(bad)


def test_barrier_values_match_formulas() -> None:
    eta = sob.narrow_band_threshold(2.0)
    assert sob.narrow_barrier(2.0, 0.5 * eta) == pytest.approx(math.sin(math.pi / 4.0), abs=1e-15)
    rho = np.array([0.0, 0.3])
    vals = sob.sector_barrier(9.0, rho)
    assert vals[0] == 1.0
    assert vals[1] == pytest.approx(orc.bessel_j0_reference(3.0 * 0.3), abs=1e-12)


# -- narrow-band barrier -------------------------------------------------------


def test_narrow_barrier_residuals_strictly_negative() -> None:
    report = sob.check_barrier_narrow(3.0, samples=10_000, seed=11)
    assert report.max_residual < 0.0
    assert report.fd_max_mismatch == 0.0
    # residual is (c - c0) g, so each margin dominates (c0 - |c|) g
    margin = -report.residuals
    floor = (3.0 - np.abs(report.coefficients)) * report.barrier_values
    assert np.all(margin >= floor - 1e-13)


def test_narrow_barrier_margin_vanishes_at_entry() -> None:
    eta = sob.narrow_band_threshold(1.0)
    k = math.pi / (2.0 * eta)
    for x1 in (1e-3, 1e-6):
        margin = (1.0 - 0.0) * math.sin(k * x1)
        assert 0.0 < margin <= 2.0 * k * x1


# -- sector barrier ------------------------------------------------------------


def test_sector_barrier_residuals_strictly_negative() -> None:
    report = sob.check_barrier_sector(3.0, samples=10_000, seed=7)
    assert report.max_residual < 0.0
    assert report.threshold == sob.sector_band_threshold(3.0)


def test_sector_barrier_fd_crosscheck_tight() -> None:
    report = sob.check_barrier_sector(1.0, samples=16, seed=0)
    assert report.fd_max_mismatch <= 1e-6


def test_stencil_matches_naive_five_point() -> None:
    # the expanded stencil is the same step-1e-5 difference quotient,
    # just evaluated without subtractive cancellation
    c0, h = 4.0, sob.FD_STEP
    k = sob.bessel_j0_first_zero() / sob.sector_band_threshold(c0)
    rho = np.linspace(0.1, 0.8, 8) * sob.sector_band_threshold(c0)
    naive = (
        J0(k * (rho + h)) + J0(k * (rho - h)) - 2.0 * J0(k * rho)
        + 2.0 * (J0(k * np.hypot(rho, h)) - J0(k * rho))
    ) / (h * h)
    expanded = sob._stencil_laplacian(k, rho, h)
    assert np.max(np.abs(naive - expanded) / np.abs(expanded)) <= 1e-4


def test_sector_barrier_flat_edge_normal_derivative_zero() -> None:
    # on the edge y = 0 the normal derivative is a centered difference of
    # equal values, so it vanishes identically
    c0, t = 2.0, 1e-6
    for x in (0.2, 0.5, 0.9):
        up = sob.sector_barrier(c0, math.hypot(x, t))
        down = sob.sector_barrier(c0, math.hypot(x, -t))
        assert (up - down) / (2.0 * t) == 0.0


# -- bump test functions -------------------------------------------------------


def test_bump_validation() -> None:
    with pytest.raises(ValueError):
        sob.TestFunction(0.0, (0.0, 0.0), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.TestFunction(7.0, (0.0, 0.0), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.TestFunction(1.0, (0.0, 0.0), -1.0, 2.0)
    with pytest.raises(ValueError):
        sob.TestFunction(1.0, (0.0, 0.0), 1.0, 0.5)
    with pytest.raises(ValueError):
        sob.TestFunction(1.0, (3.5, 0.0), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.TestFunction(1.0, (0.0, 0.0), 1.0, 2.0, folds=(0.9, 0.5))
    with pytest.raises(ValueError):
        sob.TestFunction(1.0, (0.0, 0.0), 1.0, 2.0, folds=(1.0,))


def test_bump_value_profile_and_clipping() -> None:
    v = sob.TestFunction(math.pi / 2.0, (1.0, 0.5), 0.8, 2.0)
    assert v.value(1.0, 0.5) == 1.0
    d2 = 0.3 * 0.3
    expected = (1.0 - d2 / 0.64) ** 2
    assert v.value(1.3, 0.5) == pytest.approx(expected, rel=1e-14)
    assert v.value(1.0, 1.4) == 0.0  # outside the support sphere
    assert v.value(1.0, -0.1) == 0.0  # below the wedge
    assert v.value(-0.2, 1.0) == 0.0  # beyond the wedge amplitude


def test_bump_gradient_matches_difference_quotient() -> None:
    plain = sob.TestFunction(2.0, (1.2, 0.9), 0.8, 2.0)
    folded = sob.reflect_double(sob.TestFunction(1.0, (1.2, 0.7), 0.8, 3.0), 1.0)
    pts = [(1.0, 0.8), (1.4, 1.1), (1.5, 0.6)]
    mirrored = [(r * math.cos(2.0 - t), r * math.sin(2.0 - t))
                for r, t in [(math.hypot(x, y), math.atan2(y, x)) for x, y in pts]]
    h = 1e-7
    for v, targets in ((plain, pts), (folded, pts + mirrored)):
        for x, y in targets:
            gx, gy = v.gradient(x, y)
            fx = (v.value(x + h, y) - v.value(x - h, y)) / (2.0 * h)
            fy = (v.value(x, y + h) - v.value(x, y - h)) / (2.0 * h)
            assert gx == pytest.approx(fx, abs=5e-7)
            assert gy == pytest.approx(fy, abs=5e-7)


def test_fold_preserves_gradient_magnitude() -> None:
    base = sob.TestFunction(1.0, (1.0, 0.6), 0.9, 2.0)
    doubled = sob.reflect_double(base, 1.0)
    r = np.linspace(0.2, 2.4, 23)
    theta = np.full_like(r, 0.55)
    direct = doubled.gradient_magnitude_polar(r, theta)
    mirrored = doubled.gradient_magnitude_polar(r, 2.0 - theta)
    assert np.array_equal(direct, mirrored)
    # and the cartesian gradient has the same magnitude on the mirrored side
    x, y = 1.1 * math.cos(1.3), 1.1 * math.sin(1.3)
    gx, gy = doubled.gradient(x, y)
    assert math.hypot(gx, gy) == pytest.approx(
        float(doubled.gradient_magnitude_polar(1.1, 1.3)), rel=1e-12
    )


@settings(max_examples=60, deadline=None)
@given(
    r=st.floats(0.0, 4.0),
    theta=st.floats(-math.pi, math.pi),
    amplitude=st.floats(0.3, 2.0 * math.pi),
)
def test_bump_vanishes_outside_wedge(r: float, theta: float, amplitude: float) -> None:
    v = sob.TestFunction(amplitude, (1.0, 0.5), 1.0, 2.0)
    x, y = r * math.cos(theta), r * math.sin(theta)
    val = v.value(x, y)
    assert val >= 0.0
    if not 0.0 <= theta % (2.0 * math.pi) <= amplitude:
        assert val == 0.0


# -- ratios and reflection identities ------------------------------------------


def test_ratio_rejects_bad_arguments() -> None:
    v = sob.TestFunction(1.0, (1.0, 0.5), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.sobolev_ratio(v, p=1.0, n=3)
    with pytest.raises(ValueError):
        sob.sobolev_ratio(v, p=0.5)
    with pytest.raises(ValueError):
        sob.sobolev_ratio(v, p=2.0)
    dead = sob.TestFunction(1.0, (0.0, -3.0), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.sobolev_ratio(dead)


def test_reflection_identities() -> None:
    beta = math.pi / 3.0
    v = sob.TestFunction(beta, (2.0, 0.0), 1.0, 2.0)
    doubled = sob.reflect_double(v, beta)
    assert doubled.amplitude == 2.0 * beta
    # paired rules: shared radial grid, angular nodes that fold onto each other
    for p, q in ((1.0, 2.0), (1.5, 6.0)):
        lv = sob.lq_norm(v, q, resolution=512, angular=256)
        ld = sob.lq_norm(doubled, q, resolution=512, angular=512)
        assert abs(ld - 2.0 ** (1.0 / q) * lv) / ld <= 1e-10
        gv = sob.gradient_lp_norm(v, p, resolution=512, angular=256)
        gd = sob.gradient_lp_norm(doubled, p, resolution=512, angular=512)
        assert abs(gd - 2.0 ** (1.0 / p) * gv) / gd <= 1e-10


def test_reflect_double_requires_matching_edge() -> None:
    v = sob.TestFunction(1.0, (1.0, 0.5), 1.0, 2.0)
    with pytest.raises(ValueError):
        sob.reflect_double(v, 0.9)
    with pytest.raises(ValueError):
        sob.reflect_double(sob.TestFunction(5.0, (1.0, 0.5), 1.0, 2.0), 5.0)


def test_ratio_is_dilation_invariant() -> None:
    v = sob.TestFunction(1.2, (1.3, 0.8), 0.7, 2.0)
    with pytest.raises(ValueError):
        sob.dilate(v, 0.0)
    base = sob.sobolev_ratio(v, p=1.0)
    scaled = sob.sobolev_ratio(sob.dilate(v, 2.0), p=1.0)
    assert abs(scaled - base) / base <= 1e-12


def test_interior_bump_ratio_ignores_amplitude() -> None:
    inner = sob.TestFunction(2.0, (1.2, 0.9), 0.5, 2.0)
    wider = sob.TestFunction(2.6, (1.2, 0.9), 0.5, 2.0)
    a = sob.sobolev_ratio(inner)
    b = sob.sobolev_ratio(wider)
    assert abs(a - b) / a <= 1e-5


# -- the family curve ----------------------------------------------------------


def test_family_curve_monotone_under_doubling() -> None:
    for beta in (math.pi / 8.0, math.pi / 4.0, math.pi / 2.0):
        wide = sob.lower_bound_curve(2.0 * beta)
        narrow = sob.lower_bound_curve(beta)
        assert wide <= narrow * (1.0 + 1e-3)


def test_family_curve_scaled_band() -> None:
    betas = np.linspace(math.pi / 8.0, math.pi, 9)
    scaled = [row[2] for row in sob.ratio_table(betas, resolution=256)]
    assert max(scaled) / min(scaled) <= 4.0


def test_ratio_table_csv_round_trip(tmp_path) -> None:
    path = tmp_path / "curve.csv"
    betas = (math.pi / 4.0, math.pi / 2.0)
    sob.write_ratio_table(str(path), betas, resolution=128)
    first = path.read_bytes()
    lines = first.decode().strip().split("\n")
    assert lines[0] == "beta,ratio_bound,scaled_bound"
    rows = sob.ratio_table(betas, resolution=128)
    for line, row in zip(lines[1:], rows):
        parsed = tuple(float(tok) for tok in line.split(","))
        assert parsed == row
    sob.write_ratio_table(str(path), betas, resolution=128)
    assert path.read_bytes() == first


# -- small-volume threshold ----------------------------------------------------


def test_small_volume_threshold_scaling() -> None:
    base = sob.small_volume_threshold(1.0, math.pi / 4.0)
    assert base > 0.0
    assert sob.small_volume_threshold(1.0, math.pi / 2.0) == pytest.approx(2.0 * base, rel=1e-12)
    assert sob.small_volume_threshold(4.0, math.pi / 4.0) == pytest.approx(base / 4.0, rel=1e-12)
    with pytest.raises(ValueError):
        sob.small_volume_threshold(0.0, 1.0)
    with pytest.raises(ValueError):
        sob.small_volume_threshold(1.0, 7.0)


@settings(max_examples=40, deadline=None)
@given(
    c0=st.floats(0.1, 50.0),
    beta=st.floats(0.1, math.pi),
    factor=st.floats(1.1, 4.0),
)
def test_small_volume_threshold_monotone(c0: float, beta: float, factor: float) -> None:
    base = sob.small_volume_threshold(c0, beta)
    assert sob.small_volume_threshold(c0, min(beta * factor, 6.28)) > base
    assert sob.small_volume_threshold(c0 * factor, beta) < base


# -- slice trials ---------------------------------------------------------------


def test_slice_geometry() -> None:
    s = sob.SectorSlice(math.pi / 3.0, 0.5)
    assert s.measure == pytest.approx(0.5 * (math.pi / 3.0) * 0.25, rel=1e-15)
    with pytest.raises(ValueError):
        sob.SectorSlice(math.pi / 3.0, 1.5)
    with pytest.raises(ValueError):
        sob.SectorSlice(math.pi / 3.0, 0.0)


def test_small_volume_trials_pass_below_threshold() -> None:
    s = sob.SectorSlice(math.pi / 3.0, 0.4)
    report = sob.verify_small_volume_mp(s, c0=4.0, trials=6, seed=3)
    assert report.below_threshold
    assert report.measure < report.threshold
    assert report.passed
    seeds = [t.seed for t in report.trials]
    assert seeds == [3 + 7919 * k for k in range(6)]
    assert all(t.max_value < 0.0 for t in report.trials)


def test_zero_coefficient_passes_at_any_measure() -> None:
    s = sob.SectorSlice(math.pi / 3.0, 1.0)
    report = sob.verify_small_volume_mp(s, c0=1.0, trials=4, seed=0, coefficient=0.0)
    assert not report.below_threshold
    assert report.passed


def test_supercritical_coefficient_is_detected() -> None:
    # c * radius^2 exceeds the principal mixed eigenvalue, so the solution
    # flips sign and the trials must flag it
    s = sob.SectorSlice(math.pi / 3.0, 0.9)
    report = sob.verify_small_volume_mp(s, c0=10.0, trials=4, seed=1, coefficient=9.9)
    assert not report.below_threshold
    assert not report.passed
    assert max(t.max_value for t in report.trials) > 1.0


def test_trials_deterministic_and_parallel_consistent() -> None:
    s = sob.SectorSlice(math.pi / 4.0, 0.5)
    a = sob.verify_small_volume_mp(s, c0=2.0, trials=5, seed=9)
    b = sob.verify_small_volume_mp(s, c0=2.0, trials=5, seed=9)
    c = sob.verify_small_volume_mp(s, c0=2.0, trials=5, seed=9, workers=3)
    assert [t.max_value for t in a.trials] == [t.max_value for t in b.trials]
    assert [t.max_value for t in a.trials] == [t.max_value for t in c.trials]


def test_verify_rejects_bad_coefficients() -> None:
    s = sob.SectorSlice(math.pi / 4.0, 0.5)
    with pytest.raises(ValueError):
        sob.verify_small_volume_mp(s, c0=0.0)
    with pytest.raises(ValueError):
        sob.verify_small_volume_mp(s, c0=1.0, coefficient=1.0)


# -- failure boundary ----------------------------------------------------------


def test_failure_boundary_linear_in_amplitude() -> None:
    rows = [sob.failure_boundary(beta, 16.0) for beta in
            (math.pi / 6.0, math.pi / 3.0, math.pi / 2.0)]
    ratios = [r.measure / r.beta for r in rows]
    assert max(ratios) / min(ratios) <= 1.2
    # the observed boundary sits well above the conservative threshold
    for r in rows:
        assert r.measure > sob.small_volume_threshold(16.0, r.beta)


def test_failure_boundary_bracket_validation() -> None:
    with pytest.raises(ValueError):
        sob.failure_boundary(math.pi / 3.0, 16.0, lo=0.9)
    with pytest.raises(ValueError):
        sob.failure_boundary(math.pi / 3.0, 0.5, hi=1.0)


def test_failure_table_csv(tmp_path) -> None:
    path = tmp_path / "failure.csv"
    rows = sob.write_failure_table(str(path), (math.pi / 3.0,), 16.0)
    text = path.read_text().strip().split("\n")
    assert text[0] == "beta,bound,radius,measure,measure_over_beta"
    parsed = tuple(float(tok) for tok in text[1].split(","))
    assert parsed[0] == rows[0].beta
    assert parsed[3] == rows[0].measure
