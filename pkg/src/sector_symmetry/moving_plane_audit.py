"""Audit predicates for symmetry and monotonicity of solved sector fields.

Every check samples a geometric locus (a moving cap, a sweeping line, a
pivot on the Neumann side), evaluates a sign predicate on the
interpolated field, and returns a report row carrying the worst signed
violation next to the tolerance it was judged against.  Strictness is
always audited as "value <= tolerance", never as an exact strict
inequality: discretization noise makes literal strictness untestable,
so tolerances are reported alongside margins to keep regressions
visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .mesh import generate
from .pde_solver import ScalarField, evaluate, gradient
from .sector_geometry import (
    MovingLine,
    SectorSpec,
    chord,
    critical_angles,
    derive_constants,
    double_domain_triangle,
    moving_domain,
    reflect_across_lower_neumann,
    sector_contains,
    side_margins,
)

Point = tuple[float, float]

BASE_TOL = 1e-8
# noise constant for the h^2 tolerance term, frozen from calibrate_kappa
# (exact radial field on an h=0.05 mesh, 1.5x safety, floored at 1.0);
# gradient reconstructions carry order-h noise, so the calibration mesh
# size is part of the contract and finer audits lean on genuine margins
KAPPA = 7.912542665000492
COLLAR_FACTOR = 2.0
NEUMANN_FIT_RADIUS = 4.0
HW_ANGLE_COUNT = 48
EXPECTED_FAIL_PREFIX = "expected-fail"
EXPLORATORY_BETA = 2.0 * math.pi / 3.0

CSV_COLUMNS = (
    "check_id,alpha,beta,lambda,theta,theta1,n_points,max_violation,tolerance,pass,note"
)


def audit_tolerance(h: float, kappa: float = KAPPA) -> float:
    """Default check tolerance for a mesh of size h."""
    return BASE_TOL + kappa * h * h


@dataclass(frozen=True)
class AuditRow:
    """One check outcome: worst signed violation against its tolerance."""

    check_id: str
    lam: float
    theta: float
    theta1: float
    n_points: int
    max_violation: float
    tolerance: float
    passed: bool
    note: str = ""
    expected_fail: bool = False

    def __post_init__(self) -> None:
        # plain floats keep repr-based CSV emission free of array scalar types
        for name in ("lam", "theta", "theta1", "max_violation", "tolerance"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "n_points", int(self.n_points))
        if self.passed != (self.max_violation <= self.tolerance):
            raise ValueError("pass flag inconsistent with violation and tolerance")

    @property
    def regression(self) -> bool:
        return not self.passed and not self.expected_fail


def mark_expected_fail(row: AuditRow, reason: str) -> AuditRow:
    """Flag a row whose failure is the documented outcome, not a regression."""
    note = f"{EXPECTED_FAIL_PREFIX}: {reason}"
    if row.note:
        note = f"{note}; {row.note}"
    return replace(row, note=note, expected_fail=True)


@dataclass(frozen=True)
class AuditReport:
    """Batch of audit rows with the tolerance context they were judged in."""

    alpha: float
    beta: float
    h: float
    kappa: float
    tolerance: float
    rows: tuple[AuditRow, ...]

    @property
    def regressions(self) -> tuple[AuditRow, ...]:
        return tuple(r for r in self.rows if r.regression)

    @property
    def passed(self) -> bool:
        return not self.regressions

    @property
    def exploratory(self) -> bool:
        return self.beta > EXPLORATORY_BETA + 1e-12


def _spec(field: ScalarField) -> SectorSpec:
    return field.mesh.spec


def _tol(field: ScalarField, tol: Optional[float]) -> float:
    return audit_tolerance(field.mesh.h) if tol is None else float(tol)


def _row(
    check_id: str,
    lam: float,
    theta: float,
    theta1: float,
    violations: Sequence[float],
    tol: float,
    note: str = "",
) -> AuditRow:
    if len(violations) == 0:
        return AuditRow(
            check_id=check_id,
            lam=lam,
            theta=theta,
            theta1=theta1,
            n_points=0,
            max_violation=-math.inf,
            tolerance=tol,
            passed=True,
            note=f"vacuous: {note}" if note else "vacuous: empty sample set",
        )
    worst = max(violations)
    return AuditRow(
        check_id=check_id,
        lam=lam,
        theta=theta,
        theta1=theta1,
        n_points=len(violations),
        max_violation=worst,
        tolerance=tol,
        passed=worst <= tol,
        note=note,
    )


def _barycenters(field: ScalarField) -> np.ndarray:
    mesh = field.mesh
    return mesh.vertices[mesh.triangles].mean(axis=1)


def _triangle_gradients(field: ScalarField) -> np.ndarray:
    mesh = field.mesh
    u = field.values[mesh.triangles]
    g12 = mesh._tinv
    g0 = -g12[:, 0, :] - g12[:, 1, :]
    return u[:, 0:1] * g0 + u[:, 1:2] * g12[:, 0, :] + u[:, 2:3] * g12[:, 1, :]


# -- difference function and cap negativity ------------------------------------


def difference_w(field: ScalarField, lam: float, theta: float, x: Point) -> float:
    """Field value minus the value at the point's moving-line reflection."""
    line = MovingLine(lam=lam, theta=theta, beta=_spec(field).beta)
    return evaluate(field, x) - evaluate(field, line.reflect(x))


def check_w_negative(
    field: ScalarField,
    lam: float,
    theta: float,
    theta1: Optional[float] = None,
    tol: Optional[float] = None,
) -> AuditRow:
    """Assert the reflection difference stays nonpositive on the moving cap.

    Samples element barycenters farther than two mesh sizes from the cap
    boundary.  ``lam == 0`` with ``theta == beta/2`` degenerates the line
    into the symmetry axis, where the reflection is the mirror map.  An
    empty cap yields a vacuous pass, flagged in the note.
    """
    spec = _spec(field)
    h = field.mesh.h
    tolerance = _tol(field, tol)
    collar = COLLAR_FACTOR * h
    if lam == 0.0 and theta == 0.5 * spec.beta:
        bary = _barycenters(field)
        keep = bary[:, 1] > collar
        for k, (bx, by) in enumerate(bary):
            if keep[k] and min(side_margins(spec, (bx, by))) <= collar:
                keep[k] = False
        violations = [
            evaluate(field, (bx, by)) - evaluate(field, (bx, -by))
            for bx, by in bary[keep]
        ]
        return _row(
            "w_negative", lam, theta, 0.0, violations, tolerance, note="axis mirror"
        )
    dom = moving_domain(spec, lam, theta, theta1)
    if dom.is_empty:
        return _row(
            "w_negative", lam, theta, dom.theta1, [], tolerance, note="empty moving domain"
        )
    bary = _barycenters(field)
    ahead = (
        (bary[:, 0] - dom.line.pivot[0]) * dom.line.normal[0]
        + (bary[:, 1] - dom.line.pivot[1]) * dom.line.normal[1]
    ) > collar
    violations = []
    for bx, by in bary[ahead]:
        pt = (bx, by)
        if not dom.contains(pt) or dom.boundary_distance(pt) <= collar:
            continue
        violations.append(evaluate(field, pt) - evaluate(field, dom.reflected(pt)))
    note = "" if violations else "no barycenters clear the boundary collar"
    return _row("w_negative", lam, theta, dom.theta1, violations, tolerance, note=note)


# -- directional signs on the moving line --------------------------------------


def _line_samples(
    field: ScalarField,
    line: MovingLine,
    samples: Optional[int],
    include_neumann_endpoint: bool,
) -> tuple[list[Point], str]:
    spec = _spec(field)
    h = field.mesh.h
    seg = chord(spec, line)
    if seg is None:
        raise ValueError(
            f"line at lam={line.lam}, theta={line.theta} misses the sector"
        )
    t0, t1 = seg[0] + COLLAR_FACTOR * h, seg[1] - COLLAR_FACTOR * h
    pts: list[Point] = []
    note = ""
    if t1 > t0:
        m = samples if samples is not None else min(160, max(9, round((t1 - t0) / h)))
        pts = [line.point_at(t0 + (t1 - t0) * (i + 0.5) / m) for i in range(m)]
    if include_neumann_endpoint and 0.0 < line.lam < spec.side_length:
        pts.insert(0, line.pivot)
        note = "includes neumann endpoint"
    return pts, note


def directional_sign(
    field: ScalarField,
    lam: float,
    theta: float,
    side: str = "lower",
    tol: Optional[float] = None,
    include_neumann_endpoint: bool = False,
    samples: Optional[int] = None,
) -> AuditRow:
    """Assert the sweep-direction derivative is nonpositive along the line.

    The audited expression is the gradient dotted with the line's sweep
    normal; on the lower-anchored line that is
    u_x1 sin(theta - beta/2) - u_x2 cos(theta - beta/2), and the
    upper-anchored (mirrored) line flips the second sign.  Samples
    exclude a 2h boundary collar; the strengthened form keeps the pivot
    on the Neumann side as an extra sample point.
    """
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    spec = _spec(field)
    line = MovingLine(lam=lam, theta=theta, beta=spec.beta, mirrored=side == "upper")
    pts, note = _line_samples(field, line, samples, include_neumann_endpoint)
    nx, ny = line.normal
    violations = []
    for pt in pts:
        gx, gy = gradient(field, pt)
        violations.append(gx * nx + gy * ny)
    if not pts:
        note = "line chord shorter than the boundary collar"
    return _row(
        f"directional_sign_{side}",
        lam,
        theta,
        math.nan,
        violations,
        _tol(field, tol),
        note=note,
    )


# -- Neumann-side tangential monotonicity --------------------------------------


def neumann_tangential_value(field: ScalarField, lam: float, side: str) -> float:
    """Tangential derivative along a Neumann side at pivot distance lam.

    Reconstructed by a least-squares plane fit over all nodes within four
    mesh sizes of the pivot, which is reliable where one-sided
    piecewise-linear gradients are not.
    """
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    spec = _spec(field)
    mesh = field.mesh
    b2 = 0.5 * spec.beta
    sign = 1.0 if side == "upper" else -1.0
    px, py = lam * math.cos(b2), sign * lam * math.sin(b2)
    d2 = (mesh.vertices[:, 0] - px) ** 2 + (mesh.vertices[:, 1] - py) ** 2
    near = d2 <= (NEUMANN_FIT_RADIUS * mesh.h) ** 2
    if int(near.sum()) < 3:
        raise ValueError("too few nodes near the pivot for a gradient fit")
    pts = mesh.vertices[near]
    a = np.column_stack([np.ones(pts.shape[0]), pts[:, 0] - px, pts[:, 1] - py])
    coef, _, rank, _ = np.linalg.lstsq(a, field.values[near], rcond=None)
    if rank < 3:
        raise ValueError("degenerate node cloud near the pivot")
    return float(coef[1] * math.cos(b2) + sign * coef[2] * math.sin(b2))


def neumann_tangential(
    field: ScalarField, lam: float, tol: Optional[float] = None
) -> AuditRow:
    """Assert the field decreases along both Neumann sides at distance lam."""
    spec = _spec(field)
    if not 0.0 < lam < spec.side_length:
        raise ValueError(
            f"pivot must be interior to the side: 0 < lam < {spec.side_length}"
        )
    lower = neumann_tangential_value(field, lam, "lower")
    upper = neumann_tangential_value(field, lam, "upper")
    return _row(
        "neumann_tangential",
        lam,
        math.nan,
        math.nan,
        [lower, upper],
        _tol(field, tol),
        note=f"lower={lower!r} upper={upper!r}",
    )


# -- rotation function and vanishing order -------------------------------------


def rotation_v(field: ScalarField, pivot: Point, x: Point) -> float:
    """Angular derivative about the pivot: (x1-p1) u_x2 - (x2-p2) u_x1."""
    gx, gy = gradient(field, x)
    return (x[0] - pivot[0]) * gy - (x[1] - pivot[1]) * gx


def hw_exponent(
    field: ScalarField,
    lam: float,
    radii: Optional[Sequence[float]] = None,
    angles: int = HW_ANGLE_COUNT,
) -> float:
    """Least-squares vanishing order of the rotation function at the pivot.

    Fits log max over directions of |v| against log radius.  A first-order
    zero (the generic nondegenerate case) gives a slope near one.
    """
    spec = _spec(field)
    h = field.mesh.h
    if not 0.0 < lam < spec.side_length:
        raise ValueError(
            f"pivot must be interior to the side: 0 < lam < {spec.side_length}"
        )
    reach = 0.5 * min(lam, spec.side_length - lam)
    if radii is None:
        lo = 2.2 * h
        if lo >= 0.95 * reach:
            raise ValueError("mesh too coarse to place radii below the pivot reach")
        radii = np.geomspace(lo, 0.95 * reach, 8).tolist()
    radii = [float(r) for r in radii]
    if len(radii) < 2:
        raise ValueError("need at least two radii for a slope fit")
    for r in radii:
        if not COLLAR_FACTOR * h < r < reach:
            raise ValueError(f"radius {r} outside (2h, half the pivot reach)")
    b2 = 0.5 * spec.beta
    pivot = (lam * math.cos(b2), -lam * math.sin(b2))
    u = (math.cos(b2), -math.sin(b2))
    v = (math.sin(b2), math.cos(b2))
    peaks = []
    for r in radii:
        best = 0.0
        for k in range(angles):
            sig = math.pi * (k + 0.5) / angles
            cu, sv = r * math.cos(sig), r * math.sin(sig)
            pt = (pivot[0] + cu * u[0] + sv * v[0], pivot[1] + cu * u[1] + sv * v[1])
            if not sector_contains(spec, pt):
                continue
            best = max(best, abs(rotation_v(field, pivot, pt)))
        if best <= 1e-300:
            raise ValueError("rotation function vanishes on a sample circle")
        peaks.append(best)
    slope = np.polyfit(np.log(radii), np.log(peaks), 1)[0]
    return float(slope)


# -- global symmetry and monotonicity ------------------------------------------


def _defect_samples(field: ScalarField) -> list[Point]:
    """Interior upper-half barycenters, using the same collar as the
    monotonicity checks so corner layers do not dominate the maximum."""
    bary = _barycenters(field)
    keep = _interior_mask(field, bary)
    return [
        (float(bary[k, 0]), float(bary[k, 1]))
        for k in np.flatnonzero(keep & (bary[:, 1] > 0.0))
    ]


def symmetry_defect_row(field: ScalarField, tol: Optional[float] = None) -> AuditRow:
    """Axis-mirror mismatch magnitudes at interior barycenters as a row."""
    mismatches: list[float] = []
    for pt in _defect_samples(field):
        mirror = (pt[0], -pt[1])
        try:
            d = abs(evaluate(field, pt) - evaluate(field, mirror))
        except ValueError:
            continue
        mismatches.append(d)
    return _row(
        "symmetry_defect",
        math.nan,
        math.nan,
        math.nan,
        mismatches,
        _tol(field, tol),
        note="axis mirror mismatch at interior upper-half barycenters",
    )


def symmetry_defect(field: ScalarField) -> float:
    """Worst interpolated mismatch between the field and its axis mirror."""
    return max(0.0, symmetry_defect_row(field).max_violation)


def defect_refinement_study(
    coarse: ScalarField, fine: ScalarField
) -> tuple[float, float]:
    """Symmetry defects of two fields over one shared sample set.

    Both fields are evaluated at the coarse field's interior upper-half
    barycenters (points whose mirror evaluates in both meshes), so the
    two maxima measure convergence over a fixed region rather than over
    collars that shrink with the mesh size.
    """
    if coarse.mesh.spec != fine.mesh.spec:
        raise ValueError("refinement study needs fields on the same sector")
    d_coarse = 0.0
    d_fine = 0.0
    for pt in _defect_samples(coarse):
        mirror = (pt[0], -pt[1])
        try:
            dc = abs(evaluate(coarse, pt) - evaluate(coarse, mirror))
            df = abs(evaluate(fine, pt) - evaluate(fine, mirror))
        except ValueError:
            continue
        d_coarse = max(d_coarse, dc)
        d_fine = max(d_fine, df)
    return d_coarse, d_fine


def _interior_mask(field: ScalarField, bary: np.ndarray) -> np.ndarray:
    spec = _spec(field)
    collar = COLLAR_FACTOR * field.mesh.h
    keep = np.zeros(bary.shape[0], dtype=bool)
    for k, (bx, by) in enumerate(bary):
        keep[k] = min(side_margins(spec, (bx, by))) > collar
    return keep


def monotonicity_x1(field: ScalarField, tol: Optional[float] = None) -> AuditRow:
    """Assert the first partial is nonpositive at interior barycenters."""
    bary = _barycenters(field)
    keep = _interior_mask(field, bary)
    grads = _triangle_gradients(field)
    return _row(
        "monotonicity_x1",
        math.nan,
        math.nan,
        math.nan,
        grads[keep, 0].tolist(),
        _tol(field, tol),
    )


def monotonicity_x2_half(field: ScalarField, tol: Optional[float] = None) -> AuditRow:
    """Assert x2 times the second partial is nonpositive at interior barycenters."""
    bary = _barycenters(field)
    keep = _interior_mask(field, bary)
    grads = _triangle_gradients(field)
    values = (bary[keep, 1] * grads[keep, 1]).tolist()
    return _row(
        "monotonicity_x2_half", math.nan, math.nan, math.nan, values, _tol(field, tol)
    )


# -- even extension and the doubled cap ----------------------------------------


@dataclass(frozen=True)
class ExtendedField:
    """Field extended evenly across the lower Neumann side.

    Points below the side evaluate the field at their mirror image, so
    the extension is continuous across the shared ray by construction.
    """

    field: ScalarField

    def value(self, x: Point) -> float:
        spec = _spec(self.field)
        if side_margins(spec, x)[1] >= 0.0:
            return evaluate(self.field, x)
        return evaluate(self.field, reflect_across_lower_neumann(spec, x))


def even_extension(field: ScalarField) -> ExtendedField:
    """Even reflection of the field across the lower Neumann side."""
    return ExtendedField(field)


def _triangle_grid(corners: Sequence[Point], m: int) -> list[Point]:
    (ax, ay), (bx, by), (cx, cy) = corners
    pts = []
    for i in range(m):
        for j in range(m - i):
            for da, db in ((1.0, 1.0), (2.0, 2.0)):
                if da == 2.0 and j >= m - i - 1:
                    continue
                l1 = (3.0 * i + da) / (3.0 * m)
                l2 = (3.0 * j + db) / (3.0 * m)
                l0 = 1.0 - l1 - l2
                pts.append((l0 * ax + l1 * bx + l2 * cx, l0 * ay + l1 * by + l2 * cy))
    return pts


def check_double_negative(
    field: ScalarField,
    lam: float,
    theta: float,
    tol: Optional[float] = None,
) -> AuditRow:
    """Assert the reflection difference of the extended field is nonpositive
    on the doubled cap in its triangle regime.

    The note records per-piece maxima along the cap's boundary pieces; the
    arc piece is empty in the triangle regime.
    """
    spec = _spec(field)
    h = field.mesh.h
    dd = double_domain_triangle(spec, lam, theta)
    ext = even_extension(field)
    sides = [
        math.dist(dd.corners[i], dd.corners[(i + 1) % 3]) for i in range(3)
    ]
    m = max(4, min(64, round(max(sides) / h)))
    collar = COLLAR_FACTOR * h

    def w_at(pt: Point) -> float:
        return ext.value(pt) - ext.value(dd.line.reflect(pt))

    violations = [
        w_at(pt)
        for pt in _triangle_grid(dd.corners, m)
        if dd.boundary_distance(pt) > collar
    ]
    pieces = []
    for name in ("gamma0", "gamma1", "gamma2a", "gamma2b"):
        if name == "gamma1":
            pieces.append("gamma1=empty")
            continue
        vals = [w_at(pt) for pt in dd.piece_points(name, 12)]
        pieces.append(f"{name}={max(vals)!r}" if vals else f"{name}=empty")
    return _row(
        "double_negative",
        lam,
        theta,
        math.nan,
        violations,
        _tol(field, tol),
        note=" ".join(pieces),
    )


# -- sub-cap directional sign ---------------------------------------------------


def subcap_directional_sign(
    field: ScalarField,
    subcap_lam: float,
    lam: float,
    theta: float,
    tol: Optional[float] = None,
    samples: Optional[int] = None,
) -> AuditRow:
    """Directional-sign audit restricted to the sub-cap ahead of an inner line.

    The predicate is known to fail near the curved boundary for angles
    between the two blocking angles; restricted to the cap cut off at the
    smaller pivot distance by its center-blocking line, it holds again.
    """
    spec = _spec(field)
    cst = derive_constants(spec)
    if not 0.0 < subcap_lam < lam < cst.lambda_C:
        raise ValueError(
            f"need 0 < subcap pivot < lam < {cst.lambda_C}, got "
            f"{subcap_lam} and {lam}"
        )
    ang = critical_angles(spec, lam)
    if not ang.theta_A < theta < ang.theta_B:
        raise ValueError(
            f"theta={theta} outside the blocked band ({ang.theta_A}, {ang.theta_B})"
        )
    line = MovingLine(lam=lam, theta=theta, beta=spec.beta)
    pts, _ = _line_samples(field, line, samples, include_neumann_endpoint=False)
    cut_theta = critical_angles(spec, subcap_lam).theta_A
    cut = MovingLine(lam=subcap_lam, theta=cut_theta, beta=spec.beta)
    kept = [pt for pt in pts if cut.value(pt) > 0.0]
    nx, ny = line.normal
    violations = []
    for pt in kept:
        gx, gy = gradient(field, pt)
        violations.append(gx * nx + gy * ny)
    note = (
        f"subcap_lam={subcap_lam!r} cut_theta={cut_theta!r}"
        if violations
        else "empty sub-cap intersection"
    )
    return _row(
        "subcap_directional_sign",
        lam,
        theta,
        cut_theta,
        violations,
        _tol(field, tol),
        note=note,
    )


# -- chained comparison ---------------------------------------------------------


def check_chained_comparison(
    field: ScalarField,
    lam: float,
    n: int = 8,
    tol: Optional[float] = None,
) -> AuditRow:
    """Audit the two-reflection comparison on the half-angle cap's ray piece.

    For each sampled point on the ray piece, its half-angle-line
    reflection and the further reflection of that image across the
    center-blocking line must come in increasing field order.
    """
    spec = _spec(field)
    cst = derive_constants(spec)
    if spec.is_degenerate:
        raise ValueError("chained comparison needs a non-degenerate sector")
    if not 0.0 < lam < cst.lambda_sharp:
        raise ValueError(f"need 0 < lam < {cst.lambda_sharp}, got {lam}")
    half = 0.5 * spec.beta
    dom = moving_domain(spec, lam, half)
    tolerance = _tol(field, tol)
    if dom.is_empty:
        return _row("chained_comparison", lam, half, 0.0, [], tolerance, note="empty cap")
    line_half = MovingLine(lam=lam, theta=half, beta=spec.beta)
    theta_a = critical_angles(spec, lam).theta_A
    line_a = MovingLine(lam=lam, theta=theta_a, beta=spec.beta)
    violations = []
    for x_bar in dom.piece_points("gamma2a", n):
        y_bar = line_half.reflect(x_bar)
        z_bar = line_a.reflect(y_bar)
        ux = evaluate(field, x_bar)
        uy = evaluate(field, y_bar)
        uz = evaluate(field, z_bar)
        violations.append(max(ux - uz, uz - uy))
    return _row(
        "chained_comparison",
        lam,
        half,
        theta_a,
        violations,
        tolerance,
        note="ray piece of the half-angle cap",
    )


# -- sweeps and reporting --------------------------------------------------------


def theta_grid(spec: SectorSpec, lam: float, fill: int = 3) -> tuple[float, ...]:
    """Deterministic angle grid: admissible-set endpoints plus a uniform fill."""
    adm = critical_angles(spec, lam)
    top = spec.theta_top
    cands = [adm.theta_A_cap, adm.theta_B_cap, spec.beta, 0.5 * math.pi, top]
    for lo, hi in adm.intervals:
        cands.extend(lo + (hi - lo) * (i + 1.0) / (fill + 1.0) for i in range(fill))
    out: list[float] = []
    for theta in sorted(cands):
        if not 0.0 < theta <= top or not adm.contains(theta, tol=1e-12):
            continue
        if out and theta - out[-1] <= 1e-12:
            continue
        out.append(theta)
    return tuple(out)


def audit_sweep(
    field: ScalarField,
    lambdas: Sequence[float],
    fill: int = 3,
    tol: Optional[float] = None,
    thetas: Optional[Sequence[float]] = None,
) -> AuditReport:
    """Run every applicable per-line check over a pivot grid.

    Angles come from ``theta_grid`` unless an explicit ``thetas`` list is
    given, which is then filtered per pivot to the admissible set.  Rows
    are merged in deterministic (lambda, theta, check id) order.  Lines
    missing the sector yield vacuous rows so the report shape is stable.
    """
    spec = _spec(field)
    h = field.mesh.h
    tolerance = _tol(field, tol)
    cst = derive_constants(spec)
    rows: list[AuditRow] = []
    for lam in lambdas:
        if 0.0 < lam < cst.l_N:
            rows.append(neumann_tangential(field, lam, tol=tolerance))
        if thetas is None:
            angles = theta_grid(spec, lam, fill=fill)
        else:
            adm = critical_angles(spec, lam)
            kept: list[float] = []
            for candidate in sorted(thetas):
                if not 0.0 < candidate <= spec.theta_top:
                    continue
                if not adm.contains(candidate, tol=1e-12):
                    continue
                if kept and candidate - kept[-1] <= 1e-12:
                    continue
                kept.append(candidate)
            angles = tuple(kept)
        for theta in angles:
            rows.append(check_w_negative(field, lam, theta, tol=tolerance))
            ang = critical_angles(spec, lam)
            for side in ("lower", "upper"):
                try:
                    rows.append(
                        directional_sign(field, lam, theta, side=side, tol=tolerance)
                    )
                except ValueError:
                    rows.append(
                        _row(
                            f"directional_sign_{side}",
                            lam,
                            theta,
                            math.nan,
                            [],
                            tolerance,
                            note="line misses the sector",
                        )
                    )
            in_regime = (
                cst.l_perp > 0.0
                and lam <= cst.l_perp
                and ang.theta_B - 1e-12 <= theta <= 0.5 * math.pi + 1e-12
            )
            if in_regime:
                rows.append(check_double_negative(field, lam, theta, tol=tolerance))

    def order(row: AuditRow) -> tuple[float, float, str]:
        theta_key = -1.0 if math.isnan(row.theta) else row.theta
        return (row.lam, theta_key, row.check_id)

    return AuditReport(
        alpha=spec.alpha,
        beta=spec.beta,
        h=h,
        kappa=KAPPA,
        tolerance=tolerance,
        rows=tuple(sorted(rows, key=order)),
    )


def report_data_lines(report: AuditReport) -> list[str]:
    """CSV data lines of the report, one per row, without any header."""
    lines = []
    for r in report.rows:
        lines.append(
            ",".join(
                (
                    r.check_id,
                    repr(report.alpha),
                    repr(report.beta),
                    repr(r.lam),
                    repr(r.theta),
                    repr(r.theta1),
                    str(r.n_points),
                    repr(r.max_violation),
                    repr(r.tolerance),
                    str(r.passed),
                    r.note.replace(",", ";"),
                )
            )
        )
    return lines


def write_report(path: str, report: AuditReport) -> None:
    """Emit the report as CSV with a context header comment line."""
    lines = [
        "# alpha={!r} beta={!r} h={!r} kappa={!r} tolerance={!r} exploratory={}".format(
            report.alpha,
            report.beta,
            report.h,
            report.kappa,
            report.tolerance,
            report.exploratory,
        ),
        CSV_COLUMNS,
    ]
    lines.extend(report_data_lines(report))
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


# -- tolerance calibration -------------------------------------------------------


def calibrate_kappa(h: float = 0.05, safety: float = 1.5, floor: float = 1.0) -> float:
    """Measure the audit noise constant on the exact quarter-circle field.

    Interpolates the closed-form radial solution on a mesh of size h and
    records the worst deviation of every audited quantity from its exact
    counterpart; kappa is that deviation over h^2 with a safety factor,
    floored so coarse meshes never get a sub-noise tolerance.
    """
    spec = SectorSpec(0.5 * math.pi, 0.5 * math.pi)
    mesh = generate(spec, h, grading=2.0)
    values = 0.25 * (1.0 - (mesh.vertices**2).sum(axis=1))
    field = ScalarField(mesh=mesh, values=values)
    collar = COLLAR_FACTOR * h
    dev = 0.0

    for lam in (0.3, 0.6):
        for theta in theta_grid(spec, lam, fill=2):
            dom = moving_domain(spec, lam, theta)
            if dom.is_empty:
                continue
            for pt in _barycenters(field):
                pt = (float(pt[0]), float(pt[1]))
                if not dom.contains(pt) or dom.boundary_distance(pt) <= collar:
                    continue
                ref = dom.reflected(pt)
                exact = 0.25 * (ref[0] ** 2 + ref[1] ** 2 - pt[0] ** 2 - pt[1] ** 2)
                dev = max(dev, abs(difference_w(field, lam, theta, pt) - exact))

    for lam in (0.25, 0.5, 0.75):
        for theta in theta_grid(spec, lam, fill=2):
            for side in ("lower", "upper"):
                line = MovingLine(
                    lam=lam, theta=theta, beta=spec.beta, mirrored=side == "upper"
                )
                try:
                    pts, _ = _line_samples(field, line, None, False)
                except ValueError:
                    continue
                exact = -0.5 * lam * math.sin(theta)
                for pt in pts:
                    gx, gy = gradient(field, pt)
                    e = gx * line.normal[0] + gy * line.normal[1]
                    dev = max(dev, abs(e - exact))
        for side in ("lower", "upper"):
            dev = max(
                dev, abs(neumann_tangential_value(field, lam, side) + 0.5 * lam)
            )

    grads = _triangle_gradients(field)
    bary = _barycenters(field)
    keep = _interior_mask(field, bary)
    dev = max(dev, float(np.abs(grads[keep, 0] + 0.5 * bary[keep, 0]).max()))
    dev = max(
        dev,
        float(np.abs(bary[keep, 1] * (grads[keep, 1] + 0.5 * bary[keep, 1])).max()),
    )
    return float(max(floor, safety * dev / (h * h)))
