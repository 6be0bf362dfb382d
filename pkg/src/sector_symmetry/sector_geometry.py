"""Geometry of planar sub-spherical sectors and the moving-line machinery.

Frame convention used throughout the package: the wedge vertex sits at the
origin with the wedge of opening ``beta`` symmetric about the positive
x-axis, so the straight (Neumann) sides point along the directions
``-beta/2`` and ``+beta/2``.  The curved (Dirichlet) side is the arc of the
unit circle centered at ``O = (-a, 0)`` that subtends the angle ``alpha``;
the offset ``a`` is fixed by requiring the circle to pass through the two
corner points on the wedge sides.  The domain is

    Sigma = { x : x1 > |x2| cot(beta/2)  and  x1 < sqrt(1 - x2^2) - a },

an intersection of convex constraints, hence convex for ``beta <= pi``.

A moving line is anchored at a pivot ``P = lam * (cos(beta/2),
-sin(beta/2))`` on the lower straight side and makes the angle ``theta``
with that side, measured counterclockwise.  Its unit normal is chosen so
that the cap swept ahead of the line has positive sign.  The mirrored
variant anchors at the mirror image of the pivot on the upper side and
makes the angle ``theta`` with the upper side, measured clockwise; the two
variants are exchanged by the reflection ``x2 -> -x2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

Point = tuple[float, float]

#: absolute tolerance of the bracketed bisection used for derived scalars
BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200

#: below this, a sine in a denominator counts as a genuine singularity
SINGULAR_TOL = 1e-14

#: grid resolution used when clipping a curved carrier against constraints
CURVE_GRID = 2048

INTERIOR = "interior"
EXTERIOR = "exterior"
VERTEX = "vertex"
CORNER_LOWER = "corner_lower"
CORNER_UPPER = "corner_upper"
DIRICHLET_ARC = "dirichlet_arc"
NEUMANN_LOWER = "neumann_lower"
NEUMANN_UPPER = "neumann_upper"

_CATEGORIES = (
    INTERIOR,
    EXTERIOR,
    VERTEX,
    CORNER_LOWER,
    CORNER_UPPER,
    DIRICHLET_ARC,
    NEUMANN_LOWER,
    NEUMANN_UPPER,
)


def _unit(angle: float) -> Point:
    return (math.cos(angle), math.sin(angle))


def _arccot(t: float) -> float:
    """Inverse cotangent with range (0, pi)."""
    return 0.5 * math.pi - math.atan(t)


def bisect_root(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = BISECTION_TOL,
    max_iter: int = BISECTION_MAX_ITER,
) -> float:
    """Bracketed bisection for a continuous scalar function."""
    flo = fn(lo)
    if flo == 0.0:
        return lo
    fhi = fn(hi)
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SectorSpec:
    """Opening angles of the sector: arc angle ``alpha``, wedge angle ``beta``.

    Requires ``0 < beta <= alpha <= pi``.  The degenerate case
    ``beta == alpha`` puts the arc center at the vertex and is kept for
    exact-solution tests; the audit machinery itself assumes
    ``beta < alpha``.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (0.0 < self.beta <= self.alpha <= math.pi):
            raise ValueError(
                f"need 0 < beta <= alpha <= pi, got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def is_degenerate(self) -> bool:
        """True when the arc center coincides with the vertex."""
        return self.alpha == self.beta

    @property
    def arc_offset(self) -> float:
        """Signed x-offset of the vertex from the arc center."""
        if self.is_degenerate:
            return 0.0
        return math.cos(self.alpha / 2.0) - math.sin(self.alpha / 2.0) / math.tan(
            self.beta / 2.0
        )

    @property
    def arc_center(self) -> Point:
        return (-self.arc_offset, 0.0)

    @property
    def side_length(self) -> float:
        """Distance from the vertex to either mixed corner."""
        return math.sin(self.alpha / 2.0) / math.sin(self.beta / 2.0)

    @property
    def corner_lower(self) -> Point:
        ln = self.side_length
        return (ln * math.cos(self.beta / 2.0), -ln * math.sin(self.beta / 2.0))

    @property
    def corner_upper(self) -> Point:
        ln = self.side_length
        return (ln * math.cos(self.beta / 2.0), ln * math.sin(self.beta / 2.0))

    @property
    def theta_top(self) -> float:
        """Largest admissible moving-line angle, (pi + beta) / 2."""
        return 0.5 * (math.pi + self.beta)


@dataclass(frozen=True)
class DerivedConstants:
    """Scalar constants derived from the sector opening angles.

    a            signed x-offset of the vertex from the arc center
    l_N          length of each straight side
    lambda_C     pivot distance whose blocking line passes through both the
                 arc center and the upper corner
    lambda_sharp pivot distance where the center-blocking angle equals beta
    l_perp       distance from the vertex to the foot of the upper corner on
                 the lower side (0 when the foot falls behind the vertex)
    lambda_max   largest pivot distance at which any admissible line still
                 meets the sector
    beta_flat    angle cap max((pi + 2 beta)/3, pi/2) used by the flat
                 sweep estimates
    zeta_flat    maximum of the shrink factor zeta on [beta/2, beta_flat]
    lambda_flat  min of lambda_C and the pivot where the center-blocking
                 angle reaches beta_flat
    l_star       pivot distance whose reflected upper side returns exactly
                 at the mixed corner; None in the degenerate case
    """

    a: float
    l_N: float
    lambda_C: float
    lambda_sharp: float
    l_perp: float
    lambda_max: float
    beta_flat: float
    zeta_flat: float
    lambda_flat: float
    l_star: Optional[float]


def derive_constants(spec: SectorSpec) -> DerivedConstants:
    """Compute every derived scalar for the given sector."""
    alpha, beta = spec.alpha, spec.beta
    a = spec.arc_offset
    l_n = spec.side_length
    lambda_c = abs(a) * math.sin(alpha / 2.0) / math.sin((alpha + beta) / 2.0)
    lambda_sharp = math.sin((alpha - beta) / 2.0) / math.sin(beta)
    l_perp = max(l_n * math.cos(beta), 0.0)
    lambda_max = (1.0 - a) / math.cos(beta / 2.0)
    beta_flat = max((math.pi + 2.0 * beta) / 3.0, 0.5 * math.pi)
    # zeta rises to 1/(1+sin beta) at theta=(pi+2beta)/4, dips, then climbs
    # again on the far branch, so the max is one of two explicit candidates
    zeta_flat = 1.0 / (1.0 + math.sin(beta))
    if beta_flat >= (math.pi + 3.0 * beta) / 4.0:
        zeta_flat = max(zeta_flat, math.sin(beta_flat - beta) / math.sin(beta_flat))
    if spec.is_degenerate:
        lambda_flat = 0.0
        l_star: Optional[float] = None
    else:
        tan_root = abs(a) * (
            math.cos(beta / 2.0)
            - math.sin(beta / 2.0) * math.cos(beta_flat) / math.sin(beta_flat)
        )
        lambda_flat = min(lambda_c, tan_root)
        l_star = bisect_root(
            lambda lam: lambda_check(spec, lam, critical_angles(spec, lam).theta_B)
            - l_n,
            1e-9 * l_n,
            l_n * (1.0 - 1e-9),
            tol=1e-14,
        )
    return DerivedConstants(
        a=a,
        l_N=l_n,
        lambda_C=lambda_c,
        lambda_sharp=lambda_sharp,
        l_perp=l_perp,
        lambda_max=lambda_max,
        beta_flat=beta_flat,
        zeta_flat=zeta_flat,
        lambda_flat=lambda_flat,
        l_star=l_star,
    )


# -- membership and classification ------------------------------------------


def side_margins(spec: SectorSpec, x: Point) -> tuple[float, float, float]:
    """Signed distances to the three boundary carriers, positive inside.

    Order: upper straight side, lower straight side, arc.  The straight-side
    margins are exact line distances; the arc margin is the distance to the
    circle for points right of the center and 1 - |x2| left of it, which is
    continuous and still vanishes exactly on the carrier.
    """
    b2 = spec.beta / 2.0
    sb, cb = math.sin(b2), math.cos(b2)
    up = x[0] * sb - x[1] * cb
    lo = x[0] * sb + x[1] * cb
    arc = 1.0 - math.hypot(max(x[0] + spec.arc_offset, 0.0), x[1])
    return (up, lo, arc)


def sector_contains(spec: SectorSpec, x: Point, tol: float = 0.0) -> bool:
    """Strict membership in the open sector (shrunk by ``tol`` if given)."""
    up, lo, arc = side_margins(spec, x)
    return up > tol and lo > tol and arc > tol


def classify_point(spec: SectorSpec, x: Point, tol: float = 1e-12) -> str:
    """Total classification of a point against the sector closure.

    Returns one of: interior, exterior, vertex, corner_lower, corner_upper,
    dirichlet_arc, neumann_lower, neumann_upper.  Corner balls of radius
    ``tol`` win over the adjacent edges; points farther than ``tol`` outside
    the closure are exterior.
    """
    if math.hypot(x[0], x[1]) <= tol:
        return VERTEX
    pl, pu = spec.corner_lower, spec.corner_upper
    if math.hypot(x[0] - pl[0], x[1] - pl[1]) <= tol:
        return CORNER_LOWER
    if math.hypot(x[0] - pu[0], x[1] - pu[1]) <= tol:
        return CORNER_UPPER
    up, lo, arc = side_margins(spec, x)
    l_n = spec.side_length
    b2 = spec.beta / 2.0
    if abs(lo) <= tol:
        t = x[0] * math.cos(b2) - x[1] * math.sin(b2)
        if tol < t < l_n - tol and up > tol:
            return NEUMANN_LOWER
    if abs(up) <= tol:
        t = x[0] * math.cos(b2) + x[1] * math.sin(b2)
        if tol < t < l_n - tol and lo > tol:
            return NEUMANN_UPPER
    if abs(arc) <= tol and up > tol and lo > tol and x[0] + spec.arc_offset > 0.0:
        return DIRICHLET_ARC
    if up > tol and lo > tol and arc > tol:
        return INTERIOR
    return EXTERIOR


def domain_area(spec: SectorSpec) -> float:
    """Closed-form area: corner triangle plus circular segment."""
    xp = math.cos(spec.alpha / 2.0) - spec.arc_offset
    yp = math.sin(spec.alpha / 2.0)
    return xp * yp + 0.5 * (spec.alpha - math.sin(spec.alpha))


def bounding_box(spec: SectorSpec) -> tuple[float, float, float, float]:
    """(xmin, xmax, ymin, ymax) of the sector closure."""
    y = math.sin(spec.alpha / 2.0)
    return (0.0, 1.0 - spec.arc_offset, -y, y)


# -- moving lines ------------------------------------------------------------


@dataclass(frozen=True)
class MovingLine:
    """A line anchored on a straight side of the wedge.

    ``lam`` is the pivot distance from the vertex, ``theta`` the angle the
    line makes with its anchoring side (counterclockwise from the lower
    side, clockwise from the upper side when ``mirrored``).  ``value(x)``
    is the signed distance of ``x`` from the line, positive on the side
    swept ahead of the line.
    """

    lam: float
    theta: float
    beta: float
    mirrored: bool = False

    @property
    def pivot(self) -> Point:
        b2 = self.beta / 2.0
        y = self.lam * math.sin(b2)
        return (self.lam * math.cos(b2), y if self.mirrored else -y)

    @property
    def direction(self) -> Point:
        ang = self.theta - self.beta / 2.0
        if self.mirrored:
            return _unit(-ang)
        return _unit(ang)

    @property
    def normal(self) -> Point:
        ang = self.theta - self.beta / 2.0
        if self.mirrored:
            return (math.sin(ang), math.cos(ang))
        return (math.sin(ang), -math.cos(ang))

    def value(self, x: Point) -> float:
        p, n = self.pivot, self.normal
        return (x[0] - p[0]) * n[0] + (x[1] - p[1]) * n[1]

    def reflect(self, x: Point) -> Point:
        v = self.value(x)
        n = self.normal
        return (x[0] - 2.0 * v * n[0], x[1] - 2.0 * v * n[1])

    def point_at(self, t: float) -> Point:
        p, d = self.pivot, self.direction
        return (p[0] + t * d[0], p[1] + t * d[1])


def moving_line(
    spec: SectorSpec, lam: float, theta: float, mirrored: bool = False
) -> MovingLine:
    """Build a moving line, validating the angle range (0, (pi+beta)/2]."""
    if lam < 0.0:
        raise ValueError(f"pivot distance must be nonnegative, got {lam}")
    if not (0.0 < theta <= spec.theta_top + 1e-12):
        raise ValueError(f"theta must lie in (0, (pi+beta)/2], got {theta}")
    return MovingLine(lam=lam, theta=theta, beta=spec.beta, mirrored=mirrored)


def reflect(line: MovingLine, x: Point) -> Point:
    """Mirror image of ``x`` across the line."""
    return line.reflect(x)


def line_intersection(l1: MovingLine, l2: MovingLine) -> Optional[Point]:
    """Intersection point of two lines, or None if parallel."""
    n1, n2 = l1.normal, l2.normal
    det = n1[0] * n2[1] - n1[1] * n2[0]
    if abs(det) < SINGULAR_TOL:
        return None
    p1, p2 = l1.pivot, l2.pivot
    c1 = n1[0] * p1[0] + n1[1] * p1[1]
    c2 = n2[0] * p2[0] + n2[1] * p2[1]
    return (
        (c1 * n2[1] - c2 * n1[1]) / det,
        (n1[0] * c2 - n2[0] * c1) / det,
    )


def sigma(spec: SectorSpec, lam: float, x: Point) -> float:
    """Polar angle of ``x`` about the pivot, zero along the lower side.

    Ranges over [0, 2 pi).  Raises at the pivot itself, where the angle is
    undefined.
    """
    b2 = spec.beta / 2.0
    px = lam * math.cos(b2)
    py = -lam * math.sin(b2)
    dx, dy = x[0] - px, x[1] - py
    if math.hypot(dx, dy) < SINGULAR_TOL:
        raise ValueError("angle about the pivot is undefined at the pivot")
    u = (math.cos(b2), -math.sin(b2))
    v = (math.sin(b2), math.cos(b2))
    ang = math.atan2(dx * v[0] + dy * v[1], dx * u[0] + dy * u[1])
    return ang % (2.0 * math.pi)


# -- critical angles and admissible set --------------------------------------


@dataclass(frozen=True)
class AdmissibleSet:
    """Angle data for a fixed pivot distance.

    ``theta_A`` is the angle at which the line through the pivot hits the
    arc center (pi in the degenerate case), ``theta_B`` the angle at which
    it hits the upper corner.  ``theta_A_cap`` and ``theta_B_cap`` are those
    angles clipped to the admissible range.  ``intervals`` lists the
    admissible angle intervals as (lo, hi) pairs, open at lo and closed at
    hi.
    """

    lam: float
    theta_A: float
    theta_B: float
    theta_A_cap: float
    theta_B_cap: float
    intervals: tuple[tuple[float, float], ...]

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        for lo, hi in self.intervals:
            lo_ok = theta > lo + tol if lo == 0.0 else theta >= lo - tol
            if lo_ok and theta <= hi + tol:
                return True
        return False


def critical_angles(spec: SectorSpec, lam: float) -> AdmissibleSet:
    """Blocking angles and the admissible angle set at pivot distance lam."""
    if lam < 0.0:
        raise ValueError(f"pivot distance must be nonnegative, got {lam}")
    beta = spec.beta
    a = spec.arc_offset
    l_n = spec.side_length
    if a == 0.0:
        theta_a = math.pi
    else:
        theta_a = _arccot(
            (abs(a) * math.cos(beta / 2.0) - lam) / (abs(a) * math.sin(beta / 2.0))
        )
    theta_b = _arccot((l_n * math.cos(beta) - lam) / (l_n * math.sin(beta)))
    top = spec.theta_top
    theta_a_cap = min(theta_a, theta_b, top)
    theta_b_cap = min(theta_b, top)
    lambda_c = abs(a) * math.sin(spec.alpha / 2.0) / math.sin((spec.alpha + beta) / 2.0)
    if lam >= lambda_c or theta_a_cap >= top:
        intervals: tuple[tuple[float, float], ...] = ((0.0, top),)
    else:
        intervals = ((0.0, theta_a_cap), (theta_b_cap, top))
    return AdmissibleSet(
        lam=lam,
        theta_A=theta_a,
        theta_B=theta_b,
        theta_A_cap=theta_a_cap,
        theta_B_cap=theta_b_cap,
        intervals=intervals,
    )


# -- reflected-line intercepts ------------------------------------------------


def lambda_hat(spec: SectorSpec, lam: float, theta: float) -> float:
    """Distance along the upper side at which the line crosses it.

    Signed: negative means the crossing sits on the backward extension.
    Raises when the line is parallel to the upper side.
    """
    s = math.sin(theta - spec.beta)
    if abs(s) < SINGULAR_TOL:
        raise ValueError(f"line at theta={theta} is parallel to the upper side")
    return lam * math.sin(theta) / s


def lambda_check(spec: SectorSpec, lam: float, theta: float) -> float:
    """Distance along the lower side at which the reflected upper side returns.

    Raises when the reflection of the upper side is parallel to the lower
    side.
    """
    s = math.sin(2.0 * theta - spec.beta)
    if abs(s) < SINGULAR_TOL:
        raise ValueError(
            f"reflected upper side at theta={theta} is parallel to the lower side"
        )
    return lam + lam * math.sin(spec.beta) / s


def zeta(spec: SectorSpec, theta: float) -> float:
    """Shrink factor: pivot distance over smaller reflected intercept.

    Defined for theta in [beta/2, (pi+beta)/2]; piecewise with the switch
    at (pi + 3 beta)/4, where both branches agree.
    """
    beta = spec.beta
    if not (beta / 2.0 - 1e-12 <= theta <= spec.theta_top + 1e-12):
        raise ValueError(f"theta={theta} outside [beta/2, (pi+beta)/2]")
    if theta <= (math.pi + 3.0 * beta) / 4.0:
        s = math.sin(2.0 * theta - beta)
        return s / (math.sin(beta) + s)
    return math.sin(theta - beta) / math.sin(theta)


def lambda_star(spec: SectorSpec, lam: float, theta: float) -> float:
    """Smaller of the two reflected intercepts, lam / zeta(theta).

    Requires beta < theta <= (pi+beta)/2 so that both intercepts are ahead
    of the pivot.
    """
    if not (spec.beta < theta <= spec.theta_top + 1e-12):
        raise ValueError(f"theta={theta} outside (beta, (pi+beta)/2]")
    return lam / zeta(spec, theta)


def theta_lambda(spec: SectorSpec, lam: float) -> float:
    """Angle at which the reflected upper side returns exactly at the corner.

    Unique in ((pi + 2 beta)/4, (pi+beta)/2); requires
    0 < lam < l_N / (1 + sin beta), below which no such angle exists.
    """
    beta = spec.beta
    l_n = spec.side_length
    if not (0.0 < lam < l_n / (1.0 + math.sin(beta))):
        raise ValueError(
            f"need 0 < lam < l_N/(1+sin beta) = {l_n / (1.0 + math.sin(beta))}, got {lam}"
        )
    lo = (math.pi + 2.0 * beta) / 4.0
    hi = spec.theta_top - 1e-8
    while lambda_check(spec, lam, hi) < l_n:
        hi = 0.5 * (hi + spec.theta_top)
        if spec.theta_top - hi < 1e-300:
            raise ValueError("reflected intercept never reaches the corner")
    return bisect_root(lambda th: lambda_check(spec, lam, th) - l_n, lo, hi)


def omega_bar(spec: SectorSpec, lam: float) -> float:
    """Steepest useful sweep angle at pivot distance lam.

    Above the balanced distance it is the capped corner-blocking angle;
    below, the smaller of (pi + center-blocking angle)/2 and the
    corner-return angle.
    """
    cst = derive_constants(spec)
    if cst.l_star is None:
        raise ValueError("undefined for the degenerate sector")
    if not (0.0 < lam <= cst.l_N):
        raise ValueError(f"need 0 < lam <= l_N = {cst.l_N}, got {lam}")
    if lam > cst.l_star:
        return critical_angles(spec, lam).theta_B_cap
    ang = critical_angles(spec, lam)
    cand = 0.5 * (math.pi + ang.theta_A)
    # for very small lam the corner-return angle hugs the top of the range
    # and cannot be resolved in floats; detect that it exceeds the other
    # candidate instead of chasing the root
    hi = spec.theta_top - 1e-9
    if cand < hi and lambda_check(spec, lam, hi) < cst.l_N:
        return cand
    return min(cand, theta_lambda(spec, lam))


def iota(spec: SectorSpec, lam: float) -> float:
    """Upper-side intercept of the line at the steepest useful angle."""
    return lambda_hat(spec, lam, omega_bar(spec, lam))


def jmath(spec: SectorSpec, lam: float) -> float:
    """Inverse of iota: the pivot distance whose steep line crosses the
    upper side at distance lam.

    Requires 0 < lam <= l_N and beta < pi/2, where iota is strictly
    increasing up to the balanced distance.
    """
    if spec.beta >= 0.5 * math.pi:
        raise ValueError("inverse sweep map requires beta < pi/2")
    cst = derive_constants(spec)
    if cst.l_star is None or not (0.0 < lam <= cst.l_N):
        raise ValueError(f"need 0 < lam <= l_N = {cst.l_N}, got {lam}")
    return bisect_root(lambda mu: iota(spec, mu) - lam, 1e-15, cst.l_star, tol=1e-14)


# -- generic carrier clipping -------------------------------------------------

Constraint = Callable[[Point], float]


@dataclass(frozen=True)
class _Carrier:
    """A straight carrier given by an origin and a unit direction."""

    origin: Point
    direction: Point

    def point_at(self, t: float) -> Point:
        return (
            self.origin[0] + t * self.direction[0],
            self.origin[1] + t * self.direction[1],
        )


def _ray_halfplane(spec: SectorSpec, lam: float, theta: float, upper: bool) -> Constraint:
    """Signed distance to the line of the ray at angle ``theta`` about the
    pivot, positive where the pivot angle of a sector point is below
    ``theta`` (``upper=True``) or above it (``upper=False``).

    Valid for sector points, whose pivot angles stay within [0, pi].
    """
    b2 = spec.beta / 2.0
    px, py = lam * math.cos(b2), -lam * math.sin(b2)
    ang = theta - b2
    nx, ny = math.sin(ang), -math.cos(ang)
    if upper:
        return lambda x: (x[0] - px) * nx + (x[1] - py) * ny
    return lambda x: -((x[0] - px) * nx + (x[1] - py) * ny)


def _sector_constraints(spec: SectorSpec) -> list[Constraint]:
    def up(x: Point) -> float:
        return side_margins(spec, x)[0]

    def lo(x: Point) -> float:
        return side_margins(spec, x)[1]

    def arc(x: Point) -> float:
        return side_margins(spec, x)[2]

    return [up, lo, arc]


def _composed(
    constraints: Sequence[Constraint], mapping: Callable[[Point], Point]
) -> list[Constraint]:
    return [lambda x, g=g: g(mapping(x)) for g in constraints]


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _clip_line(
    carrier: _Carrier,
    constraints: Sequence[Constraint],
    t_lo: float,
    t_hi: float,
    tol: float = 1e-13,
) -> Optional[tuple[float, float]]:
    """Clip {carrier(t) : t in [t_lo, t_hi]} against the constraints.

    Every constraint is concave along a line, so their min is concave and
    the feasible set {min >= 0} is a single interval.  Returns (t0, t1), or
    None when the feasible set is empty.
    """

    def margin(t: float) -> float:
        return min(g(carrier.point_at(t)) for g in constraints)

    n = 256
    ts = [t_lo + (t_hi - t_lo) * i / n for i in range(n + 1)]
    vals = [margin(t) for t in ts]
    k = max(range(n + 1), key=lambda i: vals[i])
    t_peak, v_peak = ts[k], vals[k]
    if v_peak <= 0.0:
        # concavity puts the true max within one grid cell of the grid max;
        # golden-section the bracket until a positive value shows up or the
        # bracket collapses
        lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, n)]
        c = hi - _GOLDEN * (hi - lo)
        d = lo + _GOLDEN * (hi - lo)
        fc, fd = margin(c), margin(d)
        while hi - lo > tol and max(fc, fd) <= 0.0:
            if fc < fd:
                lo, c, fc = c, d, fd
                d = lo + _GOLDEN * (hi - lo)
                fd = margin(d)
            else:
                hi, d, fd = d, c, fc
                c = hi - _GOLDEN * (hi - lo)
                fc = margin(c)
        if fc > 0.0:
            t_peak, v_peak = c, fc
        elif fd > 0.0:
            t_peak, v_peak = d, fd
        else:
            return None
    if margin(t_lo) >= 0.0:
        t0 = t_lo
    else:
        a, b = t_lo, t_peak
        while b - a > tol:
            m = 0.5 * (a + b)
            if margin(m) >= 0.0:
                b = m
            else:
                a = m
        t0 = b
    if margin(t_hi) >= 0.0:
        t1 = t_hi
    else:
        a, b = t_peak, t_hi
        while b - a > tol:
            m = 0.5 * (a + b)
            if margin(m) >= 0.0:
                a = m
            else:
                b = m
        t1 = a
    if t1 <= t0:
        return None
    return (t0, t1)


def _clip_curve(
    point_at: Callable[[float], Point],
    constraints: Sequence[Constraint],
    s_lo: float,
    s_hi: float,
    tol: float = 1e-13,
    grid: int = CURVE_GRID,
) -> list[tuple[float, float]]:
    """Clip a parametric curve against constraints; may return several
    intervals.  Features narrower than (s_hi - s_lo)/grid can be missed."""

    def margin(s: float) -> float:
        return min(g(point_at(s)) for g in constraints)

    ss = [s_lo + (s_hi - s_lo) * i / grid for i in range(grid + 1)]
    vals = [margin(s) for s in ss]
    intervals: list[tuple[float, float]] = []
    inside = vals[0] > 0.0
    start: Optional[float] = s_lo if inside else None
    for i in range(1, grid + 1):
        now = vals[i] > 0.0
        if now == inside:
            continue
        a, b = ss[i - 1], ss[i]
        while b - a > tol:
            m = 0.5 * (a + b)
            if (margin(m) > 0.0) == inside:
                a = m
            else:
                b = m
        crossing = 0.5 * (a + b)
        if inside:
            assert start is not None
            intervals.append((start, crossing))
            start = None
        else:
            start = crossing
        inside = now
    if inside and start is not None:
        intervals.append((start, s_hi))
    return intervals


def _scan_radius(spec: SectorSpec, lam: float = 0.0) -> float:
    return 4.0 + 2.0 * abs(spec.arc_offset) + 2.0 * spec.side_length + abs(lam)


def chord(
    spec: SectorSpec, line: MovingLine, closed_sides: bool = False
) -> Optional[tuple[float, float]]:
    """Parameter interval of the line's crossing of the open sector.

    With ``closed_sides`` the straight sides count as inside, which extends
    the interval to closure points lying on them.  Returns (t0, t1) in the
    line's own parameterization, or None when the line misses the sector.
    """
    shift = -1e-13 if closed_sides else 0.0

    def up(x: Point) -> float:
        return side_margins(spec, x)[0] - shift

    def lo(x: Point) -> float:
        return side_margins(spec, x)[1] - shift

    def arc(x: Point) -> float:
        return side_margins(spec, x)[2]

    r = _scan_radius(spec, line.lam)
    return _clip_line(
        _Carrier(line.pivot, line.direction), [up, lo, arc], -r, r
    )


def lambda_M(spec: SectorSpec, theta: float) -> float:
    """Largest pivot distance at which the line still meets the open sector."""
    if not (0.0 < theta <= spec.theta_top + 1e-12):
        raise ValueError(f"theta must lie in (0, (pi+beta)/2], got {theta}")
    lam_max = (1.0 - spec.arc_offset) / math.cos(spec.beta / 2.0)

    def misses(lam: float) -> bool:
        return chord(spec, MovingLine(lam=lam, theta=theta, beta=spec.beta)) is None

    lo, hi = 1e-12, lam_max * (1.0 + 1e-9) + 1e-12
    if misses(lo):
        return 0.0
    if not misses(hi):
        return hi
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if misses(mid):
            hi = mid
        else:
            lo = mid
        if hi - lo < BISECTION_TOL:
            break
    return 0.5 * (lo + hi)


# -- moving domains -----------------------------------------------------------

PIECE_NAMES = ("gamma0", "gamma1", "gamma2a", "gamma2b")


@dataclass
class MovingDomain:
    """Open cap cut off by a moving line, intersected with its own mirror
    image and the pivot-angle wedge (theta1, theta).

    ``h_values`` carries the four reflected-line intercepts for the angle
    and its supplement (None where the defining crossing is parallel).
    ``is_empty`` flags an empty cap; an empty cap is a value, not an error.
    """

    spec: SectorSpec
    lam: float
    theta: float
    theta1: float
    line: MovingLine
    is_empty: bool
    h_values: dict[str, Optional[float]]

    def _constraints(self) -> list[Constraint]:
        base = _sector_constraints(self.spec)
        refl = _composed(base, self.line.reflect)
        ahead = _ray_halfplane(self.spec, self.lam, self.theta, upper=True)
        behind = _ray_halfplane(self.spec, self.lam, self.theta1, upper=False)
        return base + refl + [ahead, behind]

    def contains(self, x: Point) -> bool:
        return all(g(x) > 0.0 for g in self._constraints())

    def boundary_distance(self, x: Point) -> float:
        """Lower bound on the distance from an inside point to the boundary."""
        return min(g(x) for g in self._constraints())

    def reflected(self, x: Point) -> Point:
        return self.line.reflect(x)

    def piece_points(self, name: str, n: int) -> list[Point]:
        """n points spread over a boundary piece (midpoint spacing, so both
        endpoints are excluded).  Pieces:

        gamma0   on the moving line itself
        gamma1   on the arc or on the reflected arc
        gamma2a  on the ray at angle theta1 about the pivot
        gamma2b  on the reflected image of the upper-side line
        """
        if name not in PIECE_NAMES:
            raise ValueError(f"unknown piece {name!r}; expected one of {PIECE_NAMES}")
        if self.is_empty or n <= 0:
            return []
        spec, lam, theta, theta1 = self.spec, self.lam, self.theta, self.theta1
        base = _sector_constraints(spec)
        refl = _composed(base, self.line.reflect)
        ahead = _ray_halfplane(spec, lam, theta, upper=True)
        behind = _ray_halfplane(spec, lam, theta1, upper=False)
        r = _scan_radius(spec, lam)
        if name == "gamma0":
            cons = base + [behind]
            carrier = _Carrier(self.line.pivot, self.line.direction)
            seg = _clip_line(carrier, cons, -r, r)
            return _spread(carrier, seg, n)
        if name == "gamma2a":
            b2 = spec.beta / 2.0
            carrier = _Carrier(self.line.pivot, _unit(theta1 - b2))
            # on the ray itself the lower-side margin vanishes identically
            # when theta1 == 0, so only the remaining constraints clip it
            cons = ([base[0], base[2]] if theta1 == 0.0 else base) + refl + [ahead]
            seg = _clip_line(carrier, cons, 1e-13, r)
            return _spread(carrier, seg, n)
        if name == "gamma2b":
            # carrier: image of the upper-side line under the cap reflection
            p_img = self.line.reflect((0.0, 0.0))
            q_img = self.line.reflect(spec.corner_upper)
            dx, dy = q_img[0] - p_img[0], q_img[1] - p_img[1]
            norm = math.hypot(dx, dy)
            carrier = _Carrier(p_img, (dx / norm, dy / norm))
            cons = [base[0], base[1], base[2], refl[1], refl[2], ahead, behind]
            seg = _clip_line(carrier, cons, -r, r)
            return _spread(carrier, seg, n)
        # gamma1: true arc plus reflected arc
        ox, oy = spec.arc_center
        half = spec.alpha / 2.0
        out: list[Point] = []

        def on_arc(phi: float) -> Point:
            return (ox + math.cos(phi), oy + math.sin(phi))

        def on_refl_arc(phi: float) -> Point:
            return self.line.reflect(on_arc(phi))

        cons_arc = [base[0], base[1]] + refl + [ahead, behind]
        pieces = _clip_curve(on_arc, cons_arc, -half, half)
        cons_refl = base + [refl[0], refl[1], ahead, behind]
        pieces_r = _clip_curve(on_refl_arc, cons_refl, -half, half)
        total = sum(b - a for a, b in pieces) + sum(b - a for a, b in pieces_r)
        if total <= 0.0:
            return []
        for a, b in pieces:
            k = max(1, round(n * (b - a) / total))
            out.extend(on_arc(a + (b - a) * (i + 0.5) / k) for i in range(k))
        for a, b in pieces_r:
            k = max(1, round(n * (b - a) / total))
            out.extend(on_refl_arc(a + (b - a) * (i + 0.5) / k) for i in range(k))
        return out

    def sample_interior(self, n: int, seed: int = 0) -> list[Point]:
        """Rejection-sample n interior points (deterministic for a seed)."""
        import random

        rng = random.Random(seed)
        xmin, xmax, ymin, ymax = bounding_box(self.spec)
        out: list[Point] = []
        tries = 0
        while len(out) < n and tries < 200000 * max(n, 1):
            x = (rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))
            tries += 1
            if self.contains(x):
                out.append(x)
        return out


def _spread(
    carrier: _Carrier, seg: Optional[tuple[float, float]], n: int
) -> list[Point]:
    if seg is None:
        return []
    t0, t1 = seg
    return [carrier.point_at(t0 + (t1 - t0) * (i + 0.5) / n) for i in range(n)]


def moving_domain(
    spec: SectorSpec, lam: float, theta: float, theta1: Optional[float] = None
) -> MovingDomain:
    """Construct the moving cap at pivot distance lam and angle theta.

    ``theta1`` defaults to max(2 theta - pi, 0), the angle at which the
    reflected image of the lower-side line re-enters the wedge; values
    below that default would let the reflection escape.  Requires
    0 <= theta1 < theta.
    """
    if lam <= 0.0:
        raise ValueError(f"pivot distance must be positive, got {lam}")
    if not (0.0 < theta <= spec.theta_top + 1e-12):
        raise ValueError(f"theta must lie in (0, (pi+beta)/2], got {theta}")
    default_theta1 = max(2.0 * theta - math.pi, 0.0)
    t1 = default_theta1 if theta1 is None else float(theta1)
    if not (0.0 <= t1 < theta):
        raise ValueError(f"need 0 <= theta1 < theta, got theta1={t1}, theta={theta}")
    line = MovingLine(lam=lam, theta=theta, beta=spec.beta)
    h_values: dict[str, Optional[float]] = {}
    for key, kind, th in (
        ("h0", "hat", theta),
        ("h1", "check", theta),
        ("h2", "hat", math.pi - theta),
        ("h3", "check", math.pi - theta),
    ):
        try:
            if kind == "hat":
                h_values[key] = lambda_hat(spec, lam, th)
            else:
                h_values[key] = lambda_check(spec, lam, th)
        except ValueError:
            h_values[key] = None
    dom = MovingDomain(
        spec=spec,
        lam=lam,
        theta=theta,
        theta1=t1,
        line=line,
        is_empty=False,
        h_values=h_values,
    )
    base = _sector_constraints(spec)
    behind = _ray_halfplane(spec, lam, t1, upper=False)
    r = _scan_radius(spec, lam)
    carrier = _Carrier(line.pivot, line.direction)
    seg = _clip_line(carrier, base + [behind], -r, r)
    if seg is None:
        dom.is_empty = True
        return dom
    # the cap is nonempty iff points just behind the chord midpoint are
    # inside; probe a few offsets
    mid = carrier.point_at(0.5 * (seg[0] + seg[1]))
    nx, ny = line.normal
    width = seg[1] - seg[0]
    dom.is_empty = True
    for d in (1e-3, 1e-6, 1e-9, 1e-12):
        probe = (mid[0] + d * width * nx, mid[1] + d * width * ny)
        if dom.contains(probe):
            dom.is_empty = False
            break
    return dom


# -- doubled sector -----------------------------------------------------------


def reflect_across_lower_neumann(spec: SectorSpec, x: Point) -> Point:
    """Mirror image of ``x`` across the lower straight side's line."""
    b2 = spec.beta / 2.0
    dx, dy = math.cos(b2), -math.sin(b2)
    t = x[0] * dx + x[1] * dy
    return (2.0 * t * dx - x[0], 2.0 * t * dy - x[1])


def doubled_sector_contains(spec: SectorSpec, x: Point, tol: float = 1e-12) -> bool:
    """Membership in the sector doubled across the lower side.

    The doubled region is open: the original sector, its mirror image, and
    the relative interior of the shared straight side.
    """
    if sector_contains(spec, x):
        return True
    if sector_contains(spec, reflect_across_lower_neumann(spec, x)):
        return True
    up, lo, arc = side_margins(spec, x)
    if abs(lo) <= tol:
        b2 = spec.beta / 2.0
        t = x[0] * math.cos(b2) - x[1] * math.sin(b2)
        return tol < t < spec.side_length - tol
    return False


def double_domain_contains(
    spec: SectorSpec, lam: float, theta: float, x: Point
) -> bool:
    """Membership in the doubled moving cap: ahead of the line, inside the
    doubled sector, with the reflection also inside the doubled sector."""
    line = MovingLine(lam=lam, theta=theta, beta=spec.beta)
    if line.value(x) <= 0.0:
        return False
    if not doubled_sector_contains(spec, x):
        return False
    return doubled_sector_contains(spec, line.reflect(x))


@dataclass(frozen=True)
class DoubleDomain:
    """Triangle form of the doubled moving cap.

    Valid in the regime where theta sits between the corner-blocking angle
    and pi/2 and the pivot at or below the corner foot; there the doubled
    cap is the open triangle bounded by the moving line, the reflected
    image of the upper-side line, and the reflected image of the mirrored
    lower side's line.
    """

    spec: SectorSpec
    lam: float
    theta: float
    corners: tuple[Point, Point, Point]
    line: MovingLine
    side_upper: MovingLine
    side_lower: MovingLine

    def contains(self, x: Point) -> bool:
        return (
            self.line.value(x) > 0.0
            and self.side_upper.value(x) < 0.0
            and self.side_lower.value(x) < 0.0
        )

    def boundary_distance(self, x: Point) -> float:
        return min(
            self.line.value(x), -self.side_upper.value(x), -self.side_lower.value(x)
        )

    def piece_points(self, name: str, n: int) -> list[Point]:
        """gamma0 on the moving line, gamma2b on the reflected upper-side
        line, gamma2a on the reflected mirrored-lower-side line."""
        v0, v1, v2 = self.corners
        if name == "gamma0":
            a, b = v0, v2
        elif name == "gamma2b":
            a, b = v0, v1
        elif name == "gamma2a":
            a, b = v1, v2
        else:
            raise ValueError(f"unknown piece {name!r}")
        return [
            (a[0] + (b[0] - a[0]) * (i + 0.5) / n, a[1] + (b[1] - a[1]) * (i + 0.5) / n)
            for i in range(n)
        ]


def double_domain_triangle(spec: SectorSpec, lam: float, theta: float) -> DoubleDomain:
    """Build the doubled cap in its triangle regime.

    Requires corner-blocking angle <= theta <= pi/2 and lam at or below the
    corner foot distance (positive).
    """
    ang = critical_angles(spec, lam)
    l_perp = max(spec.side_length * math.cos(spec.beta), 0.0)
    if l_perp <= 0.0:
        raise ValueError("triangle regime needs a positive corner-foot distance")
    if not (ang.theta_B - 1e-12 <= theta <= 0.5 * math.pi + 1e-12):
        raise ValueError(
            f"theta={theta} outside [corner-blocking angle, pi/2] = "
            f"[{ang.theta_B}, {0.5 * math.pi}]"
        )
    if lam > l_perp * (1.0 + 1e-12):
        raise ValueError(f"need lam <= corner-foot distance {l_perp}, got {lam}")
    beta = spec.beta
    line = MovingLine(lam=lam, theta=theta, beta=beta)
    h1 = lambda_check(spec, lam, theta)
    h3 = lambda_check(spec, lam, math.pi - theta)
    side_upper = MovingLine(lam=h1, theta=2.0 * theta - beta, beta=beta)
    side_lower = MovingLine(lam=h3, theta=2.0 * theta + beta - math.pi, beta=beta)
    v0 = line_intersection(line, side_upper)
    v1 = line_intersection(side_upper, side_lower)
    v2 = line_intersection(side_lower, line)
    if v0 is None or v1 is None or v2 is None:
        raise ValueError("degenerate triangle: two sides are parallel")
    return DoubleDomain(
        spec=spec,
        lam=lam,
        theta=theta,
        corners=(v0, v1, v2),
        line=line,
        side_upper=side_upper,
        side_lower=side_lower,
    )
