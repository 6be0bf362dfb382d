"""Triangle-frame checks behind the blocking-angle comparison inequalities.

Everything here is built from plain vector geometry in the frame of the
isosceles triangle itself, on purpose: the sector module derives the same
two angles through closed-form cotangent expressions, and the tests tie
the two routes together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

Point = tuple[float, float]

_DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class TriangleConfig:
    """Isosceles-triangle picture for the angle comparisons.

    ``alpha`` is the angle the two equal-distance corners span about the
    inner center, ``beta`` the angle they span about the outer vertex, and
    ``s`` places the probe point on the open segment from the vertex to
    the collinearity point, where the line through the center and the
    upper corner meets the lower side.
    """

    alpha: float
    beta: float
    s: float

    def __post_init__(self) -> None:
        if not (0.0 < self.beta < self.alpha <= math.pi):
            raise ValueError(
                f"need 0 < beta < alpha <= pi, got alpha={self.alpha}, beta={self.beta}"
            )
        if not (0.0 < self.s < 1.0):
            raise ValueError(f"probe fraction must lie in (0, 1), got {self.s}")

    # frame: center at the origin, axis of symmetry along x
    @property
    def center(self) -> Point:
        return (0.0, 0.0)

    @property
    def corner_lower(self) -> Point:
        return (math.cos(self.alpha / 2.0), -math.sin(self.alpha / 2.0))

    @property
    def corner_upper(self) -> Point:
        return (math.cos(self.alpha / 2.0), math.sin(self.alpha / 2.0))

    @property
    def vertex(self) -> Point:
        # distance of the vertex left of the center so the corner rays open
        # at angle beta; positive exactly because beta < alpha
        v = math.sin(self.alpha / 2.0) / math.tan(self.beta / 2.0) - math.cos(
            self.alpha / 2.0
        )
        return (-v, 0.0)

    @property
    def midpoint(self) -> Point:
        return (math.cos(self.alpha / 2.0), 0.0)


def collinearity_point(config: TriangleConfig) -> Point:
    """Where the line through the center and the upper corner meets the
    lower side."""
    vx, vy = config.vertex
    ax, ay = config.corner_lower
    ux, uy = config.corner_upper
    # line 1: vertex + t (corner_lower - vertex); line 2: r * corner_upper
    dx, dy = ax - vx, ay - vy
    det = dx * uy - dy * ux
    if abs(det) < _DEGENERATE_TOL:
        raise ValueError("degenerate configuration: lower side parallel to the center ray")
    t = (-vx * uy + vy * ux) / det
    return (vx + t * dx, vy + t * dy)


def collinearity_distance(config: TriangleConfig) -> float:
    """Distance from the vertex to the collinearity point."""
    px, py = collinearity_point(config)
    vx, vy = config.vertex
    return math.hypot(px - vx, py - vy)


def pivot_point(config: TriangleConfig) -> Point:
    """The probe point, the fraction ``s`` of the way to the collinearity
    point."""
    vx, vy = config.vertex
    px, py = collinearity_point(config)
    return (vx + config.s * (px - vx), vy + config.s * (py - vy))


def _angle_between(p: Point, q1: Point, q2: Point) -> float:
    d1 = (q1[0] - p[0], q1[1] - p[1])
    d2 = (q2[0] - p[0], q2[1] - p[1])
    n1 = math.hypot(*d1)
    n2 = math.hypot(*d2)
    if n1 < _DEGENERATE_TOL or n2 < _DEGENERATE_TOL:
        raise ValueError("degenerate configuration: probe point meets a reference point")
    c = (d1[0] * d2[0] + d1[1] * d2[1]) / (n1 * n2)
    return math.acos(max(-1.0, min(1.0, c)))


def angles_at_P(config: TriangleConfig) -> tuple[float, float]:
    """The two comparison angles at the probe point.

    Returns (theta_A, theta_B): the angles under which the probe point
    sees the lower corner against the center, and against the upper
    corner.  Both lie in (0, pi).
    """
    p = pivot_point(config)
    theta_a = _angle_between(p, config.corner_lower, config.center)
    theta_b = _angle_between(p, config.corner_lower, config.corner_upper)
    return (theta_a, theta_b)


@dataclass(frozen=True)
class AngleMargins:
    """Signed margins of the four angle inequalities.

    Positive means the inequality holds.  A margin is None when its side
    condition does not apply.
    """

    doubling: float  # 2 theta_A - theta_B
    steep: Optional[float]  # (pi+beta)/2 - (2 theta_B - theta_A), if theta_B < pi/2
    wide: Optional[float]  # pi - (2 theta_B - theta_A), if beta <= 2 pi/3
    entry: Optional[float]  # pi - (2 theta_B - theta_A), if theta_A >= beta


def check_lemma28(config: TriangleConfig) -> AngleMargins:
    """Margins of the four angle inequalities at this configuration."""
    theta_a, theta_b = angles_at_P(config)
    excess = 2.0 * theta_b - theta_a
    return AngleMargins(
        doubling=2.0 * theta_a - theta_b,
        steep=(math.pi + config.beta) / 2.0 - excess if theta_b < math.pi / 2.0 else None,
        wide=math.pi - excess if config.beta <= 2.0 * math.pi / 3.0 else None,
        entry=math.pi - excess if theta_a >= config.beta else None,
    )


def f_aux(t: float, kappa: float, epsilon: float) -> float:
    """Auxiliary comparison function whose sign controls the wide-angle
    inequality.

    Evaluates
        2 arctan(((k + ek + 2t + et) k) / (k + ek + et)) - arctan t
        + arctan k - pi
    for t >= 0, kappa > 0, epsilon >= 0.  At t = 0 the value is
    3 arctan(kappa) - pi, zero exactly at kappa = sqrt(3).
    """
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    num = (kappa + epsilon * kappa + 2.0 * t + epsilon * t) * kappa
    den = kappa + epsilon * kappa + epsilon * t
    return 2.0 * math.atan(num / den) - math.atan(t) + math.atan(kappa) - math.pi


def f_aux_from_config(config: TriangleConfig) -> tuple[float, float, float]:
    """The (t, kappa, epsilon) triple the auxiliary function is evaluated
    at for a given configuration."""
    theta_a, _ = angles_at_P(config)
    kappa = math.tan(config.beta / 2.0)
    t = math.tan(theta_a - config.beta / 2.0)
    ox = 0.0
    hx = config.midpoint[0]
    vx = config.vertex[0]
    epsilon = abs(hx - ox) / abs(vx - ox)
    return (t, kappa, epsilon)
