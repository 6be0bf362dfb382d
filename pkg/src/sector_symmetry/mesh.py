"""Graded conforming triangulations of the sector with tagged boundary.

Meshes are produced by a force-equilibrium relaxation: boundary nodes are
placed first, exactly on their carriers, and held fixed while interior
nodes repel each other along Delaunay edges until the edge lengths match a
graded size field.  The sector is convex, so the Delaunay triangulation of
the relaxed points covers it without any element-removal step; the curved
side is approximated by inscribed chords whose area deficit is O(h^2).

Symmetric meshes triangulate the lower half only and mirror it across the
axis, which makes the reflection (x1, x2) -> (x1, -x2) an exact vertex
permutation rather than an approximate one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import Delaunay

from .sector_geometry import (
    DIRICHLET_ARC,
    NEUMANN_LOWER,
    NEUMANN_UPPER,
    SectorSpec,
    domain_area,
)

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]

#: boundary nodes must sit on their carrier to this absolute tolerance
CARRIER_TOL = 1e-12

#: hard lower bound on triangle angles, in degrees
MIN_ANGLE_DEG = 20.0

#: wedge openings below the angle bound cannot be meshed at quality
_MIN_WEDGE = math.radians(MIN_ANGLE_DEG)

_FSCALE = 1.2
_DT = 0.2
_MAX_ITER = 120
_RETRI_FRAC = 0.10
_CONV_FRAC = 2e-3
_DENSITY_ITERS = (15, 30, 45)

_TAGS = (DIRICHLET_ARC, NEUMANN_LOWER, NEUMANN_UPPER)


class MeshingError(RuntimeError):
    """Raised when no valid triangulation can be produced."""


@dataclass(frozen=True)
class BoundaryEdge:
    """One boundary edge, oriented counterclockwise along the boundary."""

    v0: int
    v1: int
    tag: str


@dataclass(frozen=True)
class MeshQuality:
    """Summary statistics of a mesh."""

    min_angle_deg: float
    h_max: float
    h_min: float
    n_vertices: int
    n_triangles: int
    area: float


@dataclass(frozen=True)
class Mesh:
    """Immutable conforming triangulation of a sector.

    ``vertices`` is (N, 2) float64, ``triangles`` (M, 3) int64 with
    counterclockwise orientation, ``boundary_edges`` a tuple of tagged
    edges covering the boundary exactly once.  ``h`` is the nominal target
    edge length; refinement halves it.  Arrays are write-locked.
    """

    spec: SectorSpec
    vertices: FloatArray
    triangles: IntArray
    boundary_edges: tuple[BoundaryEdge, ...]
    h: float
    symmetric: bool
    grading: float
    _v0: FloatArray = field(init=False, repr=False, compare=False)
    _tinv: FloatArray = field(init=False, repr=False, compare=False)
    _grid: dict = field(init=False, repr=False, compare=False)
    _cell: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.vertices.setflags(write=False)
        self.triangles.setflags(write=False)
        v0, tinv = _bary_transforms(self.vertices, self.triangles)
        grid, cell = _build_grid(self.vertices, self.triangles)
        object.__setattr__(self, "_v0", v0)
        object.__setattr__(self, "_tinv", tinv)
        object.__setattr__(self, "_grid", grid)
        object.__setattr__(self, "_cell", cell)

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])


# -- size field and boundary placement ----------------------------------------


def _size_field(
    spec: SectorSpec, h: float, grading: float
) -> Callable[[FloatArray], FloatArray]:
    """Local target edge length: h far away, h/grading at the corners."""
    anchors = np.array([(0.0, 0.0), spec.corner_lower, spec.corner_upper])
    base = h / grading
    ramp = 0.35 * max(spec.side_length, 1.0)

    def size(pts: FloatArray) -> FloatArray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = np.min(
            np.linalg.norm(pts[:, None, :] - anchors[None, :, :], axis=2), axis=1
        )
        return base + (h - base) * np.clip(d / ramp, 0.0, 1.0)

    return size


def _curve_points(
    fn: Callable[[float], tuple[float, float]],
    t0: float,
    t1: float,
    size: Callable[[FloatArray], FloatArray],
    n_samples: int = 2048,
) -> list[tuple[float, float]]:
    """Division points of a parametric curve spaced by the size field.

    Endpoints are excluded; callers add the exact corner coordinates
    themselves so that shared corners are not duplicated.
    """
    ts = np.linspace(t0, t1, n_samples + 1)
    pts = np.array([fn(t) for t in ts])
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    mids = 0.5 * (pts[:-1] + pts[1:])
    du = seg / size(mids)
    cum = np.concatenate([[0.0], np.cumsum(du)])
    n = max(int(round(cum[-1])), 1)
    targets = cum[-1] * np.arange(1, n) / n
    t_at = np.interp(targets, cum, ts)
    return [fn(float(t)) for t in t_at]


def _margins(spec: SectorSpec, pts: FloatArray, half: bool) -> FloatArray:
    """Signed distances to the active constraints, positive inside.

    Full domain: lower side, arc, upper side.  Lower half: lower side,
    arc, axis (x2 <= 0); the upper side is implied there.
    """
    b2 = spec.beta / 2.0
    sb, cb = math.sin(b2), math.cos(b2)
    lo = pts[:, 0] * sb + pts[:, 1] * cb
    arc = 1.0 - np.hypot(np.maximum(pts[:, 0] + spec.arc_offset, 0.0), pts[:, 1])
    top = -pts[:, 1] if half else pts[:, 0] * sb - pts[:, 1] * cb
    return np.stack([lo, arc, top], axis=1)


def _hash01(idx: NDArray[np.uint64]) -> FloatArray:
    """Deterministic uniform-looking values in [0, 1) from integer labels."""
    z = idx + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _seed_interior(
    spec: SectorSpec,
    h0: float,
    size: Callable[[FloatArray], FloatArray],
    half: bool,
) -> FloatArray:
    """Hex lattice thinned to match the size field, kept clear of walls."""
    ymax = math.sin(spec.alpha / 2.0)
    ylo = -ymax
    yhi = 0.0 if half else ymax
    dx, dy = h0, h0 * math.sqrt(3.0) / 2.0
    rows = np.arange(ylo + 0.4 * dy, yhi - 0.15 * dy, dy)
    cols = np.arange(0.0, (1.0 - spec.arc_offset) + dx, dx)
    xx, yy = np.meshgrid(cols, rows)
    xx[1::2, :] += 0.5 * dx
    pts = np.stack([xx.ravel(), yy.ravel()], axis=1)
    labels = np.arange(pts.shape[0], dtype=np.uint64)

    local = size(pts)
    keep = _hash01(labels) < (h0 / local) ** 2
    clearance = _margins(spec, pts, half).min(axis=1) > 0.45 * local
    return pts[keep & clearance]


# -- force relaxation ----------------------------------------------------------


def _unique_edges(simplices: IntArray, n_pts: int) -> IntArray:
    pairs = np.vstack(
        [simplices[:, (0, 1)], simplices[:, (1, 2)], simplices[:, (2, 0)]]
    )
    pairs = np.sort(pairs, axis=1)
    keys = pairs[:, 0].astype(np.int64) * n_pts + pairs[:, 1]
    _, first = np.unique(keys, return_index=True)
    return pairs[first]


def _project_inside(
    spec: SectorSpec, pts: FloatArray, idx: IntArray, half: bool, eps: float
) -> None:
    """Move the listed points back onto the boundary along the margin
    gradient (two damped Newton steps on the min-margin function)."""
    ex = np.array([eps, 0.0])
    ey = np.array([0.0, eps])
    for _ in range(3):
        m0 = _margins(spec, pts[idx], half).min(axis=1)
        bad = m0 < 0.0
        if not bad.any():
            return
        sub = idx[bad]
        p = pts[sub]
        gx = (
            _margins(spec, p + ex, half).min(axis=1)
            - _margins(spec, p - ex, half).min(axis=1)
        ) / (2.0 * eps)
        gy = (
            _margins(spec, p + ey, half).min(axis=1)
            - _margins(spec, p - ey, half).min(axis=1)
        ) / (2.0 * eps)
        g2 = np.maximum(gx * gx + gy * gy, 1e-12)
        m = _margins(spec, p, half).min(axis=1)
        pts[sub, 0] -= m * gx / g2
        pts[sub, 1] -= m * gy / g2


def _relax(
    spec: SectorSpec,
    fixed: FloatArray,
    free: FloatArray,
    size: Callable[[FloatArray], FloatArray],
    h0: float,
    half: bool,
) -> FloatArray:
    """Distance-spring equilibrium of the free points among the fixed ones."""
    pts = np.vstack([fixed, free])
    n_fix = fixed.shape[0]
    snapshot = None
    edges = None
    eps = 1e-6 * h0
    for it in range(_MAX_ITER):
        if (
            snapshot is None
            or np.max(np.hypot(*(pts - snapshot).T)) > _RETRI_FRAC * h0
        ):
            tri = Delaunay(pts)
            snapshot = pts.copy()
            edges = _unique_edges(tri.simplices.astype(np.int64), pts.shape[0])
        vec = pts[edges[:, 1]] - pts[edges[:, 0]]
        length = np.hypot(vec[:, 0], vec[:, 1])
        mid = 0.5 * (pts[edges[:, 0]] + pts[edges[:, 1]])
        want = size(mid)
        rest = want * _FSCALE * math.sqrt(
            float((length**2).sum()) / float((want**2).sum())
        )
        pull = np.maximum(rest - length, 0.0) / np.maximum(length, 1e-30)
        fv = pull[:, None] * vec
        n = pts.shape[0]
        move = np.stack(
            [
                np.bincount(edges[:, 1], weights=fv[:, 0], minlength=n)
                - np.bincount(edges[:, 0], weights=fv[:, 0], minlength=n),
                np.bincount(edges[:, 1], weights=fv[:, 1], minlength=n)
                - np.bincount(edges[:, 0], weights=fv[:, 1], minlength=n),
            ],
            axis=1,
        )
        move[:n_fix] = 0.0
        pts += _DT * move
        escaped = np.nonzero(_margins(spec, pts, half).min(axis=1) < 0.0)[0]
        escaped = escaped[escaped >= n_fix]
        if escaped.size:
            _project_inside(spec, pts, escaped, half, eps)
        if it in _DENSITY_ITERS and pts.shape[0] > n_fix:
            both_free = (edges[:, 0] >= n_fix) & (edges[:, 1] >= n_fix)
            vec = pts[edges[:, 1]] - pts[edges[:, 0]]
            length = np.hypot(vec[:, 0], vec[:, 1])
            mid = 0.5 * (pts[edges[:, 0]] + pts[edges[:, 1]])
            crowded = both_free & (length < 0.5 * size(mid))
            if crowded.any():
                drop = np.unique(edges[crowded, 1])
                keep = np.ones(pts.shape[0], dtype=bool)
                keep[drop] = False
                pts = pts[keep]
                snapshot = None
                continue
        disp = float(np.max(np.hypot(move[n_fix:, 0], move[n_fix:, 1]))) if (
            pts.shape[0] > n_fix
        ) else 0.0
        if _DT * disp < _CONV_FRAC * h0:
            break
    if not np.isfinite(pts).all():
        raise MeshingError("relaxation diverged")
    inner = pts[n_fix:]
    if inner.size:
        local = size(inner)
        good = _margins(spec, inner, half).min(axis=1) > 0.2 * local
        pts = np.vstack([pts[:n_fix], inner[good]])
    return pts


# -- mesh assembly -------------------------------------------------------------


def _orient_ccw(pts: FloatArray, tris: IntArray) -> IntArray:
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    if np.any(np.abs(cross) < 1e-16):
        raise MeshingError("degenerate triangle in triangulation")
    tris = tris.copy()
    flip = cross < 0.0
    tris[flip, 1], tris[flip, 2] = tris[flip, 2], tris[flip, 1].copy()
    return tris


def _boundary_edge_rows(tris: IntArray) -> IntArray:
    """Edges that belong to exactly one triangle, oriented as stored."""
    rows = np.vstack([tris[:, (0, 1)], tris[:, (1, 2)], tris[:, (2, 0)]])
    lo = rows.min(axis=1).astype(np.int64)
    hi = rows.max(axis=1).astype(np.int64)
    keys = lo * (hi.max() + 1) + hi
    _, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    if counts.max() > 2:
        raise MeshingError("non-manifold edge in triangulation")
    return rows[counts[inverse] == 1]


def _piece_flags(spec: SectorSpec, pts: FloatArray) -> NDArray[np.bool_]:
    """(N, 3) booleans: on lower side, on upper side, on arc."""
    b2 = spec.beta / 2.0
    sb, cb = math.sin(b2), math.cos(b2)
    ln = spec.side_length
    lo = pts[:, 0] * sb + pts[:, 1] * cb
    up = pts[:, 0] * sb - pts[:, 1] * cb
    t_lo = pts[:, 0] * cb - pts[:, 1] * sb
    t_up = pts[:, 0] * cb + pts[:, 1] * sb
    r = np.hypot(pts[:, 0] + spec.arc_offset, pts[:, 1])
    on_lower = (np.abs(lo) <= CARRIER_TOL) & (t_lo >= -CARRIER_TOL) & (
        t_lo <= ln + 1e-9
    )
    on_upper = (np.abs(up) <= CARRIER_TOL) & (t_up >= -CARRIER_TOL) & (
        t_up <= ln + 1e-9
    )
    on_arc = (np.abs(r - 1.0) <= CARRIER_TOL) & (
        pts[:, 0] + spec.arc_offset >= -1e-9
    )
    return np.stack([on_lower, on_upper, on_arc], axis=1)


def _tag_boundary(spec: SectorSpec, pts: FloatArray, rows: IntArray) -> list[
    BoundaryEdge
]:
    flags = _piece_flags(spec, pts)
    order = (NEUMANN_LOWER, NEUMANN_UPPER, DIRICHLET_ARC)
    edges = []
    for v0, v1 in rows:
        common = flags[v0] & flags[v1]
        hits = np.nonzero(common)[0]
        if hits.size != 1:
            raise MeshingError(
                f"boundary edge ({v0}, {v1}) lies on {hits.size} carriers"
            )
        edges.append(BoundaryEdge(int(v0), int(v1), order[hits[0]]))
    return edges


def _bary_transforms(pts: FloatArray, tris: IntArray) -> tuple[FloatArray, FloatArray]:
    a = pts[tris[:, 0]]
    e1 = pts[tris[:, 1]] - a
    e2 = pts[tris[:, 2]] - a
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    tinv = np.empty((tris.shape[0], 2, 2))
    tinv[:, 0, 0] = e2[:, 1] / det
    tinv[:, 0, 1] = -e2[:, 0] / det
    tinv[:, 1, 0] = -e1[:, 1] / det
    tinv[:, 1, 1] = e1[:, 0] / det
    return a, tinv


def _build_grid(pts: FloatArray, tris: IntArray) -> tuple[dict, float]:
    corners = pts[tris]
    lo = corners.min(axis=1)
    hi = corners.max(axis=1)
    cell = max(float((hi - lo).max()), 1e-9)
    ilo = np.floor(lo / cell).astype(np.int64)
    ihi = np.floor(hi / cell).astype(np.int64)
    grid: dict[tuple[int, int], list[int]] = {}
    for t in range(tris.shape[0]):
        for ix in range(ilo[t, 0], ihi[t, 0] + 1):
            for iy in range(ilo[t, 1], ihi[t, 1] + 1):
                grid.setdefault((ix, iy), []).append(t)
    return {k: np.array(v, dtype=np.int64) for k, v in grid.items()}, cell


def _triangle_angles_deg(pts: FloatArray, tris: IntArray) -> FloatArray:
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(c - a, axis=1)
    lc = np.linalg.norm(a - b, axis=1)

    def ang(opp: FloatArray, s1: FloatArray, s2: FloatArray) -> FloatArray:
        cosv = np.clip((s1**2 + s2**2 - opp**2) / (2.0 * s1 * s2), -1.0, 1.0)
        return np.degrees(np.arccos(cosv))

    return np.stack([ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)], axis=1)


def _edge_lengths(pts: FloatArray, tris: IntArray) -> FloatArray:
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    return np.concatenate(
        [
            np.linalg.norm(a - b, axis=1),
            np.linalg.norm(b - c, axis=1),
            np.linalg.norm(c - a, axis=1),
        ]
    )


def _validate(spec: SectorSpec, pts: FloatArray, tris: IntArray, edges: list[
    BoundaryEdge
]) -> None:
    degree: dict[int, int] = {}
    for e in edges:
        degree[e.v0] = degree.get(e.v0, 0) + 1
        degree[e.v1] = degree.get(e.v1, 0) + 1
    if any(d != 2 for d in degree.values()):
        raise MeshingError("boundary is not a single closed loop")
    flags = _piece_flags(spec, pts)
    for e in edges:
        if e.tag == DIRICHLET_ARC and not (flags[e.v0, 2] and flags[e.v1, 2]):
            raise MeshingError("arc edge with off-carrier vertex")
    angles = _triangle_angles_deg(pts, tris)
    worst = float(angles.min())
    if worst < MIN_ANGLE_DEG - 1e-9:
        raise MeshingError(
            f"triangle quality too low: min angle {worst:.2f} deg"
        )


def _assemble(
    spec: SectorSpec,
    pts: FloatArray,
    tris: IntArray,
    h: float,
    symmetric: bool,
    grading: float,
) -> Mesh:
    tris = _orient_ccw(pts, tris.astype(np.int64))
    rows = _boundary_edge_rows(tris)
    edges = _tag_boundary(spec, pts, rows)
    _validate(spec, pts, tris, edges)
    return Mesh(
        spec=spec,
        vertices=np.ascontiguousarray(pts, dtype=np.float64),
        triangles=np.ascontiguousarray(tris, dtype=np.int64),
        boundary_edges=tuple(edges),
        h=h,
        symmetric=symmetric,
        grading=grading,
    )


# -- public operations ---------------------------------------------------------


def generate(
    spec: SectorSpec,
    h: float,
    symmetric: bool = False,
    grading: float = 4.0,
) -> Mesh:
    """Mesh the sector with target edge length ``h``.

    ``grading >= 1`` shrinks edges near the vertex and the mixed corners
    by that factor.  ``symmetric=True`` mirrors a lower-half mesh so the
    axis reflection is an exact mesh automorphism.  Raises MeshingError
    when the wedge is too thin for the minimum-angle bound or relaxation
    fails.
    """
    if not 0.0 < h <= 0.2:
        raise ValueError(f"need 0 < h <= 0.2, got {h}")
    if grading < 1.0:
        raise ValueError(f"need grading >= 1, got {grading}")
    if spec.beta < _MIN_WEDGE:
        raise MeshingError(
            "wedge opening below the minimum-angle bound; the corner "
            "triangle at the vertex cannot reach 20 degrees"
        )
    size = _size_field(spec, h, grading)
    h0 = h / grading
    b2 = spec.beta / 2.0
    cb, sb = math.cos(b2), math.sin(b2)
    ln = spec.side_length
    ox = -spec.arc_offset
    half = symmetric

    fixed: list[tuple[float, float]] = [(0.0, 0.0), spec.corner_lower]
    fixed += _curve_points(lambda t: (t * cb, -t * sb), 0.0, ln, size)
    phi_hi = 0.0 if half else spec.alpha / 2.0
    fixed += _curve_points(
        lambda p: (ox + math.cos(p), math.sin(p)), -spec.alpha / 2.0, phi_hi, size
    )
    if half:
        fixed.append((ox + 1.0, 0.0))
        fixed += _curve_points(lambda t: (t, 0.0), 0.0, ox + 1.0, size)
    else:
        fixed.append(spec.corner_upper)
        fixed += _curve_points(lambda t: (t * cb, t * sb), 0.0, ln, size)

    fixed_arr = np.array(fixed, dtype=np.float64)
    free = _seed_interior(spec, h0, size, half)
    pts = _relax(spec, fixed_arr, free, size, h0, half)
    tris = Delaunay(pts).simplices.astype(np.int64)

    if half:
        pts, tris = _mirror_half(pts, tris)

    return _assemble(spec, pts, tris, h, symmetric, grading)


def _mirror_half(pts: FloatArray, tris: IntArray) -> tuple[FloatArray, IntArray]:
    """Glue the mirror image of a lower-half mesh along the axis."""
    strict = np.nonzero(pts[:, 1] != 0.0)[0]
    mirror_index = np.arange(pts.shape[0], dtype=np.int64)
    mirror_index[strict] = pts.shape[0] + np.arange(strict.size)
    extra = pts[strict] * np.array([1.0, -1.0])
    all_pts = np.vstack([pts, extra])
    mirrored = mirror_index[tris][:, (0, 2, 1)]
    all_tris = np.vstack([tris, mirrored])
    return all_pts, all_tris


def refine(mesh: Mesh) -> Mesh:
    """Quadrisect every triangle; new arc nodes are re-snapped radially.

    Parent vertices keep their indices, so nodal fields can be carried to
    the refined mesh by appending midpoint values.
    """
    pts = [tuple(p) for p in mesh.vertices]
    edge_tag = {
        (min(e.v0, e.v1), max(e.v0, e.v1)): e.tag for e in mesh.boundary_edges
    }
    ox, oy = mesh.spec.arc_center
    midpoint: dict[tuple[int, int], int] = {}

    def mid(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        idx = midpoint.get(key)
        if idx is not None:
            return idx
        xi, yi = pts[i]
        xj, yj = pts[j]
        mx, my = 0.5 * (xi + xj), 0.5 * (yi + yj)
        if edge_tag.get(key) == DIRICHLET_ARC:
            r = math.hypot(mx - ox, my - oy)
            mx, my = ox + (mx - ox) / r, oy + (my - oy) / r
        idx = len(pts)
        pts.append((mx, my))
        midpoint[key] = idx
        return idx

    children = np.empty((4 * mesh.n_triangles, 3), dtype=np.int64)
    for t, (a, b, c) in enumerate(mesh.triangles):
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        children[4 * t : 4 * t + 4] = [
            (a, ab, ca),
            (b, bc, ab),
            (c, ca, bc),
            (ab, bc, ca),
        ]
    new_pts = np.array(pts, dtype=np.float64)
    return _assemble(
        mesh.spec, new_pts, children, mesh.h / 2.0, mesh.symmetric, mesh.grading
    )


def locate(mesh: Mesh, x: tuple[float, float]) -> tuple[int, tuple[float, float, float]]:
    """Containing triangle and barycentric coordinates of a point.

    Raises ValueError for points outside the meshed region.  On shared
    edges the lowest triangle index wins, so the result is deterministic.
    """
    px, py = float(x[0]), float(x[1])
    key = (math.floor(px / mesh._cell), math.floor(py / mesh._cell))
    candidates = mesh._grid.get(key)
    if candidates is not None:
        d = np.array([px, py]) - mesh._v0[candidates]
        b12 = np.einsum("tij,tj->ti", mesh._tinv[candidates], d)
        b0 = 1.0 - b12[:, 0] - b12[:, 1]
        ok = (b12[:, 0] >= -1e-12) & (b12[:, 1] >= -1e-12) & (b0 >= -1e-12)
        hits = np.nonzero(ok)[0]
        if hits.size:
            pick = int(candidates[hits[0]])
            bary = np.array([b0[hits[0]], b12[hits[0], 0], b12[hits[0], 1]])
            bary = np.maximum(bary, 0.0)
            bary /= bary.sum()
            return pick, (float(bary[0]), float(bary[1]), float(bary[2]))
    raise ValueError(f"point {x} is outside the meshed region")


def quality(mesh: Mesh) -> MeshQuality:
    """Minimum angle, edge-length extremes, counts and covered area."""
    lengths = _edge_lengths(mesh.vertices, mesh.triangles)
    angles = _triangle_angles_deg(mesh.vertices, mesh.triangles)
    return MeshQuality(
        min_angle_deg=float(angles.min()),
        h_max=float(lengths.max()),
        h_min=float(lengths.min()),
        n_vertices=mesh.n_vertices,
        n_triangles=mesh.n_triangles,
        area=mesh_area(mesh),
    )


def mesh_area(mesh: Mesh) -> float:
    """Total area of the triangulation (inscribed, so below the true area)."""
    a = mesh.vertices[mesh.triangles[:, 0]]
    b = mesh.vertices[mesh.triangles[:, 1]]
    c = mesh.vertices[mesh.triangles[:, 2]]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    return float(0.5 * cross.sum())


def boundary_vertices(mesh: Mesh, tag: str) -> IntArray:
    """Sorted vertex indices touched by boundary edges with the given tag."""
    if tag not in _TAGS:
        raise ValueError(f"unknown boundary tag {tag!r}")
    ids = [e.v0 for e in mesh.boundary_edges if e.tag == tag]
    ids += [e.v1 for e in mesh.boundary_edges if e.tag == tag]
    return np.unique(np.array(ids, dtype=np.int64))


def to_json(mesh: Mesh) -> str:
    """Serialize the mesh; floats round-trip exactly."""
    payload = {
        "spec": {"alpha": mesh.spec.alpha, "beta": mesh.spec.beta},
        "h": mesh.h,
        "symmetric": mesh.symmetric,
        "grading": mesh.grading,
        "vertices": mesh.vertices.tolist(),
        "triangles": mesh.triangles.tolist(),
        "boundary_edges": [
            {"v0": e.v0, "v1": e.v1, "tag": e.tag} for e in mesh.boundary_edges
        ],
    }
    return json.dumps(payload)


def from_json(text: str) -> Mesh:
    """Rebuild a mesh serialized by ``to_json`` and revalidate it."""
    payload = json.loads(text)
    spec = SectorSpec(payload["spec"]["alpha"], payload["spec"]["beta"])
    pts = np.array(payload["vertices"], dtype=np.float64)
    tris = np.array(payload["triangles"], dtype=np.int64)
    mesh = _assemble(
        spec, pts, tris, float(payload["h"]), bool(payload["symmetric"]),
        float(payload["grading"]),
    )
    stored = {
        (min(e["v0"], e["v1"]), max(e["v0"], e["v1"])): e["tag"]
        for e in payload["boundary_edges"]
    }
    derived = {
        (min(e.v0, e.v1), max(e.v0, e.v1)): e.tag for e in mesh.boundary_edges
    }
    if stored != derived:
        raise ValueError("stored boundary tags disagree with the geometry")
    return mesh
