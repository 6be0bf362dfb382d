"""Piecewise-linear finite elements for Delta u + f(u) = 0 on the sector.

Boundary conditions are mixed: homogeneous Dirichlet on the arc, natural
Neumann on the straight sides.  Stiffness and mass use exact formulas for
linear elements; reaction terms use the edge-midpoint rule, which is exact
for quadratics.  The nonlinear problem runs a damped Newton iteration; the
linear solver and the inverse-power eigenvalue iteration share the same
assembly.  All assembly is single-threaded and bitwise deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .mesh import Mesh, boundary_vertices, from_json as mesh_from_json, locate
from .sector_geometry import DIRICHLET_ARC

FloatArray = NDArray[np.float64]

DEFAULT_TOL = 1e-10
MAX_NEWTON = 50
MAX_EIGEN_ITER = 500
EIGEN_REL_TOL = 1e-8
_MIN_STEP = 1.0 / 64.0

#: nodal coefficients this close to a boundary edge count as "on" it
_EDGE_BARY_TOL = 1e-12

Coefficient = Union[float, FloatArray, "ScalarField"]


@dataclass(frozen=True)
class NonlinearitySpec:
    """Reaction term f and its derivative for Delta u + f(u) = 0.

    Kinds: ``const`` f = c; ``linear`` f = mu u; ``power``
    f = c sign(u) |u|^p (odd extension keeps it locally Lipschitz for
    p >= 1); ``tabulated`` piecewise-linear interpolation of sample
    points with constant extension outside their range.
    """

    kind: str
    c: float = 0.0
    mu: float = 0.0
    p: float = 1.0
    table_x: Optional[tuple[float, ...]] = None
    table_y: Optional[tuple[float, ...]] = None

    @staticmethod
    def const(c: float) -> "NonlinearitySpec":
        return NonlinearitySpec(kind="const", c=float(c))

    @staticmethod
    def linear(mu: float) -> "NonlinearitySpec":
        return NonlinearitySpec(kind="linear", mu=float(mu))

    @staticmethod
    def power(c: float, p: float) -> "NonlinearitySpec":
        if p < 1.0:
            raise ValueError(f"need p >= 1 for a locally Lipschitz term, got {p}")
        return NonlinearitySpec(kind="power", c=float(c), p=float(p))

    @staticmethod
    def tabulated(xs: "list[float]", ys: "list[float]") -> "NonlinearitySpec":
        xs_t = tuple(float(x) for x in xs)
        ys_t = tuple(float(y) for y in ys)
        if len(xs_t) < 2 or len(xs_t) != len(ys_t):
            raise ValueError("tabulated spec needs matching lists, length >= 2")
        if any(b <= a for a, b in zip(xs_t, xs_t[1:])):
            raise ValueError("tabulated abscissae must increase strictly")
        return NonlinearitySpec(kind="tabulated", table_x=xs_t, table_y=ys_t)

    def f(self, u: FloatArray) -> FloatArray:
        u = np.asarray(u, dtype=float)
        if self.kind == "const":
            return np.full_like(u, self.c)
        if self.kind == "linear":
            return self.mu * u
        if self.kind == "power":
            return self.c * np.sign(u) * np.abs(u) ** self.p
        if self.kind == "tabulated":
            return np.interp(u, self.table_x, self.table_y)
        raise ValueError(f"unknown nonlinearity kind {self.kind!r}")

    def fprime(self, u: FloatArray) -> FloatArray:
        u = np.asarray(u, dtype=float)
        if self.kind == "const":
            return np.zeros_like(u)
        if self.kind == "linear":
            return np.full_like(u, self.mu)
        if self.kind == "power":
            return self.c * self.p * np.abs(u) ** (self.p - 1.0)
        if self.kind == "tabulated":
            xs = np.asarray(self.table_x)
            ys = np.asarray(self.table_y)
            slopes = np.diff(ys) / np.diff(xs)
            seg = np.clip(np.searchsorted(xs, u, side="right") - 1, 0, len(slopes) - 1)
            out = slopes[seg]
            out = np.where((u < xs[0]) | (u > xs[-1]), 0.0, out)
            return out
        raise ValueError(f"unknown nonlinearity kind {self.kind!r}")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "const":
            out["c"] = self.c
        elif self.kind == "linear":
            out["mu"] = self.mu
        elif self.kind == "power":
            out["c"], out["p"] = self.c, self.p
        elif self.kind == "tabulated":
            out["x"], out["y"] = list(self.table_x), list(self.table_y)
        return out

    @staticmethod
    def from_dict(data: dict) -> "NonlinearitySpec":
        kind = data["kind"]
        if kind == "const":
            return NonlinearitySpec.const(data["c"])
        if kind == "linear":
            return NonlinearitySpec.linear(data["mu"])
        if kind == "power":
            return NonlinearitySpec.power(data["c"], data["p"])
        if kind == "tabulated":
            return NonlinearitySpec.tabulated(data["x"], data["y"])
        raise ValueError(f"unknown nonlinearity kind {kind!r}")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a nonlinear solve.

    ``min_interior_value`` is the smallest nodal value away from the
    Dirichlet arc; ``positive`` reports whether the field is strictly
    positive there.  ``residual_history`` holds the Euclidean norms of
    the free-node residual before each Newton step and after the last.
    """

    newton_iterations: int
    residual_norm: float
    min_interior_value: float
    damping_events: int
    residual_history: tuple[float, ...]

    @property
    def positive(self) -> bool:
        return self.min_interior_value > 0.0

    def to_dict(self) -> dict:
        return {
            "newton_iterations": self.newton_iterations,
            "residual_norm": self.residual_norm,
            "min_interior_value": self.min_interior_value,
            "damping_events": self.damping_events,
            "residual_history": list(self.residual_history),
        }

    @staticmethod
    def from_dict(data: dict) -> "SolveReport":
        return SolveReport(
            newton_iterations=int(data["newton_iterations"]),
            residual_norm=float(data["residual_norm"]),
            min_interior_value=float(data["min_interior_value"]),
            damping_events=int(data["damping_events"]),
            residual_history=tuple(float(r) for r in data["residual_history"]),
        )


@dataclass(frozen=True)
class ScalarField:
    """Nodal field on a mesh, interpolated barycentrically in triangles.

    Fields returned by the homogeneous solvers carry exact zeros on the
    Dirichlet arc nodes; ``solve_linear`` with explicit Dirichlet data
    carries that data instead.
    """

    mesh: Mesh
    values: FloatArray
    fspec: Optional[NonlinearitySpec] = None
    report: Optional[SolveReport] = None

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.shape != (self.mesh.n_vertices,):
            raise ValueError(
                f"need one value per vertex, got {values.shape} for "
                f"{self.mesh.n_vertices} vertices"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


# -- assembly ------------------------------------------------------------------


def _tri_geometry(mesh: Mesh) -> tuple[FloatArray, FloatArray]:
    """Areas (M,) and barycentric gradients (M, 3, 2) of all triangles."""
    pts = mesh.vertices
    tris = mesh.triangles
    a = pts[tris[:, 0]]
    b = pts[tris[:, 1]]
    c = pts[tris[:, 2]]
    e1 = b - a
    e2 = c - a
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    area = 0.5 * det
    grads = np.empty((tris.shape[0], 3, 2))
    grads[:, 1, 0] = e2[:, 1] / det
    grads[:, 1, 1] = -e2[:, 0] / det
    grads[:, 2, 0] = -e1[:, 1] / det
    grads[:, 2, 1] = e1[:, 0] / det
    grads[:, 0] = -grads[:, 1] - grads[:, 2]
    return area, grads


def _scatter(mesh: Mesh, local: FloatArray) -> csc_matrix:
    """Assemble per-triangle 3x3 blocks into a sparse matrix."""
    tris = mesh.triangles
    n = mesh.n_vertices
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    return csc_matrix((local.ravel(), (rows, cols)), shape=(n, n))


def stiffness_matrix(mesh: Mesh) -> csc_matrix:
    """Exact P1 stiffness matrix of the Laplacian."""
    area, grads = _tri_geometry(mesh)
    local = np.einsum("tad,tbd->tab", grads, grads) * area[:, None, None]
    return _scatter(mesh, local)


def mass_matrix(mesh: Mesh) -> csc_matrix:
    """Exact P1 mass matrix."""
    area, _ = _tri_geometry(mesh)
    base = (np.ones((3, 3)) + np.eye(3)) / 12.0
    local = area[:, None, None] * base[None, :, :]
    return _scatter(mesh, local)


def _midpoint_values(mesh: Mesh, coeff: Coefficient) -> FloatArray:
    """Values of a coefficient at the three edge midpoints of each triangle.

    Accepts a constant, a nodal array (one value per vertex, interpolated
    linearly), a per-triangle array (elementwise constant) or a
    ScalarField on the same mesh.  Midpoint order: (v0+v1)/2, (v1+v2)/2,
    (v2+v0)/2.
    """
    m = mesh.n_triangles
    if isinstance(coeff, ScalarField):
        if coeff.mesh is not mesh:
            raise ValueError("coefficient field lives on a different mesh")
        coeff = coeff.values
    if np.isscalar(coeff):
        return np.full((m, 3), float(coeff))
    arr = np.asarray(coeff, dtype=float)
    if arr.shape == (mesh.n_vertices,):
        u = arr[mesh.triangles]
        return 0.5 * np.stack(
            [u[:, 0] + u[:, 1], u[:, 1] + u[:, 2], u[:, 2] + u[:, 0]], axis=1
        )
    if arr.shape == (m,):
        return np.repeat(arr[:, None], 3, axis=1)
    raise ValueError(f"cannot interpret coefficient of shape {arr.shape}")


def weighted_mass_matrix(mesh: Mesh, weight: Coefficient) -> csc_matrix:
    """Midpoint-rule mass matrix with a spatial weight."""
    area, _ = _tri_geometry(mesh)
    w = _midpoint_values(mesh, weight)
    local = np.zeros((mesh.n_triangles, 3, 3))
    scale = area / 12.0
    for k, (i, j) in enumerate(((0, 1), (1, 2), (2, 0))):
        wm = scale * w[:, k]
        local[:, i, i] += wm
        local[:, j, j] += wm
        local[:, i, j] += wm
        local[:, j, i] += wm
    return _scatter(mesh, local)


def load_vector(mesh: Mesh, source: Coefficient) -> FloatArray:
    """Midpoint-rule load vector for the volume term integral(source * v)."""
    area, _ = _tri_geometry(mesh)
    g = _midpoint_values(mesh, source)
    scale = area / 6.0
    out = np.zeros(mesh.n_vertices)
    tris = mesh.triangles
    np.add.at(out, tris[:, 0], scale * (g[:, 0] + g[:, 2]))
    np.add.at(out, tris[:, 1], scale * (g[:, 0] + g[:, 1]))
    np.add.at(out, tris[:, 2], scale * (g[:, 1] + g[:, 2]))
    return out


def neumann_load(mesh: Mesh, data: Union[float, Callable[[float, float], float]]) -> FloatArray:
    """Boundary load integral(g * v) over both straight sides."""
    out = np.zeros(mesh.n_vertices)
    if isinstance(data, (int, float)) and float(data) == 0.0:
        return out
    for e in mesh.boundary_edges:
        if e.tag == DIRICHLET_ARC:
            continue
        p0 = mesh.vertices[e.v0]
        p1 = mesh.vertices[e.v1]
        length = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
        mx, my = 0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])
        g = float(data) if np.isscalar(data) else float(data(mx, my))
        out[e.v0] += 0.5 * length * g
        out[e.v1] += 0.5 * length * g
    return out


def dirichlet_nodes(mesh: Mesh) -> NDArray[np.int64]:
    """Vertex indices where the Dirichlet condition is imposed."""
    return boundary_vertices(mesh, DIRICHLET_ARC)


def _free_mask(mesh: Mesh) -> NDArray[np.bool_]:
    mask = np.ones(mesh.n_vertices, dtype=bool)
    mask[dirichlet_nodes(mesh)] = False
    return mask


def _lu(matrix: csc_matrix, context: str):
    try:
        lu = splu(matrix)
    except RuntimeError as exc:
        raise RuntimeError(f"singular system in {context}: {exc}") from exc
    if not np.isfinite(lu.U.diagonal()).all() or (
        np.abs(lu.U.diagonal()) < 1e-300
    ).any():
        raise RuntimeError(f"singular system in {context}")
    return lu


# -- solvers -------------------------------------------------------------------


def solve_linear(
    mesh: Mesh,
    c: Coefficient,
    source: Coefficient,
    dirichlet_data: Union[float, Callable[[float, float], float]] = 0.0,
    neumann_data: Union[float, Callable[[float, float], float]] = 0.0,
) -> ScalarField:
    """Solve Delta u + c(x) u = source with mixed boundary conditions.

    ``c`` and ``source`` accept constants, nodal arrays, per-triangle
    arrays or fields.  Dirichlet data is imposed strongly on the arc
    nodes, Neumann data enters as a boundary load on the straight sides.
    """
    K = stiffness_matrix(mesh)
    system = K if _is_zero(c) else K - weighted_mass_matrix(mesh, c)
    rhs = -load_vector(mesh, source) if not _is_zero(source) else np.zeros(
        mesh.n_vertices
    )
    rhs += neumann_load(mesh, neumann_data)

    values = np.zeros(mesh.n_vertices)
    dir_ids = dirichlet_nodes(mesh)
    if np.isscalar(dirichlet_data):
        values[dir_ids] = float(dirichlet_data)
    else:
        for i in dir_ids:
            values[i] = float(dirichlet_data(mesh.vertices[i, 0], mesh.vertices[i, 1]))

    free = _free_mask(mesh)
    system_csr = system.tocsr()
    rhs_free = rhs[free] - system_csr[free][:, ~free] @ values[~free]
    lu = _lu(system_csr[free][:, free].tocsc(), "solve_linear")
    values[free] = lu.solve(rhs_free)
    return ScalarField(mesh=mesh, values=values)


def _is_zero(coeff: Coefficient) -> bool:
    return np.isscalar(coeff) and float(coeff) == 0.0


def solve_semilinear(
    mesh: Mesh,
    fspec: NonlinearitySpec,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_NEWTON,
    initial_guess: Optional[FloatArray] = None,
) -> tuple[ScalarField, SolveReport]:
    """Damped Newton for Delta u + f(u) = 0 with the mixed conditions.

    The initial guess defaults to the solution of the const(1) problem.
    Each step solves with the exact Jacobian; the step is halved while
    the residual norm would increase (down to 1/64).  Raises on Newton
    divergence and on a singular Jacobian, which typically signals f'
    at or beyond the principal eigenvalue.
    """
    K = stiffness_matrix(mesh).tocsr()
    free = _free_mask(mesh)

    if initial_guess is None:
        u = solve_linear(mesh, 0.0, -1.0).values.copy()
    else:
        u = np.asarray(initial_guess, dtype=float).copy()
        if u.shape != (mesh.n_vertices,):
            raise ValueError("initial guess must have one value per vertex")
    u[~free] = 0.0

    def residual(vec: FloatArray) -> FloatArray:
        return (K @ vec - load_vector(mesh, fspec.f(vec)))[free]

    history = []
    damping_events = 0
    r = residual(u)
    r_norm = float(np.linalg.norm(r))
    history.append(r_norm)
    iterations = 0
    while r_norm > tol:
        if iterations >= max_iter:
            raise RuntimeError(
                f"Newton did not converge in {max_iter} steps "
                f"(residual {r_norm:.3e})"
            )
        J = K - weighted_mass_matrix(mesh, fspec.fprime(u)).tocsr()
        lu = _lu(J[free][:, free].tocsc(), "solve_semilinear")
        delta = np.zeros(mesh.n_vertices)
        delta[free] = lu.solve(-r)
        step = 1.0
        while step >= _MIN_STEP:
            trial = u + step * delta
            trial_r = residual(trial)
            trial_norm = float(np.linalg.norm(trial_r))
            if trial_norm < r_norm or step * 0.5 < _MIN_STEP:
                break
            step *= 0.5
            damping_events += 1
        u = u + step * delta
        r = trial_r
        r_norm = trial_norm
        history.append(r_norm)
        iterations += 1

    report = SolveReport(
        newton_iterations=iterations,
        residual_norm=r_norm,
        min_interior_value=float(u[free].min()),
        damping_events=damping_events,
        residual_history=tuple(history),
    )
    field = ScalarField(mesh=mesh, values=u, fspec=fspec, report=report)
    return field, report


def principal_eigenvalue(
    mesh: Mesh,
    rel_tol: float = EIGEN_REL_TOL,
    max_iter: int = MAX_EIGEN_ITER,
) -> tuple[float, ScalarField]:
    """Smallest mixed-condition eigenvalue of -Delta by inverse power.

    Returns the eigenvalue and the eigenfield normalized to maximum 1
    (nonnegative up to iteration tolerance).
    """
    K = stiffness_matrix(mesh).tocsr()
    M = mass_matrix(mesh).tocsr()
    free = _free_mask(mesh)
    K_ff = K[free][:, free].tocsc()
    M_ff = M[free][:, free].tocsr()
    lu = _lu(K_ff, "principal_eigenvalue")

    x = np.ones(int(free.sum()))
    x /= math.sqrt(float(x @ (M_ff @ x)))
    lam_prev = math.inf
    for _ in range(max_iter):
        y = lu.solve(M_ff @ x)
        norm = math.sqrt(float(y @ (M_ff @ y)))
        x = y / norm
        lam = float(x @ (K_ff @ x)) / float(x @ (M_ff @ x))
        if abs(lam - lam_prev) <= rel_tol * abs(lam):
            break
        lam_prev = lam
    else:
        raise RuntimeError(f"eigenvalue iteration did not converge in {max_iter} steps")

    values = np.zeros(mesh.n_vertices)
    values[free] = x
    peak = values[np.argmax(np.abs(values))]
    if peak < 0.0:
        values = -values
    values /= values.max()
    return lam, ScalarField(mesh=mesh, values=values)


# -- evaluation ----------------------------------------------------------------


def evaluate(field: ScalarField, x: tuple[float, float]) -> float:
    """Barycentric-linear value of the field at a point."""
    tri, bary = locate(field.mesh, x)
    ids = field.mesh.triangles[tri]
    return float(
        bary[0] * field.values[ids[0]]
        + bary[1] * field.values[ids[1]]
        + bary[2] * field.values[ids[2]]
    )


def gradient(field: ScalarField, x: tuple[float, float]) -> tuple[float, float]:
    """Piecewise-constant gradient of the field at a point.

    Inside a triangle this is that triangle's gradient; on a shared edge
    or vertex it is the average over all containing triangles.
    """
    mesh = field.mesh
    px, py = float(x[0]), float(x[1])
    key = (math.floor(px / mesh._cell), math.floor(py / mesh._cell))
    candidates = mesh._grid.get(key)
    if candidates is None:
        raise ValueError(f"point {x} is outside the meshed region")
    d = np.array([px, py]) - mesh._v0[candidates]
    b12 = np.einsum("tij,tj->ti", mesh._tinv[candidates], d)
    b0 = 1.0 - b12[:, 0] - b12[:, 1]
    inside = (
        (b12[:, 0] >= -_EDGE_BARY_TOL)
        & (b12[:, 1] >= -_EDGE_BARY_TOL)
        & (b0 >= -_EDGE_BARY_TOL)
    )
    hits = np.asarray(candidates)[inside]
    if hits.size == 0:
        raise ValueError(f"point {x} is outside the meshed region")
    gx = gy = 0.0
    for t in hits:
        ids = mesh.triangles[t]
        g1 = mesh._tinv[t, 0]
        g2 = mesh._tinv[t, 1]
        g0 = -g1 - g2
        u0, u1, u2 = field.values[ids]
        gx += u0 * g0[0] + u1 * g1[0] + u2 * g2[0]
        gy += u0 * g0[1] + u1 * g1[1] + u2 * g2[1]
    return (gx / hits.size, gy / hits.size)


def l2_difference(field: ScalarField, exact: Callable[[float, float], float]) -> float:
    """Midpoint-rule L2 norm of (field - exact) over the mesh."""
    mesh = field.mesh
    area, _ = _tri_geometry(mesh)
    pts = mesh.vertices
    tris = mesh.triangles
    u = field.values[tris]
    total = 0.0
    corners = pts[tris]
    mids = 0.5 * (corners + np.roll(corners, -1, axis=1))
    u_mid = 0.5 * (u + np.roll(u, -1, axis=1))
    for k in range(3):
        ex = np.array([exact(mx, my) for mx, my in mids[:, k]])
        total += float(((u_mid[:, k] - ex) ** 2 * area / 3.0).sum())
    return math.sqrt(total)


# -- serialization -------------------------------------------------------------


def field_to_json(field: ScalarField, mesh_ref: Optional[str] = None) -> str:
    """Serialize a field; the mesh is embedded unless a reference is given."""
    payload: dict = {"values": field.values.tolist()}
    if mesh_ref is not None:
        payload["mesh_ref"] = mesh_ref
    else:
        from .mesh import to_json as mesh_to_json

        payload["mesh"] = json.loads(mesh_to_json(field.mesh))
    payload["fspec"] = field.fspec.to_dict() if field.fspec else None
    payload["solve_report"] = field.report.to_dict() if field.report else None
    return json.dumps(payload)


def field_from_json(text: str, mesh: Optional[Mesh] = None) -> ScalarField:
    """Rebuild a field; supply the mesh when it was stored by reference."""
    payload = json.loads(text)
    if "mesh" in payload:
        mesh = mesh_from_json(json.dumps(payload["mesh"]))
    elif mesh is None:
        raise ValueError("field was serialized by reference; a mesh is required")
    fspec = (
        NonlinearitySpec.from_dict(payload["fspec"]) if payload.get("fspec") else None
    )
    report = (
        SolveReport.from_dict(payload["solve_report"])
        if payload.get("solve_report")
        else None
    )
    return ScalarField(
        mesh=mesh,
        values=np.array(payload["values"], dtype=float),
        fspec=fspec,
        report=report,
    )
