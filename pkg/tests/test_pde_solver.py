"""Tests for the P1 solver: exact solutions, rates, eigenvalues, Newton."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from scipy.sparse import csc_matrix

import oracles as orc
import sector_symmetry.mesh as msh
import sector_symmetry.pde_solver as pde
from sector_symmetry.sector_geometry import SectorSpec

QUARTER = SectorSpec(math.pi / 2.0, math.pi / 2.0)
WIDE = SectorSpec(2.0 * math.pi / 3.0, 5.0 * math.pi / 12.0)

_CACHE: dict = {}


def _mesh(key: str) -> msh.Mesh:
    if key not in _CACHE:
        if key == "radial":
            _CACHE[key] = msh.generate(QUARTER, 0.08, symmetric=True, grading=2.0)
        elif key == "radial_fine":
            _CACHE[key] = msh.refine(_mesh("radial"))
        elif key == "radial_finest":
            _CACHE[key] = msh.refine(_mesh("radial_fine"))
        elif key == "wide":
            _CACHE[key] = msh.generate(WIDE, 0.05, grading=2.0)
        elif key == "wide_fine":
            _CACHE[key] = msh.generate(WIDE, 0.02, grading=2.0)
    return _CACHE[key]


def _positive_seed(mesh: msh.Mesh) -> np.ndarray:
    """One-mode Galerkin seed for the positive branch of power(1, 2)."""
    lam1, phi = pde.principal_eigenvalue(mesh)
    mass = pde.mass_matrix(mesh)
    quad = float(phi.values @ (mass @ phi.values))
    cubic = float(pde.load_vector(mesh, phi.values**2) @ phi.values)
    return lam1 * quad / cubic * phi.values


# -- nonlinearity specs --------------------------------------------------------


def test_nonlinearity_values_and_derivatives() -> None:
    u = np.array([-2.0, 0.0, 0.5, 3.0])
    c = pde.NonlinearitySpec.const(2.5)
    assert np.array_equal(c.f(u), np.full(4, 2.5))
    assert np.array_equal(c.fprime(u), np.zeros(4))
    lin = pde.NonlinearitySpec.linear(3.0)
    assert np.array_equal(lin.f(u), 3.0 * u)
    assert np.array_equal(lin.fprime(u), np.full(4, 3.0))
    pw = pde.NonlinearitySpec.power(2.0, 2.0)
    assert np.allclose(pw.f(u), [-8.0, 0.0, 0.5, 18.0])
    assert np.allclose(pw.fprime(u), [8.0, 0.0, 2.0, 12.0])


def test_power_odd_extension_is_odd() -> None:
    pw = pde.NonlinearitySpec.power(1.0, 1.5)
    u = np.array([0.3, 1.7])
    assert np.allclose(pw.f(-u), -pw.f(u))


def test_power_requires_lipschitz_exponent() -> None:
    with pytest.raises(ValueError):
        pde.NonlinearitySpec.power(1.0, 0.5)


def test_tabulated_interpolation_and_slopes() -> None:
    tab = pde.NonlinearitySpec.tabulated([0.0, 1.0, 2.0], [0.0, 2.0, 3.0])
    u = np.array([-1.0, 0.5, 1.5, 5.0])
    assert np.allclose(tab.f(u), [0.0, 1.0, 2.5, 3.0])
    assert np.allclose(tab.fprime(u), [0.0, 2.0, 1.0, 0.0])


def test_tabulated_validation() -> None:
    with pytest.raises(ValueError):
        pde.NonlinearitySpec.tabulated([0.0], [1.0])
    with pytest.raises(ValueError):
        pde.NonlinearitySpec.tabulated([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        pde.NonlinearitySpec.tabulated([0.0, 1.0], [1.0])


def test_nonlinearity_dict_round_trip() -> None:
    specs = [
        pde.NonlinearitySpec.const(1.5),
        pde.NonlinearitySpec.linear(-2.0),
        pde.NonlinearitySpec.power(0.5, 3.0),
        pde.NonlinearitySpec.tabulated([0.0, 1.0], [1.0, 4.0]),
    ]
    for spec in specs:
        assert pde.NonlinearitySpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        pde.NonlinearitySpec.from_dict({"kind": "rational"})


# -- fields and assembly -------------------------------------------------------


def test_field_shape_validation() -> None:
    mesh = _mesh("radial")
    with pytest.raises(ValueError):
        pde.ScalarField(mesh=mesh, values=np.zeros(3))


def test_field_values_write_locked() -> None:
    field = pde.solve_linear(_mesh("radial"), 0.0, -1.0)
    with pytest.raises(ValueError):
        field.values[0] = 1.0


def test_stiffness_kernel_contains_constants() -> None:
    K = pde.stiffness_matrix(_mesh("radial"))
    ones = np.ones(K.shape[0])
    assert np.abs(K @ ones).max() <= 1e-12


def test_mass_total_equals_mesh_area() -> None:
    mesh = _mesh("radial")
    M = pde.mass_matrix(mesh)
    total = float(np.ones(M.shape[0]) @ (M @ np.ones(M.shape[0])))
    assert total == pytest.approx(msh.mesh_area(mesh), abs=1e-13)


def test_weighted_mass_with_unit_weight_is_mass() -> None:
    mesh = _mesh("radial")
    M = pde.mass_matrix(mesh).toarray()
    W = pde.weighted_mass_matrix(mesh, 1.0).toarray()
    assert np.abs(M - W).max() <= 1e-14


def test_load_vector_of_one_sums_to_area() -> None:
    mesh = _mesh("radial")
    load = pde.load_vector(mesh, 1.0)
    assert float(load.sum()) == pytest.approx(msh.mesh_area(mesh), abs=1e-13)


def test_midpoint_values_dispatch() -> None:
    mesh = _mesh("radial")
    assert pde._midpoint_values(mesh, 2.0).shape == (mesh.n_triangles, 3)
    nodal = np.arange(mesh.n_vertices, dtype=float)
    tri_const = np.arange(mesh.n_triangles, dtype=float)
    assert pde._midpoint_values(mesh, nodal).shape == (mesh.n_triangles, 3)
    per_tri = pde._midpoint_values(mesh, tri_const)
    assert np.array_equal(per_tri[:, 0], tri_const)
    with pytest.raises(ValueError):
        pde._midpoint_values(mesh, np.zeros(7))
    other = pde.ScalarField(mesh=_mesh("wide"), values=np.zeros(_mesh("wide").n_vertices))
    with pytest.raises(ValueError):
        pde._midpoint_values(mesh, other)


# -- linear solves ---------------------------------------------------------------


def test_linear_radial_solution() -> None:
    field = pde.solve_linear(_mesh("radial"), 0.0, -1.0)
    err = pde.l2_difference(field, orc.radial_solution_xy)
    assert err <= 5e-4


def test_linear_zero_data_gives_zero_field() -> None:
    field = pde.solve_linear(_mesh("radial"), 0.0, 0.0)
    assert np.abs(field.values).max() == 0.0


def test_linear_dirichlet_data_imposed_exactly() -> None:
    mesh = _mesh("radial")
    field = pde.solve_linear(mesh, 0.0, 0.0, dirichlet_data=lambda x, y: x - y)
    for i in pde.dirichlet_nodes(mesh):
        x, y = mesh.vertices[i]
        assert field.values[i] == float(x - y)


def test_linear_nonpositive_dirichlet_on_subcritical_slice() -> None:
    # narrow sector, zero-order coefficient at half the principal eigenvalue:
    # the maximum principle keeps the solution nonpositive
    spec = SectorSpec(math.pi / 2.0, math.pi / 6.0)
    mesh = msh.generate(spec, 0.05, grading=2.0)
    lam1, _ = pde.principal_eigenvalue(mesh)
    field = pde.solve_linear(
        mesh, lam1 / 2.0, 0.0, dirichlet_data=lambda x, y: -0.1 - abs(math.sin(3.0 * y))
    )
    assert field.values.max() <= 1e-12


def test_linear_neumann_load_scales_linearly() -> None:
    mesh = _mesh("radial")
    one = pde.solve_linear(mesh, 0.0, 0.0, neumann_data=1.0)
    two = pde.solve_linear(mesh, 0.0, 0.0, neumann_data=2.0)
    assert one.values.max() > 0.0
    assert np.abs(two.values - 2.0 * one.values).max() <= 1e-12


def test_lu_rejects_singular_system() -> None:
    singular = csc_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(RuntimeError, match="singular"):
        pde._lu(singular, "test")


# -- semilinear solves -----------------------------------------------------------


def test_const_zero_returns_zero_in_one_step() -> None:
    field, report = pde.solve_semilinear(_mesh("radial"), pde.NonlinearitySpec.const(0.0))
    assert np.abs(field.values).max() <= 1e-12
    assert report.newton_iterations == 1
    assert report.residual_norm <= pde.DEFAULT_TOL


def test_const_one_matches_radial_solution() -> None:
    field, report = pde.solve_semilinear(_mesh("radial"), pde.NonlinearitySpec.const(1.0))
    assert pde.l2_difference(field, orc.radial_solution_xy) <= 5e-4
    assert report.residual_norm <= pde.DEFAULT_TOL


def test_const_one_l2_rate_at_least_1_8() -> None:
    errs = []
    for key in ("radial", "radial_fine", "radial_finest"):
        field, _ = pde.solve_semilinear(_mesh(key), pde.NonlinearitySpec.const(1.0))
        errs.append(pde.l2_difference(field, orc.radial_solution_xy))
    rates = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(rates) >= 1.8


def test_const_one_interior_strictly_positive() -> None:
    _, report = pde.solve_semilinear(_mesh("wide"), pde.NonlinearitySpec.const(1.0))
    assert report.min_interior_value > 0.0
    assert report.positive


def test_solution_mirror_invariant_on_symmetric_mesh() -> None:
    mesh = _mesh("radial")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    index = {(float(x), float(y)): i for i, (x, y) in enumerate(mesh.vertices)}
    perm = np.array([index[(float(x), float(-y))] for x, y in mesh.vertices])
    assert np.abs(field.values - field.values[perm]).max() <= 1e-12


def test_power_positive_branch() -> None:
    mesh = _mesh("wide_fine")
    field, report = pde.solve_semilinear(
        mesh, pde.NonlinearitySpec.power(1.0, 2.0), initial_guess=_positive_seed(mesh)
    )
    assert report.residual_norm <= 1e-10
    assert report.min_interior_value > 0.0


def test_power_default_guess_reaches_trivial_branch() -> None:
    # from the small default seed Newton contracts to the trivial solution;
    # the solver reports the basin it reached, nothing more
    field, report = pde.solve_semilinear(_mesh("wide"), pde.NonlinearitySpec.power(1.0, 2.0))
    assert np.abs(field.values).max() <= 1e-6
    assert report.residual_norm <= 1e-10


def test_newton_quadratic_tail() -> None:
    mesh = _mesh("wide_fine")
    _, report = pde.solve_semilinear(
        mesh, pde.NonlinearitySpec.power(1.0, 2.0), initial_guess=_positive_seed(mesh)
    )
    hist = report.residual_history
    checked = 0
    for r_k, r_next in zip(hist, hist[1:]):
        if r_k <= 1e-4:
            assert r_next <= max(1000.0 * r_k * r_k, 1e-13)
            checked += 1
    assert checked >= 1


def test_damped_step_recovers_from_overshoot() -> None:
    mesh = _mesh("wide")
    seed = 8.0 * _positive_seed(mesh)
    _, report = pde.solve_semilinear(
        mesh, pde.NonlinearitySpec.power(1.0, 2.0), initial_guess=seed
    )
    assert report.damping_events >= 1
    assert report.residual_norm <= pde.DEFAULT_TOL
    assert report.min_interior_value > 0.0


def test_newton_divergence_raises() -> None:
    mesh = _mesh("wide")
    seed = 50.0 * _positive_seed(mesh)
    with pytest.raises(RuntimeError, match="did not converge"):
        pde.solve_semilinear(mesh, pde.NonlinearitySpec.power(1.0, 2.0), initial_guess=seed)


def test_initial_guess_shape_validated() -> None:
    with pytest.raises(ValueError):
        pde.solve_semilinear(
            _mesh("radial"), pde.NonlinearitySpec.const(1.0), initial_guess=np.zeros(2)
        )


def test_dirichlet_nodes_carry_exact_zero() -> None:
    mesh = _mesh("wide")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    assert all(field.values[i] == 0.0 for i in pde.dirichlet_nodes(mesh))


# -- eigenvalue ------------------------------------------------------------------


def test_principal_eigenvalue_matches_bessel_mode() -> None:
    lam, field = pde.principal_eigenvalue(_mesh("radial_fine"))
    exact = orc.J0_FIRST_ZERO**2
    assert abs(lam - exact) / exact <= 0.01
    assert field.values.max() == 1.0
    assert field.values.min() >= -1e-10


def test_eigenvalue_decreases_as_domain_grows() -> None:
    # numerical observation, not a theorem: growing the arc opening at
    # fixed wedge angle enlarges the domain and lowers the eigenvalue
    lams = []
    for alpha in (math.pi / 2.0, 3.0 * math.pi / 4.0, math.pi):
        mesh = msh.generate(SectorSpec(alpha, math.pi / 2.0), 0.05, grading=2.0)
        lam, _ = pde.principal_eigenvalue(mesh)
        lams.append(lam)
    assert lams[0] > lams[1] > lams[2]


def test_eigenvalue_iteration_limit_raises() -> None:
    with pytest.raises(RuntimeError, match="did not converge"):
        pde.principal_eigenvalue(_mesh("radial"), rel_tol=1e-30, max_iter=2)


# -- evaluation ------------------------------------------------------------------


def test_evaluate_at_vertices_is_nodal() -> None:
    mesh = _mesh("wide")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    for i in (0, 7, mesh.n_vertices - 1):
        x, y = mesh.vertices[i]
        assert pde.evaluate(field, (float(x), float(y))) == pytest.approx(
            field.values[i], abs=1e-12
        )
    arc = pde.dirichlet_nodes(mesh)[3]
    x, y = mesh.vertices[arc]
    assert pde.evaluate(field, (float(x), float(y))) == 0.0


def test_gradient_of_radial_field() -> None:
    mesh = _mesh("radial_fine")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    for x in ((0.3, 0.1), (0.5, -0.2), (0.2, 0.0)):
        gx, gy = pde.gradient(field, x)
        ex, ey = orc.radial_gradient(x)
        assert math.hypot(gx - ex, gy - ey) <= 2.0 * mesh.h


def test_gradient_on_shared_edge_averages_neighbors() -> None:
    mesh = _mesh("wide")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    counts: dict[tuple[int, int], list[int]] = {}
    for t, (a, b, c) in enumerate(mesh.triangles.tolist()):
        for u, v in ((a, b), (b, c), (c, a)):
            counts.setdefault((min(u, v), max(u, v)), []).append(t)
    shared = next(k for k, v in counts.items() if len(v) == 2)
    tris = counts[shared]

    def tri_gradient(t: int) -> np.ndarray:
        ids = mesh.triangles[t]
        pts = mesh.vertices[ids]
        mat = np.column_stack([pts, np.ones(3)])
        coef = np.linalg.solve(mat, field.values[ids])
        return coef[:2]

    mid = 0.5 * (mesh.vertices[shared[0]] + mesh.vertices[shared[1]])
    got = np.array(pde.gradient(field, (float(mid[0]), float(mid[1]))))
    want = 0.5 * (tri_gradient(tris[0]) + tri_gradient(tris[1]))
    assert np.abs(got - want).max() <= 1e-10


def test_evaluate_outside_raises() -> None:
    field = pde.solve_linear(_mesh("wide"), 0.0, -1.0)
    with pytest.raises(ValueError):
        pde.evaluate(field, (9.0, 9.0))
    with pytest.raises(ValueError):
        pde.gradient(field, (9.0, 9.0))


def test_l2_difference_exact_for_linear_interpolants() -> None:
    mesh = _mesh("radial")
    values = 2.0 * mesh.vertices[:, 0] + 3.0 * mesh.vertices[:, 1]
    field = pde.ScalarField(mesh=mesh, values=values)
    assert pde.l2_difference(field, lambda x, y: 2.0 * x + 3.0 * y) <= 1e-13


# -- serialization ---------------------------------------------------------------


def test_field_json_round_trip_embedded() -> None:
    field, _ = pde.solve_semilinear(_mesh("radial"), pde.NonlinearitySpec.const(1.0))
    back = pde.field_from_json(pde.field_to_json(field))
    assert np.array_equal(back.values, field.values)
    assert back.fspec == field.fspec
    assert back.report == field.report
    assert np.array_equal(back.mesh.vertices, field.mesh.vertices)


def test_field_json_round_trip_by_reference() -> None:
    mesh = _mesh("radial")
    field, _ = pde.solve_semilinear(mesh, pde.NonlinearitySpec.const(1.0))
    text = pde.field_to_json(field, mesh_ref="mesh.json")
    assert json.loads(text)["mesh_ref"] == "mesh.json"
    back = pde.field_from_json(text, mesh=mesh)
    assert np.array_equal(back.values, field.values)
    with pytest.raises(ValueError):
        pde.field_from_json(text)
