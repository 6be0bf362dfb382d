"""Verification toolkit for symmetry and monotonicity of positive solutions
of semilinear Poisson problems on planar sub-spherical sectors.

The domain is a circular-arc triangle: a wedge of opening ``beta`` with
vertex at the origin, truncated by a unit circle whose center sits on the
wedge bisector so that the arc subtends an angle ``alpha`` at its center.
The arc carries a homogeneous Dirichlet condition, the two straight sides
carry homogeneous Neumann conditions.

Subpackages split along capability lines:

- :mod:`sector_symmetry.sector_geometry`: the domain, the family of moving
  lines anchored on the lower straight side, reflections, caps and the
  derived critical distances and angles.
- :mod:`sector_symmetry.angle_relations`: synthetic-triangle inequalities
  between the angles a moving line makes with the lower side.
- :mod:`sector_symmetry.mesh`: graded conforming triangulations.
- :mod:`sector_symmetry.pde_solver`: piecewise-linear finite elements for
  the semilinear problem, linear problems and the principal eigenvalue.
- :mod:`sector_symmetry.sobolev_mp`: barrier thresholds and Sobolev-ratio
  measurements backing the narrow-region maximum principles.
- :mod:`sector_symmetry.moving_plane_audit`: numerical audits of the sign
  predicates that drive the reflection argument.
- :mod:`sector_symmetry.cli_report`: the ``sector-symmetry`` command line.
"""

from sector_symmetry.angle_relations import (
    AngleMargins,
    TriangleConfig,
    check_lemma28,
    f_aux,
)
from sector_symmetry.cli_report import RunConfig, emit_config, parse_config
from sector_symmetry.mesh import Mesh, MeshingError, generate, refine
from sector_symmetry.moving_plane_audit import (
    AuditReport,
    AuditRow,
    audit_sweep,
    audit_tolerance,
    check_w_negative,
    defect_refinement_study,
    directional_sign,
    hw_exponent,
    mark_expected_fail,
    monotonicity_x1,
    monotonicity_x2_half,
    neumann_tangential,
    rotation_v,
    symmetry_defect,
    symmetry_defect_row,
    write_report,
)
from sector_symmetry.pde_solver import (
    NonlinearitySpec,
    ScalarField,
    SolveReport,
    evaluate,
    field_from_json,
    field_to_json,
    gradient,
    l2_difference,
    principal_eigenvalue,
    solve_linear,
    solve_semilinear,
)
from sector_symmetry.sector_geometry import (
    AdmissibleSet,
    DerivedConstants,
    MovingDomain,
    MovingLine,
    SectorSpec,
    critical_angles,
    derive_constants,
    lambda_check,
    lambda_hat,
)
from sector_symmetry.sobolev_mp import (
    BarrierReport,
    SectorSlice,
    SliceReport,
    bessel_j0_first_zero,
    check_barrier_narrow,
    check_barrier_sector,
    lower_bound_curve,
    verify_small_volume_mp,
)

__all__ = [
    "AdmissibleSet",
    "AngleMargins",
    "AuditReport",
    "AuditRow",
    "BarrierReport",
    "DerivedConstants",
    "Mesh",
    "MeshingError",
    "MovingDomain",
    "MovingLine",
    "NonlinearitySpec",
    "RunConfig",
    "ScalarField",
    "SectorSlice",
    "SectorSpec",
    "SliceReport",
    "SolveReport",
    "TriangleConfig",
    "audit_sweep",
    "audit_tolerance",
    "bessel_j0_first_zero",
    "check_barrier_narrow",
    "check_barrier_sector",
    "check_lemma28",
    "check_w_negative",
    "critical_angles",
    "defect_refinement_study",
    "derive_constants",
    "directional_sign",
    "emit_config",
    "evaluate",
    "f_aux",
    "field_from_json",
    "field_to_json",
    "generate",
    "gradient",
    "hw_exponent",
    "l2_difference",
    "lambda_check",
    "lambda_hat",
    "lower_bound_curve",
    "mark_expected_fail",
    "monotonicity_x1",
    "monotonicity_x2_half",
    "neumann_tangential",
    "parse_config",
    "principal_eigenvalue",
    "refine",
    "rotation_v",
    "solve_linear",
    "solve_semilinear",
    "symmetry_defect",
    "symmetry_defect_row",
    "verify_small_volume_mp",
    "write_report",
]

__version__ = "0.1.0"
