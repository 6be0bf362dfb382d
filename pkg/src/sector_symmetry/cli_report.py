"""Command-line front end: configuration, run orchestration, and reports.

Subcommands surface the derived sector constants, the randomized
pivot-angle inequality sweep, the mixed-condition solver, the symmetry
and monotonicity audits, the functional-inequality instrumentation, and
a standalone SVG rendering of solved fields and audit reports.

Conventions shared by every subcommand: angles are radians (degree-sized
inputs are rejected by the sector validation), artifacts are written
atomically via a sibling temp file and rename, and any nonzero exit
leaves a machine-readable ``{"code": ..., "message": ...}`` JSON object
on stderr.  Exit codes: 0 all checks pass, 1 a check failed, 2 usage
error, 3 internal error.  ``SECTOR_SYMMETRY_THREADS`` caps sweep
parallelism.  Configs are TOML, machine artifacts JSON, reports CSV,
plots SVG.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import fields as dataclass_fields
from typing import Callable, Optional, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib  # type: ignore[no-redef]

import click
import numpy as np

from .angle_relations import TriangleConfig, check_lemma28
from .mesh import MeshingError, generate
from .moving_plane_audit import (
    CSV_COLUMNS,
    KAPPA,
    AuditReport,
    audit_sweep,
    audit_tolerance,
    monotonicity_x1,
    monotonicity_x2_half,
    report_data_lines,
    symmetry_defect_row,
)
from .pde_solver import (
    NonlinearitySpec,
    ScalarField,
    field_from_json,
    field_to_json,
    principal_eigenvalue,
    solve_semilinear,
)
from .sector_geometry import (
    SectorSpec,
    critical_angles,
    derive_constants,
    lambda_check,
    lambda_hat,
)
from .sobolev_mp import (
    NODAL_TOL,
    SectorSlice,
    bessel_j0_first_zero,
    check_barrier_narrow,
    check_barrier_sector,
    lower_bound_curve,
    verify_small_volume_mp,
)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

THREADS_ENV = "SECTOR_SYMMETRY_THREADS"
SOLUTION_KIND = "sector-symmetry-solution"
EIGEN_KIND = "sector-symmetry-eigen"
DEFAULT_F = "const:1.0"
DEFAULT_H = 0.05
DEFAULT_GRADING = 2.0
DEFAULT_FILL = 3
ANGLE_SAMPLE_BETA_MIN = 0.05
BOUNDARY_LAYER_S = 1e-3
MARGIN_FLOOR = 1e-10
DEFAULT_SOBOLEV_BETAS = (math.pi / 8.0, math.pi / 4.0, math.pi / 2.0)
DOUBLING_SLACK = 1e-3
# pivot grid multipliers for audits that do not name their own distances,
# capped inside the admissible range
DEFAULT_LAMBDA_MULTIPLIERS = (0.5, 1.0, 1.5)
LAMBDA_CAP_FRACTION = 0.95
SWEEP_PASS_LINE = "all symmetry and monotonicity checks pass"

PANEL_W = 380
PANEL_H = 360
PANEL_GAP = 30
PANEL_MARGIN = 20


class CliError(Exception):
    """Failure carrying the exit code for the machine-readable envelope."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message


def thread_cap() -> int:
    """Worker cap from SECTOR_SYMMETRY_THREADS, defaulting to the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise CliError(
            EXIT_USAGE, f"{THREADS_ENV} must be a positive integer, got {raw!r}"
        )
    return value


def _atomic_write_text(path: str, text: str) -> None:
    """Write through a sibling temp file so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".partial-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _fmt(x: float) -> str:
    # + 0.0 folds negative zero so tables do not show -0.0
    return repr(float(x) + 0.0)


# -- nonlinearity flag form ------------------------------------------------------


def parse_nonlinearity(text: str) -> NonlinearitySpec:
    """Parse the flag form const:c, linear:mu, or power:c,p."""
    usage = (
        f"cannot parse reaction term {text!r}; expected const:c, linear:mu, "
        "or power:c,p"
    )
    kind, sep, args = text.partition(":")
    if not sep:
        raise ValueError(usage)
    try:
        numbers = [float(part) for part in args.split(",")]
    except ValueError:
        raise ValueError(usage) from None
    if kind == "const" and len(numbers) == 1:
        return NonlinearitySpec.const(numbers[0])
    if kind == "linear" and len(numbers) == 1:
        return NonlinearitySpec.linear(numbers[0])
    if kind == "power" and len(numbers) == 2:
        return NonlinearitySpec.power(numbers[0], numbers[1])
    raise ValueError(usage)


def nonlinearity_label(fspec: NonlinearitySpec) -> str:
    """Canonical flag form of a reaction term; inverse of parse_nonlinearity."""
    if fspec.kind == "const":
        return f"const:{fspec.c!r}"
    if fspec.kind == "linear":
        return f"linear:{fspec.mu!r}"
    if fspec.kind == "power":
        return f"power:{fspec.c!r},{fspec.p!r}"
    raise ValueError(f"reaction term kind {fspec.kind!r} has no flag form")


# -- run configuration -----------------------------------------------------------

_GRID_KEYS = {"alphas", "betas", "lambdas", "thetas"}
_MESH_KEYS = {"h", "grading", "symmetric"}
_PROBLEM_KEYS = {"f"}
_RUN_KEYS = {"fill", "out", "seed", "tol"}


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one sweep run; reproducible from the config and seed."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    lambdas: tuple[float, ...]
    thetas: tuple[float, ...] = ()
    h: float = DEFAULT_H
    grading: float = DEFAULT_GRADING
    symmetric: bool = False
    f: NonlinearitySpec = NonlinearitySpec.const(1.0)
    fill: int = DEFAULT_FILL
    out: str = "sweep.csv"
    seed: int = 0
    tol: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("alphas", "betas", "lambdas", "thetas"):
            values = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, values)
            if name != "thetas" and not values:
                raise ValueError(f"{name} grid must not be empty")
            if any(not math.isfinite(v) or v <= 0.0 for v in values):
                raise ValueError(f"{name} grid entries must be positive and finite")
        if any(v > math.pi for v in self.alphas + self.betas):
            raise ValueError(
                "angles are radians; alpha and beta cannot exceed pi"
            )
        if isinstance(self.f, str):
            object.__setattr__(self, "f", parse_nonlinearity(self.f))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "grading", float(self.grading))
        object.__setattr__(self, "symmetric", bool(self.symmetric))
        object.__setattr__(self, "fill", int(self.fill))
        object.__setattr__(self, "seed", int(self.seed))
        if self.tol is not None:
            object.__setattr__(self, "tol", float(self.tol))
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise ValueError(f"mesh size must be positive, got {self.h}")
        if not (math.isfinite(self.grading) and self.grading >= 1.0):
            raise ValueError(f"grading must be at least 1, got {self.grading}")
        if self.fill < 1:
            raise ValueError(f"fill must be at least 1, got {self.fill}")
        if not self.out:
            raise ValueError("output path must not be empty")
        if self.tol is not None and not (math.isfinite(self.tol) and self.tol > 0.0):
            raise ValueError(f"tolerance override must be positive, got {self.tol}")
        nonlinearity_label(self.f)  # rejects kinds without a flag form


def _toml_list(values: Sequence[float]) -> str:
    return "[" + ", ".join(_fmt(v) for v in values) + "]"


def emit_config(config: RunConfig) -> str:
    """Serialize a run configuration as TOML; parse_config inverts this."""
    lines = [
        "# sweep configuration; angles are radians",
        "",
        "[grid]",
        f"alphas = {_toml_list(config.alphas)}",
        f"betas = {_toml_list(config.betas)}",
        f"lambdas = {_toml_list(config.lambdas)}",
        f"thetas = {_toml_list(config.thetas)}",
        "",
        "[mesh]",
        f"h = {_fmt(config.h)}",
        f"grading = {_fmt(config.grading)}",
        f"symmetric = {'true' if config.symmetric else 'false'}",
        "",
        "[problem]",
        f"f = {json.dumps(nonlinearity_label(config.f))}",
        "",
        "[run]",
        f"fill = {config.fill}",
        f"out = {json.dumps(config.out)}",
        f"seed = {config.seed}",
    ]
    if config.tol is not None:
        lines.append(f"tol = {_fmt(config.tol)}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> RunConfig:
    """Parse a TOML run configuration; strict about sections and keys."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ValueError(f"config is not valid TOML: {err}") from None
    allowed = {
        "grid": _GRID_KEYS,
        "mesh": _MESH_KEYS,
        "problem": _PROBLEM_KEYS,
        "run": _RUN_KEYS,
    }
    for section, table in data.items():
        if section not in allowed:
            raise ValueError(f"unknown config section {section!r}")
        if not isinstance(table, dict):
            raise ValueError(f"config section {section!r} must be a table")
        extra = sorted(set(table) - allowed[section])
        if extra:
            raise ValueError(f"unknown keys in [{section}]: {extra}")
    grid = data.get("grid", {})
    for required in ("alphas", "betas", "lambdas"):
        if required not in grid:
            raise ValueError(f"config is missing grid.{required}")
    for key, value in grid.items():
        if not isinstance(value, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
        ):
            raise ValueError(f"grid.{key} must be a list of numbers")
    mesh_opts = data.get("mesh", {})
    problem = data.get("problem", {})
    run = data.get("run", {})
    f_raw = problem.get("f", DEFAULT_F)
    if not isinstance(f_raw, str):
        raise ValueError("problem.f must be a string like const:1.0")
    return RunConfig(
        alphas=tuple(grid["alphas"]),
        betas=tuple(grid["betas"]),
        lambdas=tuple(grid["lambdas"]),
        thetas=tuple(grid.get("thetas", ())),
        h=mesh_opts.get("h", DEFAULT_H),
        grading=mesh_opts.get("grading", DEFAULT_GRADING),
        symmetric=mesh_opts.get("symmetric", False),
        f=parse_nonlinearity(f_raw),
        fill=run.get("fill", DEFAULT_FILL),
        out=run.get("out", "sweep.csv"),
        seed=run.get("seed", 0),
        tol=run.get("tol"),
    )


# -- shared audit assembly -------------------------------------------------------


def default_lambdas(spec: SectorSpec) -> tuple[float, ...]:
    """Half, full, and one-and-a-half reference pivot distances, capped."""
    cst = derive_constants(spec)
    cap = LAMBDA_CAP_FRACTION * cst.lambda_max
    return tuple(
        sorted({min(m * cst.lambda_sharp, cap) for m in DEFAULT_LAMBDA_MULTIPLIERS})
    )


def build_report(
    field: ScalarField,
    lambdas: Sequence[float],
    thetas: Sequence[float] = (),
    fill: int = DEFAULT_FILL,
    tol: Optional[float] = None,
) -> AuditReport:
    """Field-level rows plus the per-line sweep, merged into one report."""
    tolerance = tol if tol is not None else audit_tolerance(field.mesh.h)
    head = (
        symmetry_defect_row(field, tol=tolerance),
        monotonicity_x1(field, tol=tolerance),
        monotonicity_x2_half(field, tol=tolerance),
    )
    swept = audit_sweep(
        field,
        tuple(lambdas),
        fill=fill,
        tol=tolerance,
        thetas=tuple(thetas) or None,
    )
    return AuditReport(
        alpha=swept.alpha,
        beta=swept.beta,
        h=swept.h,
        kappa=swept.kappa,
        tolerance=swept.tolerance,
        rows=head + swept.rows,
    )


def report_text(report: AuditReport) -> str:
    """CSV text of one report, same shape as the module-level writer."""
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
    return "\n".join(lines) + "\n"


def _describe_report(report: AuditReport) -> None:
    click.echo(
        f"audit     alpha={_fmt(report.alpha)} beta={_fmt(report.beta)} "
        f"h={_fmt(report.h)} tolerance={_fmt(report.tolerance)}"
    )
    click.echo(
        f"checks    total={len(report.rows)} regressions={len(report.regressions)}"
    )
    if report.exploratory:
        click.echo(
            "note      the vertex angle exceeds the audited range; "
            "results are exploratory"
        )
    for row in report.regressions:
        click.echo(
            f"FAIL      {row.check_id} lambda={_fmt(row.lam)} theta={_fmt(row.theta)} "
            f"max_violation={_fmt(row.max_violation)} tolerance={_fmt(row.tolerance)}"
        )


# -- commands ----------------------------------------------------------------


def cmd_constants(alpha: float, beta: float, lam: Optional[float] = None) -> None:
    """Print the derived constants, plus the admissible-angle rows at a pivot."""
    spec = SectorSpec(alpha, beta)
    cst = derive_constants(spec)
    rows: list[tuple[str, str]] = [
        ("alpha", _fmt(spec.alpha)),
        ("beta", _fmt(spec.beta)),
        ("theta_top", _fmt(spec.theta_top)),
        ("degenerate", str(spec.is_degenerate)),
    ]
    for fld in dataclass_fields(cst):
        value = getattr(cst, fld.name)
        rows.append((fld.name, "undefined" if value is None else _fmt(value)))
    if lam is not None:
        if not (math.isfinite(lam) and lam > 0.0):
            raise ValueError(f"pivot distance must be positive, got {lam}")
        adm = critical_angles(spec, lam)
        rows.append(("pivot", _fmt(lam)))
        rows.append(("theta_A", _fmt(adm.theta_A)))
        rows.append(("theta_B", _fmt(adm.theta_B)))
        rows.append(("theta_A_cap", _fmt(adm.theta_A_cap)))
        rows.append(("theta_B_cap", _fmt(adm.theta_B_cap)))
        rows.append(
            (
                "admissible",
                " u ".join(f"({_fmt(lo)}, {_fmt(hi)}]" for lo, hi in adm.intervals),
            )
        )
        for name, fn in (
            ("upper_crossing(pi/2)", lambda_hat),
            ("reflected_return(pi/2)", lambda_check),
        ):
            try:
                rows.append((name, _fmt(fn(spec, lam, 0.5 * math.pi))))
            except ValueError:
                rows.append((name, "undefined (parallel sides at theta = pi/2)"))
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        click.echo(f"{name:<{width}} = {value}")


def cmd_check_angles(
    samples: int,
    beta_max: float = math.pi,
    seed: int = 0,
    margin: float = MARGIN_FLOOR,
    out: Optional[str] = None,
) -> None:
    """Randomized margin sweep of the four pivot-angle inequalities."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if not (ANGLE_SAMPLE_BETA_MIN < beta_max <= math.pi):
        raise ValueError(
            f"beta-max must lie in ({ANGLE_SAMPLE_BETA_MIN!r}, pi], got {beta_max}"
        )
    rng = random.Random(seed)
    names = ("doubling", "steep", "wide", "entry")
    applicable = dict.fromkeys(names, 0)
    enforced = dict.fromkeys(names, 0)
    worst = {name: math.inf for name in names}
    violations = dict.fromkeys(names, 0)
    for _ in range(samples):
        beta = rng.uniform(ANGLE_SAMPLE_BETA_MIN, beta_max)
        alpha = rng.uniform(beta + 1e-6, math.pi)
        s = rng.uniform(1e-12, 1.0 - 1e-12)
        margins = check_lemma28(TriangleConfig(alpha=alpha, beta=beta, s=s))
        for name in names:
            value = getattr(margins, name)
            if value is None:
                continue
            applicable[name] += 1
            if s < BOUNDARY_LAYER_S:
                continue  # margins legitimately vanish as the probe degenerates
            enforced[name] += 1
            worst[name] = min(worst[name], value)
            if value <= margin:
                violations[name] += 1
    for name in names:
        low = "n/a" if enforced[name] == 0 else _fmt(worst[name])
        click.echo(
            f"{name:<9} applicable={applicable[name]} enforced={enforced[name]} "
            f"min_margin={low} violations={violations[name]}"
        )
    if out is not None:
        lines = ["inequality,samples,applicable,enforced,min_margin,violations"]
        for name in names:
            low = "" if enforced[name] == 0 else _fmt(worst[name])
            lines.append(
                f"{name},{samples},{applicable[name]},{enforced[name]},"
                f"{low},{violations[name]}"
            )
        _atomic_write_text(out, "\n".join(lines) + "\n")
        click.echo(f"wrote {out}")
    total = sum(violations.values())
    if total:
        raise CliError(
            EXIT_CHECK_FAILURE, f"{total} margin violations at floor {margin!r}"
        )
    click.echo(f"all margins above {_fmt(margin)} outside the boundary layer")


def cmd_solve(
    alpha: float,
    beta: float,
    h: float,
    symmetric: bool = False,
    grading: float = DEFAULT_GRADING,
    f: str | NonlinearitySpec = DEFAULT_F,
    out: Optional[str] = None,
) -> ScalarField:
    """Solve the mixed problem; optionally persist the solution artifact."""
    fspec = parse_nonlinearity(f) if isinstance(f, str) else f
    spec = SectorSpec(alpha, beta)
    mesh = generate(spec, h, grading=grading, symmetric=symmetric)
    try:
        solution, report = solve_semilinear(mesh, fspec)
    except RuntimeError as err:
        raise CliError(EXIT_CHECK_FAILURE, f"solve failed: {err}") from None
    click.echo(
        f"mesh      vertices={mesh.n_vertices} triangles={mesh.n_triangles} "
        f"h={_fmt(mesh.h)}"
    )
    click.echo(
        f"newton    iterations={report.newton_iterations} "
        f"residual={_fmt(report.residual_norm)} "
        f"damping_events={report.damping_events}"
    )
    click.echo(
        f"solution  min_interior={_fmt(report.min_interior_value)} "
        f"positive={report.positive}"
    )
    if out is not None:
        payload = {
            "kind": SOLUTION_KIND,
            "alpha": spec.alpha,
            "beta": spec.beta,
            "h": float(h),
            "grading": float(grading),
            "symmetric": bool(symmetric),
            "f": nonlinearity_label(fspec),
            "field": json.loads(field_to_json(solution)),
        }
        _atomic_write_text(out, json.dumps(payload))
        click.echo(f"wrote {out}")
    return solution


def load_solution(path: str) -> tuple[ScalarField, dict]:
    """Read a solution artifact written by cmd_solve."""
    try:
        with open(path) as handle:
            payload = json.load(handle)
    except FileNotFoundError:
        raise CliError(EXIT_USAGE, f"no solution artifact at {path!r}") from None
    except json.JSONDecodeError as err:
        raise CliError(
            EXIT_USAGE, f"solution artifact {path!r} is not valid JSON: {err}"
        ) from None
    if not isinstance(payload, dict) or payload.get("kind") != SOLUTION_KIND:
        raise CliError(EXIT_USAGE, f"{path!r} is not a solution artifact")
    solution = field_from_json(json.dumps(payload["field"]))
    return solution, payload


def cmd_audit(
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    h: Optional[float] = None,
    symmetric: bool = False,
    grading: float = DEFAULT_GRADING,
    f: str | NonlinearitySpec = DEFAULT_F,
    solution: Optional[str] = None,
    lambdas: Sequence[float] = (),
    thetas: Sequence[float] = (),
    fill: int = DEFAULT_FILL,
    tol: Optional[float] = None,
    out: Optional[str] = None,
) -> AuditReport:
    """Audit one solved field; nonzero exit when any check regresses."""
    if solution is not None:
        solved, _ = load_solution(solution)
        spec = solved.mesh.spec
        for name, given in (("alpha", alpha), ("beta", beta)):
            stored = getattr(spec, name)
            if given is not None and abs(given - stored) > 1e-12:
                raise ValueError(
                    f"solution artifact has {name}={stored!r}, flag says {given!r}"
                )
    else:
        if alpha is None or beta is None or h is None:
            raise ValueError("need either --solution or all of --alpha, --beta, --h")
        fspec = parse_nonlinearity(f) if isinstance(f, str) else f
        spec = SectorSpec(alpha, beta)
        mesh = generate(spec, h, grading=grading, symmetric=symmetric)
        try:
            solved, _ = solve_semilinear(mesh, fspec)
        except RuntimeError as err:
            raise CliError(EXIT_CHECK_FAILURE, f"solve failed: {err}") from None
    cst = derive_constants(spec)
    lams = tuple(float(v) for v in lambdas) or default_lambdas(spec)
    for lam in lams:
        if not (math.isfinite(lam) and lam > 0.0):
            raise ValueError(f"pivot distances must be positive, got {lam}")
        if lam >= cst.lambda_max:
            raise ValueError(
                f"pivot distance {lam} is at or beyond the largest admissible "
                f"value {cst.lambda_max!r}"
            )
    theta_list = tuple(float(v) for v in thetas)
    for theta in theta_list:
        if not (math.isfinite(theta) and 0.0 < theta <= spec.theta_top):
            raise ValueError(
                f"line angle {theta} outside (0, {spec.theta_top!r}]"
            )
        if not any(
            critical_angles(spec, lam).contains(theta, tol=1e-12) for lam in lams
        ):
            raise ValueError(
                f"line angle {theta} is inadmissible at every requested pivot"
            )
    report = build_report(solved, lambdas=lams, thetas=theta_list, fill=fill, tol=tol)
    _describe_report(report)
    if out is not None:
        _atomic_write_text(out, report_text(report))
        click.echo(f"wrote {out}")
    if not report.passed:
        raise CliError(
            EXIT_CHECK_FAILURE,
            f"{len(report.regressions)} of {len(report.rows)} checks failed",
        )
    return report


def cmd_sweep(
    config_path: Optional[str] = None, config: Optional[RunConfig] = None
) -> tuple[AuditReport, ...]:
    """Solve and audit every configured sector, in parallel across entries."""
    if (config_path is None) == (config is None):
        raise ValueError("pass exactly one of config_path or config")
    if config is None:
        assert config_path is not None
        try:
            with open(config_path) as handle:
                text = handle.read()
        except FileNotFoundError:
            raise CliError(EXIT_USAGE, f"no config file at {config_path!r}") from None
        config = parse_config(text)
    pairs = [
        (a, b)
        for a in sorted(set(config.alphas))
        for b in sorted(set(config.betas))
    ]
    valid = [(a, b) for a, b in pairs if b <= a]
    skipped = [(a, b) for a, b in pairs if b > a]
    if not valid:
        raise ValueError("no valid (alpha, beta) pairs in the grid (need beta <= alpha)")

    def run_entry(pair: tuple[float, float]) -> tuple[AuditReport, tuple[float, ...]]:
        a, b = pair
        tag = f"entry alpha={a!r} beta={b!r}"
        try:
            spec = SectorSpec(a, b)
            cst = derive_constants(spec)
            mesh = generate(
                spec, config.h, grading=config.grading, symmetric=config.symmetric
            )
            solved, _ = solve_semilinear(mesh, config.f)
            keep = tuple(v for v in config.lambdas if v < cst.lambda_max)
            dropped = tuple(v for v in config.lambdas if v >= cst.lambda_max)
            report = build_report(
                solved,
                lambdas=keep,
                thetas=config.thetas,
                fill=config.fill,
                tol=config.tol,
            )
            return report, dropped
        except (ValueError, MeshingError) as err:
            raise CliError(EXIT_USAGE, f"{tag}: {err}") from None
        except RuntimeError as err:
            raise CliError(EXIT_CHECK_FAILURE, f"{tag}: solve failed: {err}") from None

    workers = max(1, min(thread_cap(), len(valid)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run_entry, valid))

    lines = [
        "# sweep h={!r} grading={!r} symmetric={} f={} fill={} seed={} entries={}".format(
            config.h,
            config.grading,
            config.symmetric,
            nonlinearity_label(config.f),
            config.fill,
            config.seed,
            len(valid),
        ),
        CSV_COLUMNS,
    ]
    for report, _ in results:
        lines.extend(report_data_lines(report))
    _atomic_write_text(config.out, "\n".join(lines) + "\n")

    total_regressions = 0
    for (a, b), (report, dropped) in zip(valid, results):
        n_reg = len(report.regressions)
        total_regressions += n_reg
        extra = ""
        if dropped:
            extra += " dropped_lambdas=" + ";".join(_fmt(v) for v in dropped)
        if report.exploratory:
            extra += " exploratory"
        click.echo(
            f"alpha={_fmt(a)} beta={_fmt(b)}: {len(report.rows)} checks, "
            f"{n_reg} regressions{extra}"
        )
    for a, b in skipped:
        click.echo(f"alpha={_fmt(a)} beta={_fmt(b)}: skipped (need beta <= alpha)")
    click.echo(f"wrote {config.out}")
    if total_regressions:
        raise CliError(
            EXIT_CHECK_FAILURE,
            f"{total_regressions} checks failed across {len(valid)} configurations",
        )
    click.echo(SWEEP_PASS_LINE)
    return tuple(report for report, _ in results)


def cmd_sobolev(
    betas: Sequence[float] = (),
    c0: float = 1.0,
    samples: int = 10000,
    seed: int = 0,
    resolution: int = 256,
    slice_radius: Optional[float] = None,
    out: Optional[str] = None,
) -> None:
    """Barrier residual checks plus the reflection-family ratio curve."""
    beta_list = tuple(float(b) for b in betas) or DEFAULT_SOBOLEV_BETAS
    for b in beta_list:
        if not (0.0 < b <= math.pi):
            raise ValueError(f"beta must lie in (0, pi] (radians), got {b}")
    if c0 <= 0.0:
        raise ValueError(f"coefficient bound must be positive, got {c0}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if slice_radius is not None and not (0.0 < slice_radius <= 1.0):
        raise ValueError(f"slice radius must lie in (0, 1], got {slice_radius}")

    rows: list[tuple[str, str, float, float, bool]] = []
    narrow = check_barrier_narrow(c0, samples, seed)
    rows.append(("barrier_narrow", "", narrow.max_residual, 0.0, narrow.max_residual < 0.0))
    sector_rep = check_barrier_sector(c0, samples, seed)
    rows.append(
        ("barrier_sector", "", sector_rep.max_residual, 0.0, sector_rep.max_residual < 0.0)
    )
    for b in beta_list:
        bound = lower_bound_curve(b, resolution=resolution)
        rows.append(("ratio_bound", _fmt(b), bound, bound * math.sqrt(b), bound > 0.0))
        if 2.0 * b <= 2.0 * math.pi:
            doubled = lower_bound_curve(2.0 * b, resolution=resolution)
            ceiling = bound * (1.0 + DOUBLING_SLACK)
            rows.append(("doubling", _fmt(b), doubled, ceiling, doubled <= ceiling))
        if slice_radius is not None:
            try:
                rep = verify_small_volume_mp(
                    SectorSlice(beta=b, radius=slice_radius), c0, seed=seed
                )
            except MeshingError as err:
                # Wedges near the mesh quality floor cannot host slice
                # trials; report the skip instead of aborting the run.
                click.echo(f"small_volume beta={_fmt(b)} skipped: {err}")
                continue
            value = max(t.max_value for t in rep.trials)
            rows.append(("small_volume", _fmt(b), value, NODAL_TOL, rep.passed))
    for name, beta_label, value, reference, passed in rows:
        label = f" beta={beta_label}" if beta_label else ""
        click.echo(
            f"{name:<15}{label} value={_fmt(value)} reference={_fmt(reference)} "
            f"pass={passed}"
        )
    if out is not None:
        lines = ["check,beta,value,reference,pass"]
        for name, beta_label, value, reference, passed in rows:
            lines.append(f"{name},{beta_label},{_fmt(value)},{_fmt(reference)},{passed}")
        _atomic_write_text(out, "\n".join(lines) + "\n")
        click.echo(f"wrote {out}")
    failures = sum(1 for row in rows if not row[4])
    if failures:
        raise CliError(EXIT_CHECK_FAILURE, f"{failures} functional checks failed")


def cmd_eigen(
    alpha: float,
    beta: float,
    h: float,
    symmetric: bool = False,
    grading: float = DEFAULT_GRADING,
    out: Optional[str] = None,
) -> float:
    """Principal mixed eigenvalue on the sector; radial reference when exact."""
    spec = SectorSpec(alpha, beta)
    mesh = generate(spec, h, grading=grading, symmetric=symmetric)
    try:
        value, _ = principal_eigenvalue(mesh)
    except RuntimeError as err:
        raise CliError(EXIT_CHECK_FAILURE, f"eigen solve failed: {err}") from None
    click.echo(
        f"mesh        vertices={mesh.n_vertices} triangles={mesh.n_triangles} "
        f"h={_fmt(mesh.h)}"
    )
    click.echo(f"eigenvalue  {_fmt(value)}")
    payload: dict = {
        "kind": EIGEN_KIND,
        "alpha": spec.alpha,
        "beta": spec.beta,
        "h": float(h),
        "eigenvalue": value,
    }
    if spec.is_degenerate:
        reference = bessel_j0_first_zero() ** 2
        rel = abs(value - reference) / reference
        click.echo(f"reference   {_fmt(reference)} (radial mode, j0 squared)")
        click.echo(f"rel_error   {_fmt(rel)}")
        payload["reference"] = reference
        payload["rel_error"] = rel
    if out is not None:
        _atomic_write_text(out, json.dumps(payload))
        click.echo(f"wrote {out}")
    return value


# -- SVG rendering -----------------------------------------------------------

_HEAT_STOPS = (
    (0.0, (13, 8, 135)),
    (0.25, (126, 3, 168)),
    (0.5, (203, 71, 119)),
    (0.75, (248, 149, 64)),
    (1.0, (240, 249, 33)),
)
_SERIES_COLORS = (
    "#4062bb",
    "#ef476f",
    "#06d6a0",
    "#f78c2a",
    "#9b5de5",
    "#118ab2",
    "#f15bb5",
    "#73a942",
)
_SIGN_NEG = "#3a6ea5"
_SIGN_POS = "#c1272d"
_SIGN_FLAT = "#b9bdc4"


def _heat_color(t: float) -> str:
    t = min(1.0, max(0.0, t))
    for (t0, c0), (t1, c1) in zip(_HEAT_STOPS, _HEAT_STOPS[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            r, g, b = (round(x + w * (y - x)) for x, y in zip(c0, c1))
            return f"#{r:02x}{g:02x}{b:02x}"
    return "#f0f921"


class _PanelFrame:
    """Affine map from world coordinates into a fixed SVG panel box."""

    def __init__(
        self,
        bounds: tuple[float, float, float, float],
        x0: float,
        y0: float,
        width: float,
        height: float,
    ) -> None:
        xmin, ymin, xmax, ymax = bounds
        span_x = max(xmax - xmin, 1e-12)
        span_y = max(ymax - ymin, 1e-12)
        self.scale = min(width / span_x, height / span_y)
        self.ox = x0 + 0.5 * (width - self.scale * span_x) - self.scale * xmin
        self.oy = y0 + 0.5 * (height - self.scale * span_y) + self.scale * ymax

    def point(self, x: float, y: float) -> tuple[float, float]:
        return (self.ox + self.scale * x, self.oy - self.scale * y)


def _triangle_gx(field: ScalarField) -> np.ndarray:
    """First component of the per-triangle gradient."""
    verts = field.mesh.vertices
    tris = field.mesh.triangles
    a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
    det = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    ua = field.values[tris[:, 0]]
    ub = field.values[tris[:, 1]]
    uc = field.values[tris[:, 2]]
    return ((ub - ua) * (c[:, 1] - a[:, 1]) - (uc - ua) * (b[:, 1] - a[:, 1])) / det


def _mesh_panel(
    field: ScalarField,
    colors: Sequence[str],
    x0: float,
    y0: float,
    title: str,
    legend: Sequence[tuple[str, str]] = (),
) -> list[str]:
    verts = field.mesh.vertices
    tris = field.mesh.triangles
    bounds = (
        float(verts[:, 0].min()),
        float(verts[:, 1].min()),
        float(verts[:, 0].max()),
        float(verts[:, 1].max()),
    )
    frame = _PanelFrame(bounds, x0, y0 + 24, PANEL_W, PANEL_H - 48)
    parts = [f'<text x="{x0:.2f}" y="{y0 + 14:.2f}" class="title">{title}</text>']
    for k in range(tris.shape[0]):
        pts = " ".join(
            "{:.2f},{:.2f}".format(*frame.point(verts[i, 0], verts[i, 1]))
            for i in tris[k]
        )
        parts.append(f'<polygon points="{pts}" fill="{colors[k]}" stroke="none"/>')
    ly = y0 + PANEL_H - 14
    lx = x0
    for color, label in legend:
        parts.append(f'<rect x="{lx:.2f}" y="{ly - 9:.2f}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{lx + 14:.2f}" y="{ly:.2f}">{label}</text>')
        lx += 14 + 7 * len(label) + 18
    return parts


def _heat_panel(field: ScalarField, x0: float, y0: float) -> list[str]:
    tri_values = field.values[field.mesh.triangles].mean(axis=1)
    lo = float(tri_values.min())
    hi = float(tri_values.max())
    span = hi - lo
    if span <= 0.0:
        span = 1.0
    colors = [_heat_color((float(v) - lo) / span) for v in tri_values]
    legend = ((_heat_color(0.0), f"min {lo:.3g}"), (_heat_color(1.0), f"max {hi:.3g}"))
    return _mesh_panel(field, colors, x0, y0, "solution heatmap", legend)


def _sign_panel(field: ScalarField, x0: float, y0: float) -> list[str]:
    gx = _triangle_gx(field)
    flat = audit_tolerance(field.mesh.h)
    colors = [
        _SIGN_NEG if v < -flat else (_SIGN_POS if v > flat else _SIGN_FLAT)
        for v in gx
    ]
    legend = (
        (_SIGN_NEG, "decreasing"),
        (_SIGN_POS, "increasing"),
        (_SIGN_FLAT, "flat"),
    )
    return _mesh_panel(field, colors, x0, y0, "first-direction slope sign", legend)


def load_report_rows(path: str) -> list[dict]:
    """Rows of an audit report CSV as dicts keyed by column name."""
    try:
        with open(path) as handle:
            text = handle.read()
    except FileNotFoundError:
        raise CliError(EXIT_USAGE, f"no report CSV at {path!r}") from None
    data_lines = [
        line for line in text.splitlines() if line.strip() and not line.startswith("#")
    ]
    reader = csv.DictReader(io.StringIO("\n".join(data_lines)))
    required = set(CSV_COLUMNS.split(","))
    if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
        raise CliError(EXIT_USAGE, f"{path!r} does not look like an audit report CSV")
    return list(reader)


def _margin_panel(rows: Sequence[dict], x0: float, y0: float) -> list[str]:
    series: dict[str, dict[float, float]] = {}
    tolerance = 0.0
    for rec in rows:
        lam = float(rec["lambda"])
        value = float(rec["max_violation"])
        tolerance = max(tolerance, float(rec["tolerance"]))
        if math.isnan(lam) or math.isinf(value):
            continue
        per = series.setdefault(rec["check_id"], {})
        per[lam] = max(per.get(lam, -math.inf), value)
    parts = [
        f'<text x="{x0:.2f}" y="{y0 + 14:.2f}" class="title">worst margin per pivot</text>'
    ]
    box_x, box_y = x0 + 46, y0 + 28
    box_w, box_h = PANEL_W - 56, PANEL_H - 76
    parts.append(
        f'<rect x="{box_x:.2f}" y="{box_y:.2f}" width="{box_w:.2f}" '
        f'height="{box_h:.2f}" fill="none" stroke="#888"/>'
    )
    if not series:
        parts.append(
            f'<text x="{box_x + 10:.2f}" y="{box_y + 24:.2f}">no per-pivot rows</text>'
        )
        return parts
    all_lams = sorted({lam for per in series.values() for lam in per})
    all_vals = [v for per in series.values() for v in per.values()]
    x_lo, x_hi = 0.0, max(all_lams) * 1.05
    y_lo = min(all_vals + [0.0, tolerance])
    y_hi = max(all_vals + [0.0, tolerance])
    pad = 0.1 * max(y_hi - y_lo, 1e-12)
    y_lo -= pad
    y_hi += pad

    def to_px(lam: float, value: float) -> tuple[float, float]:
        fx = (lam - x_lo) / max(x_hi - x_lo, 1e-12)
        fy = (value - y_lo) / max(y_hi - y_lo, 1e-12)
        return (box_x + fx * box_w, box_y + (1.0 - fy) * box_h)

    for i in range(5):
        tick = x_lo + (x_hi - x_lo) * i / 4.0
        px, _ = to_px(tick, y_lo)
        parts.append(
            f'<line x1="{px:.2f}" y1="{box_y + box_h:.2f}" x2="{px:.2f}" '
            f'y2="{box_y + box_h + 4:.2f}" stroke="#888"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{box_y + box_h + 16:.2f}" '
            f'text-anchor="middle">{tick:.3g}</text>'
        )
        tick_y = y_lo + (y_hi - y_lo) * i / 4.0
        _, py = to_px(x_lo, tick_y)
        parts.append(
            f'<line x1="{box_x - 4:.2f}" y1="{py:.2f}" x2="{box_x:.2f}" '
            f'y2="{py:.2f}" stroke="#888"/>'
        )
        parts.append(
            f'<text x="{box_x - 6:.2f}" y="{py + 4:.2f}" '
            f'text-anchor="end">{tick_y:.3g}</text>'
        )
    for ref, dash, label in ((0.0, "", "zero"), (tolerance, "4 3", "tolerance")):
        if y_lo <= ref <= y_hi:
            _, py = to_px(x_lo, ref)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            parts.append(
                f'<line x1="{box_x:.2f}" y1="{py:.2f}" x2="{box_x + box_w:.2f}" '
                f'y2="{py:.2f}" stroke="#555"{dash_attr}/>'
            )
            parts.append(f'<text x="{box_x + box_w + 2:.2f}" y="{py + 4:.2f}">{label}</text>')
    ly = box_y + 14
    for idx, check_id in enumerate(sorted(series)):
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        points = sorted(series[check_id].items())
        px_pts = [to_px(lam, value) for lam, value in points]
        if len(px_pts) > 1:
            path = " ".join(f"{px:.2f},{py:.2f}" for px, py in px_pts)
            parts.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        for px, py in px_pts:
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" fill="{color}"/>')
        parts.append(
            f'<text x="{box_x + 8:.2f}" y="{ly:.2f}" fill="{color}">{check_id}</text>'
        )
        ly += 14
    return parts


def cmd_plot(
    report: Optional[str] = None,
    out: str = "report.svg",
    solution: Optional[str] = None,
) -> None:
    """Render solution heatmap, slope sign map, and margin curves as SVG."""
    if report is None and solution is None:
        raise ValueError("need --report and/or --solution to plot")
    panels: list[Callable[[float, float], list[str]]] = []
    if solution is not None:
        solved, _ = load_solution(solution)
        panels.append(lambda x, y: _heat_panel(solved, x, y))
        panels.append(lambda x, y: _sign_panel(solved, x, y))
    if report is not None:
        rows = load_report_rows(report)
        panels.append(lambda x, y: _margin_panel(rows, x, y))
    width = 2 * PANEL_MARGIN + len(panels) * PANEL_W + (len(panels) - 1) * PANEL_GAP
    height = 2 * PANEL_MARGIN + PANEL_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>text{font-family:sans-serif;font-size:11px}"
        ".title{font-size:13px;font-weight:bold}</style>",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for k, panel in enumerate(panels):
        parts.extend(panel(PANEL_MARGIN + k * (PANEL_W + PANEL_GAP), PANEL_MARGIN))
    parts.append("</svg>")
    _atomic_write_text(out, "\n".join(parts) + "\n")
    click.echo(f"wrote {out}")


# -- click wiring ------------------------------------------------------------


def _emit_error(code: int, message: str) -> None:
    click.echo(json.dumps({"code": code, "message": message}), err=True)
    sys.exit(code)


def _finish(body: Callable[[], object]) -> None:
    """Run a command body inside the error envelope."""
    try:
        body()
    except CliError as err:
        _emit_error(err.code, err.message)
    except click.ClickException:
        raise
    except (ValueError, MeshingError) as err:
        _emit_error(EXIT_USAGE, str(err))
    except RuntimeError as err:
        _emit_error(EXIT_CHECK_FAILURE, str(err))
    except Exception as err:  # last-resort envelope so stderr stays machine-readable
        _emit_error(EXIT_INTERNAL, f"{type(err).__name__}: {err}")


@click.group()
def main() -> None:
    """Verification toolkit for sector symmetry and monotonicity."""


@main.command("constants")
@click.option("--alpha", type=float, required=True, help="Arc opening angle, radians.")
@click.option("--beta", type=float, required=True, help="Vertex angle, radians.")
@click.option(
    "--lambda",
    "lam",
    type=float,
    default=None,
    help="Pivot distance for the admissible-angle rows.",
)
def _constants_cmd(alpha: float, beta: float, lam: Optional[float]) -> None:
    """Print the derived geometric constants."""
    _finish(lambda: cmd_constants(alpha, beta, lam))


@main.command("check-angles")
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option(
    "--beta-max",
    type=float,
    default=math.pi,
    show_default=True,
    help="Upper bound for sampled vertex angles, radians.",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--tol",
    "margin",
    type=float,
    default=MARGIN_FLOOR,
    show_default=True,
    help="Margin floor below which a sample counts as a violation.",
)
@click.option("--out", type=str, default=None, help="Optional summary CSV path.")
def _check_angles_cmd(
    samples: int, beta_max: float, seed: int, margin: float, out: Optional[str]
) -> None:
    """Randomized sweep of the pivot-angle inequalities."""
    _finish(lambda: cmd_check_angles(samples, beta_max, seed, margin, out))


@main.command("solve")
@click.option("--alpha", type=float, required=True, help="Arc opening angle, radians.")
@click.option("--beta", type=float, required=True, help="Vertex angle, radians.")
@click.option("--h", type=float, required=True, help="Target mesh size.")
@click.option("--symmetric", is_flag=True, default=False, help="Mirror-symmetric mesh.")
@click.option("--grading", type=float, default=DEFAULT_GRADING, show_default=True)
@click.option(
    "--f",
    "f",
    type=str,
    default=DEFAULT_F,
    show_default=True,
    help="Reaction term: const:c, linear:mu, or power:c,p.",
)
@click.option("--out", type=str, default=None, help="Solution artifact JSON path.")
def _solve_cmd(
    alpha: float,
    beta: float,
    h: float,
    symmetric: bool,
    grading: float,
    f: str,
    out: Optional[str],
) -> None:
    """Solve the mixed problem on one sector."""
    _finish(lambda: cmd_solve(alpha, beta, h, symmetric, grading, f, out))


@main.command("audit")
@click.option("--alpha", type=float, default=None, help="Arc opening angle, radians.")
@click.option("--beta", type=float, default=None, help="Vertex angle, radians.")
@click.option("--h", type=float, default=None, help="Target mesh size.")
@click.option("--symmetric", is_flag=True, default=False, help="Mirror-symmetric mesh.")
@click.option("--grading", type=float, default=DEFAULT_GRADING, show_default=True)
@click.option(
    "--f",
    "f",
    type=str,
    default=DEFAULT_F,
    show_default=True,
    help="Reaction term: const:c, linear:mu, or power:c,p.",
)
@click.option(
    "--solution",
    type=str,
    default=None,
    help="Reuse a solution artifact instead of solving.",
)
@click.option(
    "--lambda",
    "lambdas",
    type=float,
    multiple=True,
    help="Pivot distances; repeat the flag for a grid.",
)
@click.option(
    "--theta",
    "thetas",
    type=float,
    multiple=True,
    help="Explicit line angles; default samples the admissible set.",
)
@click.option("--fill", type=int, default=DEFAULT_FILL, show_default=True)
@click.option("--tol", type=float, default=None, help="Tolerance override.")
@click.option("--out", type=str, default=None, help="Report CSV path.")
def _audit_cmd(
    alpha: Optional[float],
    beta: Optional[float],
    h: Optional[float],
    symmetric: bool,
    grading: float,
    f: str,
    solution: Optional[str],
    lambdas: tuple[float, ...],
    thetas: tuple[float, ...],
    fill: int,
    tol: Optional[float],
    out: Optional[str],
) -> None:
    """Audit symmetry and monotonicity of one solved field."""
    _finish(
        lambda: cmd_audit(
            alpha,
            beta,
            h,
            symmetric,
            grading,
            f,
            solution,
            lambdas,
            thetas,
            fill,
            tol,
            out,
        )
    )


@main.command("sweep")
@click.option("--config", "config_path", type=str, required=True, help="TOML config path.")
def _sweep_cmd(config_path: str) -> None:
    """Solve and audit every configured sector."""
    _finish(lambda: cmd_sweep(config_path=config_path))


@main.command("sobolev")
@click.option(
    "--beta",
    "betas",
    type=float,
    multiple=True,
    help="Vertex angles, radians; repeat the flag for several.",
)
@click.option("--c0", type=float, default=1.0, show_default=True)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--resolution", type=int, default=256, show_default=True)
@click.option(
    "--slice-radius",
    type=float,
    default=None,
    help="Also run the small-volume trials on a slice of this radius.",
)
@click.option("--out", type=str, default=None, help="Optional summary CSV path.")
def _sobolev_cmd(
    betas: tuple[float, ...],
    c0: float,
    samples: int,
    seed: int,
    resolution: int,
    slice_radius: Optional[float],
    out: Optional[str],
) -> None:
    """Functional-inequality instrumentation checks."""
    _finish(
        lambda: cmd_sobolev(betas, c0, samples, seed, resolution, slice_radius, out)
    )


@main.command("eigen")
@click.option("--alpha", type=float, required=True, help="Arc opening angle, radians.")
@click.option("--beta", type=float, required=True, help="Vertex angle, radians.")
@click.option("--h", type=float, required=True, help="Target mesh size.")
@click.option("--symmetric", is_flag=True, default=False, help="Mirror-symmetric mesh.")
@click.option("--grading", type=float, default=DEFAULT_GRADING, show_default=True)
@click.option("--out", type=str, default=None, help="Eigen artifact JSON path.")
def _eigen_cmd(
    alpha: float,
    beta: float,
    h: float,
    symmetric: bool,
    grading: float,
    out: Optional[str],
) -> None:
    """Principal mixed eigenvalue of one sector."""
    _finish(lambda: cmd_eigen(alpha, beta, h, symmetric, grading, out))


@main.command("plot")
@click.option("--report", type=str, default=None, help="Audit report CSV to chart.")
@click.option("--solution", type=str, default=None, help="Solution artifact to render.")
@click.option("--out", type=str, required=True, help="Output SVG path.")
def _plot_cmd(report: Optional[str], solution: Optional[str], out: str) -> None:
    """Render report and solution panels as standalone SVG."""
    _finish(lambda: cmd_plot(report, out, solution))


if __name__ == "__main__":
    main()
