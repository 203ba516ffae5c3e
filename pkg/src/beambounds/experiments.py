"""Experiment presets, convergence studies, and table emission.

The four benchmark beams all have length 1 m and steel's Young's modulus
E = 21e10 Pa.  Bounds are computed in the scaled eigenvalue form, i.e. the
bending coefficient is the thickness cubed (rectangular, eigenvalue
12*P/(E*b)) or the radius to the fourth power (circular, eigenvalue
4*P/(E*pi)):

* ``uniform-rect``     rectangular, b = 0.05, t = 0.015
* ``stepped-paper``    rectangular, eight equal segments, thicknesses as
                       printed in the source data (sixth value 0.053)
* ``stepped-symmetric`` the same with the sixth value read as 0.0153, which
                       restores the mirror symmetry of the optimal design
                       and its volume (mean thickness exactly 0.015)
* ``uniform-circ``     circular, r = 0.01
* ``conical``          circular, radius affine from 0.015 down to 0.01

Uniform beams have closed-form eigenvalues, so convergence tables report
true relative errors of both bounds; the stepped and conical beams report
the computable error estimate eta = (upper - lower)/upper instead.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .bounds import BoundsReport, two_sided_bounds
from .errors import MisalignedMeshError
from .model import (
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    StiffnessProfile,
    UniformStiffness,
    make_uniform_mesh,
)

LENGTH = 1.0
YOUNGS_MODULUS = 21.0e10

STEPPED_PAPER = (0.0155, 0.010, 0.0153, 0.0192, 0.0192, 0.053, 0.010, 0.0155)
STEPPED_SYMMETRIC = (0.0155, 0.010, 0.0153, 0.0192, 0.0192, 0.0153, 0.010, 0.0155)


def _stepped_profile(thicknesses) -> PiecewiseConstantStiffness:
    t = np.asarray(thicknesses)
    breakpoints = np.linspace(0.0, LENGTH, t.size + 1)
    return PiecewiseConstantStiffness(breakpoints, t**3)


def _conical_profile() -> PolynomialStiffness:
    radius = np.polynomial.Polynomial([0.015, (0.01 - 0.015) / LENGTH])
    return PolynomialStiffness((radius**4).coef, LENGTH)


@dataclass(frozen=True)
class CasePreset:
    name: str
    description: str
    profile: StiffnessProfile
    #: closed-form first eigenvalue in the scaled form, None when unknown
    analytic: Optional[float]
    default_refinements: Tuple[int, ...]
    #: factor turning a scaled eigenvalue into the axial load in newtons
    load_factor: float


PRESETS = {
    "uniform-rect": CasePreset(
        "uniform-rect",
        "uniform rectangular cross-section, b=0.05 m, t=0.015 m",
        UniformStiffness(0.015**3),
        4.0 * np.pi**2 * 0.015**3 / LENGTH**2,
        (2, 4, 8, 16, 32, 64, 128),
        YOUNGS_MODULUS * 0.05 / 12.0,
    ),
    "stepped-paper": CasePreset(
        "stepped-paper",
        "stepped rectangular beam, thicknesses as printed (sixth 0.053 m)",
        _stepped_profile(STEPPED_PAPER),
        None,
        (8, 16, 32, 64, 128, 256),
        YOUNGS_MODULUS * 0.05 / 12.0,
    ),
    "stepped-symmetric": CasePreset(
        "stepped-symmetric",
        "stepped rectangular beam, symmetric variant (sixth 0.0153 m)",
        _stepped_profile(STEPPED_SYMMETRIC),
        None,
        (8, 16, 32, 64, 128, 256),
        YOUNGS_MODULUS * 0.05 / 12.0,
    ),
    "uniform-circ": CasePreset(
        "uniform-circ",
        "uniform circular cross-section, r=0.01 m",
        UniformStiffness(0.01**4),
        4.0 * np.pi**2 * 0.01**4 / LENGTH**2,
        (2, 4, 8, 16, 32, 64, 128),
        YOUNGS_MODULUS * np.pi / 4.0,
    ),
    "conical": CasePreset(
        "conical",
        "circular cross-section, radius affine from 0.015 m to 0.01 m",
        _conical_profile(),
        None,
        (8, 16, 32, 64, 128, 256),
        YOUNGS_MODULUS * np.pi / 4.0,
    ),
}


def uniform_reference_eigenvalues(count: int) -> np.ndarray:
    """First ``count`` eigenvalues of the unit-coefficient uniform clamped
    beam (multiply by the stiffness coefficient for a scaled form).

    The wavenumbers k*L solve sin(kL/2) = 0 or tan(kL/2) = kL/2, giving the
    interleaved sequence 2*pi, 8.9868..., 4*pi, 15.4505..., 6*pi, ...
    """
    values = []
    j = 1
    while len(values) < count:
        values.append((2.0 * j * np.pi) ** 2)
        if len(values) < count:
            # root of tan(y) = y in (j*pi, j*pi + pi/2), then kL = 2y
            y = brentq(lambda y: np.tan(y) - y,
                       j * np.pi + 1e-9, j * np.pi + np.pi / 2 - 1e-9,
                       xtol=1e-14, rtol=1e-15)
            values.append((2.0 * y) ** 2)
        j += 1
    return np.array(values[:count]) / LENGTH**2


@dataclass(frozen=True)
class ExperimentConfig:
    """A convergence study: which case, which meshes, how many eigenvalues."""

    case: str
    refinements: Tuple[int, ...] = ()
    eigenvalues: int = 1
    output_format: str = "plain"
    output_path: Optional[Path] = None
    include_verification: bool = False

    def __post_init__(self):
        if self.case not in PRESETS:
            raise ValueError(
                f"unknown case {self.case!r}; available: {', '.join(sorted(PRESETS))}"
            )
        refinements = tuple(int(n) for n in self.refinements)
        if not refinements:
            refinements = PRESETS[self.case].default_refinements
        object.__setattr__(self, "refinements", refinements)
        if any(n <= 0 for n in refinements):
            raise ValueError("element counts must be positive")
        if any(a >= b for a, b in zip(refinements, refinements[1:])):
            raise ValueError("refinements must be strictly increasing")
        if self.eigenvalues < 1:
            raise ValueError("need at least one eigenvalue")
        if self.output_format not in ("csv", "md", "plain"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        profile = PRESETS[self.case].profile
        if isinstance(profile, PiecewiseConstantStiffness):
            segments = profile.values.size
            bad = [n for n in refinements if n % segments]
            if bad:
                raise MisalignedMeshError(
                    f"case {self.case!r} needs element counts that are "
                    f"multiples of {segments}; offending: {bad}"
                )


@dataclass(frozen=True, eq=False)
class ConvergenceTable:
    """Per-refinement bounds for the first eigenvalue, shaped like the
    benchmark tables: true relative errors plus their orders of convergence
    when the exact value is known, otherwise the estimate eta and its order.
    """

    case: str
    element_counts: Tuple[int, ...]
    mesh_sizes: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    analytic: Optional[float] = None
    err_lower: Optional[np.ndarray] = None
    err_upper: Optional[np.ndarray] = None
    eoc_lower: Optional[np.ndarray] = None
    eoc_upper: Optional[np.ndarray] = None
    eta_rel: Optional[np.ndarray] = None
    eoc_eta: Optional[np.ndarray] = None

    @property
    def kind(self) -> str:
        return "analytic" if self.analytic is not None else "estimated"

    @property
    def num_rows(self) -> int:
        return len(self.element_counts)


def compute_eoc(errors: Sequence[float], mesh_sizes: Sequence[float]) -> np.ndarray:
    """Experimental orders of convergence between consecutive rows:
    log(e_prev/e_next) / log(h_prev/h_next); one entry fewer than rows."""
    errors = np.asarray(errors, dtype=float)
    sizes = np.asarray(mesh_sizes, dtype=float)
    if errors.size != sizes.size or errors.size < 2:
        raise ValueError("need matching error and mesh-size sequences of length >= 2")
    if np.any(errors <= 0):
        raise ValueError("errors must be positive")
    if np.any(np.diff(sizes) >= 0):
        raise ValueError("mesh sizes must be strictly decreasing")
    return np.log(errors[:-1] / errors[1:]) / np.log(sizes[:-1] / sizes[1:])


def least_squares_slope(mesh_sizes: Sequence[float], errors: Sequence[float],
                        points: int = 3) -> float:
    """Least-squares slope of log(error) against log(h) over the finest
    ``points`` refinements.  Reported as a convenience; not part of any
    guarantee."""
    h = np.log(np.asarray(mesh_sizes, dtype=float)[-points:])
    e = np.log(np.asarray(errors, dtype=float)[-points:])
    if h.size < 2:
        raise ValueError("need at least two refinements to fit a slope")
    return float(np.polynomial.polynomial.polyfit(h, e, 1)[1])


def bounds_for_case(preset: CasePreset, num_elements: int,
                    count: int = 1) -> BoundsReport:
    mesh = make_uniform_mesh(LENGTH, num_elements)
    if isinstance(preset.profile, PiecewiseConstantStiffness):
        segments = preset.profile.values.size
        if num_elements % segments != 0:
            raise MisalignedMeshError(
                f"case {preset.name!r} needs element counts that are "
                f"multiples of {segments}, got {num_elements}"
            )
    return two_sided_bounds(mesh, preset.profile, count)


def run_case(config: ExperimentConfig) -> ConvergenceTable:
    """Assemble, solve, and bound the first eigenvalue on every refinement."""
    preset = PRESETS[config.case]
    lowers, uppers = [], []
    for n in config.refinements:
        report = bounds_for_case(preset, n, count=1)
        lowers.append(report.lower[0])
        uppers.append(report.upper[0])
    lower = np.array(lowers)
    upper = np.array(uppers)
    sizes = LENGTH / np.asarray(config.refinements, dtype=float)

    def orders(errors):
        if errors.size < 2:
            return np.empty(0)
        return compute_eoc(errors, sizes)

    if preset.analytic is not None:
        exact = preset.analytic
        err_lower = (exact - lower) / exact
        err_upper = (upper - exact) / exact
        return ConvergenceTable(
            case=config.case, element_counts=config.refinements,
            mesh_sizes=sizes, lower=lower, upper=upper, analytic=exact,
            err_lower=err_lower, err_upper=err_upper,
            eoc_lower=orders(err_lower), eoc_upper=orders(err_upper),
        )
    eta = (upper - lower) / upper
    return ConvergenceTable(
        case=config.case, element_counts=config.refinements,
        mesh_sizes=sizes, lower=lower, upper=upper,
        eta_rel=eta, eoc_eta=orders(eta),
    )


# ---------------------------------------------------------------------------
# Table formatting
# ---------------------------------------------------------------------------

def _fmt_value(v: float) -> str:
    return f"{v:.6e}"  # 7 significant digits, matching the benchmark tables


def _fmt_err(v: float) -> str:
    return f"{v:.6e}"


def _fmt_eoc(v: Optional[float]) -> str:
    return "" if v is None else f"{v:.4f}"


def _h_label(table: ConvergenceTable, row: int) -> str:
    return f"1/{table.element_counts[row]}"


def _table_cells(table: ConvergenceTable):
    if table.kind == "analytic":
        header = ["h", "lower", "rel_err_lower", "eoc_lower",
                  "upper", "rel_err_upper", "eoc_upper"]
        rows = []
        for i in range(table.num_rows):
            eoc_l = None if i == 0 else table.eoc_lower[i - 1]
            eoc_u = None if i == 0 else table.eoc_upper[i - 1]
            rows.append([
                _h_label(table, i),
                _fmt_value(table.lower[i]), _fmt_err(table.err_lower[i]),
                _fmt_eoc(eoc_l),
                _fmt_value(table.upper[i]), _fmt_err(table.err_upper[i]),
                _fmt_eoc(eoc_u),
            ])
    else:
        header = ["h", "lower", "upper", "eta_rel", "eoc"]
        rows = []
        for i in range(table.num_rows):
            eoc = None if i == 0 else table.eoc_eta[i - 1]
            rows.append([
                _h_label(table, i),
                _fmt_value(table.lower[i]), _fmt_value(table.upper[i]),
                _fmt_err(table.eta_rel[i]), _fmt_eoc(eoc),
            ])
    return header, rows


def format_table(table: ConvergenceTable, output_format: str = "plain") -> str:
    header, rows = _table_cells(table)
    out = io.StringIO()
    if output_format == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(row) + "\n")
    elif output_format == "md":
        out.write("| " + " | ".join(header) + " |\n")
        out.write("|" + "|".join("---" for _ in header) + "|\n")
        for row in rows:
            out.write("| " + " | ".join(row) + " |\n")
    elif output_format == "plain":
        widths = [max(len(header[j]), *(len(r[j]) for r in rows)) if rows
                  else len(header[j]) for j in range(len(header))]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
        for row in rows:
            out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
    else:
        raise ValueError(f"unknown output format {output_format!r}")
    return out.getvalue()


def emit_table(table: ConvergenceTable, output_format: str, path) -> Path:
    """Write the formatted table to ``path``; reruns are byte-identical."""
    path = Path(path)
    path.write_text(format_table(table, output_format), encoding="ascii")
    return path


# ---------------------------------------------------------------------------
# Multi-eigenvalue study
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenvalueCurve:
    """Error-versus-h data for one eigenvalue index."""

    index: int  # 1-based
    element_counts: Tuple[int, ...]
    mesh_sizes: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    err_lower: Optional[np.ndarray]
    err_upper: Optional[np.ndarray]
    eta_rel: Optional[np.ndarray]

    def slopes(self) -> dict:
        """Least-squares slopes over the finest three points (non-normative)."""
        out = {}
        if self.err_lower is not None:
            out["lower"] = least_squares_slope(self.mesh_sizes, self.err_lower)
            out["upper"] = least_squares_slope(self.mesh_sizes, self.err_upper)
        else:
            out["eta"] = least_squares_slope(self.mesh_sizes, self.eta_rel)
        return out


@dataclass(frozen=True, eq=False)
class MultiEigenvalueStudy:
    case: str
    curves: Tuple[EigenvalueCurve, ...]


def run_multi_eigenvalue_study(config: ExperimentConfig,
                               count: int = 5) -> MultiEigenvalueStudy:
    """Per-eigenvalue convergence data for log-log plotting.

    For uniform beams the exact reference eigenvalues come from the
    transcendental characteristic equation, so true relative errors are
    reported; otherwise the curves carry eta = (upper - lower)/upper.
    """
    preset = PRESETS[config.case]
    smallest_dim = 2 * (min(config.refinements) + 1) - 4
    if count > smallest_dim:
        raise ValueError(
            f"cannot track {count} eigenvalues on the coarsest mesh "
            f"(dimension {smallest_dim})"
        )
    reports = [bounds_for_case(preset, n, count=count)
               for n in config.refinements]
    sizes = LENGTH / np.asarray(config.refinements, dtype=float)
    references = None
    if preset.analytic is not None:
        coefficient = preset.profile.value
        references = coefficient * uniform_reference_eigenvalues(count)
    curves = []
    for i in range(count):
        lower = np.array([r.lower[i] for r in reports])
        upper = np.array([r.upper[i] for r in reports])
        if references is not None:
            exact = references[i]
            curves.append(EigenvalueCurve(
                index=i + 1, element_counts=config.refinements,
                mesh_sizes=sizes, lower=lower, upper=upper,
                err_lower=(exact - lower) / exact,
                err_upper=(upper - exact) / exact, eta_rel=None,
            ))
        else:
            curves.append(EigenvalueCurve(
                index=i + 1, element_counts=config.refinements,
                mesh_sizes=sizes, lower=lower, upper=upper,
                err_lower=None, err_upper=None,
                eta_rel=(upper - lower) / upper,
            ))
    return MultiEigenvalueStudy(case=config.case, curves=tuple(curves))


def format_study_csv(study: MultiEigenvalueStudy) -> str:
    """Flat CSV of all curves, one row per (eigenvalue index, refinement)."""
    out = io.StringIO()
    out.write("index,elements,h,lower,upper,rel_err_lower,rel_err_upper,eta_rel\n")
    for curve in study.curves:
        for j, n in enumerate(curve.element_counts):
            err_l = "" if curve.err_lower is None else _fmt_err(curve.err_lower[j])
            err_u = "" if curve.err_upper is None else _fmt_err(curve.err_upper[j])
            eta = "" if curve.eta_rel is None else _fmt_err(curve.eta_rel[j])
            out.write(f"{curve.index},{n},{curve.mesh_sizes[j]:.6e},"
                      f"{_fmt_value(curve.lower[j])},{_fmt_value(curve.upper[j])},"
                      f"{err_l},{err_u},{eta}\n")
    return out.getvalue()
