"""Numerical verification of the interpolation and orthogonality lemmas.

Three statements behind the lower-bound machinery are checked on a fixed
corpus of closed-form clamped test functions:

* the clamped Hermite interpolant I_h u reproduces nodal values and slopes
  and satisfies ||u - I_h u||_b <= C_h ||u - I_h u||_a;
* for piecewise-constant stiffness on an aligned mesh the interpolation
  error is orthogonal to the discrete space in the bending form (which is
  false for genuinely varying stiffness - the suite keeps a quartic
  negative control to show the hypothesis matters);
* the zero-mean Wirtinger inequality that produces the 1/(2*pi) factor,
  with its extremal function reaching the constant.

All integrals here use 20-point Gauss-Legendre per element, far beyond the
accuracy any of the asserted tolerances need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import bounds as bounds_mod
from .fem import HermiteBasis, assemble
from .model import (
    Mesh,
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    StiffnessProfile,
    UniformStiffness,
    make_uniform_mesh,
)

NORM_QUADRATURE = 20


@dataclass(frozen=True)
class SampledFunction:
    """Closed-form test function with derivatives, clamped on [0, length]."""

    name: str
    u: Callable
    du: Callable
    d2u: Callable
    length: float = 1.0
    smoothness: str = "smooth"

    def is_clamped(self, tol: float = 1e-14) -> bool:
        ends = (self.u(0.0), self.du(0.0), self.u(self.length), self.du(self.length))
        return all(abs(v) <= tol for v in ends)


def _sin_sq(x):
    return np.sin(np.pi * x) ** 2


TEST_CORPUS: Tuple[SampledFunction, ...] = (
    SampledFunction(
        "sin^2(pi x)",
        _sin_sq,
        lambda x: np.pi * np.sin(2.0 * np.pi * x),
        lambda x: 2.0 * np.pi**2 * np.cos(2.0 * np.pi * x),
    ),
    SampledFunction(
        "x^2 (1-x)^2",
        lambda x: x**2 * (1.0 - x) ** 2,
        lambda x: 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x),
        lambda x: 2.0 * (6.0 * x**2 - 6.0 * x + 1.0),
    ),
    SampledFunction(
        "sin^2(pi x) cos(2 pi x)",
        lambda x: np.sin(np.pi * x) ** 2 * np.cos(2.0 * np.pi * x),
        lambda x: np.pi * (np.sin(4.0 * np.pi * x) - np.sin(2.0 * np.pi * x)),
        lambda x: 2.0 * np.pi**2 * (2.0 * np.cos(4.0 * np.pi * x)
                                    - np.cos(2.0 * np.pi * x)),
    ),
    SampledFunction(
        "x^3 (1-x)^3",
        lambda x: x**3 * (1.0 - x) ** 3,
        lambda x: 3.0 * x**2 * (1.0 - x) ** 2 * (1.0 - 2.0 * x),
        lambda x: 6.0 * x * (1.0 - x) * (5.0 * x**2 - 5.0 * x + 1.0),
    ),
)


def hermite_interpolate(func: SampledFunction, mesh: Mesh) -> np.ndarray:
    """Nodal DOF vector (value, slope per node) of the Hermite interpolant.

    On every element the resulting piecewise cubic matches the function and
    its derivative at both endpoints (one-sided at the beam ends).
    """
    coeffs = np.empty(2 * (mesh.num_elements + 1))
    coeffs[0::2] = func.u(mesh.nodes)
    coeffs[1::2] = func.du(mesh.nodes)
    return coeffs


def interpolant_on_element(coeffs: np.ndarray, mesh: Mesh, k: int):
    """(value, slope, curvature) evaluators of the interpolant on element k,
    as functions of global x."""
    left, right = mesh.nodes[k], mesh.nodes[k + 1]
    h = right - left
    basis = HermiteBasis(h)
    local = coeffs[2 * k: 2 * k + 4]

    def value(x):
        return local @ basis.values((np.asarray(x) - left) / h)

    def slope(x):
        return local @ basis.first_derivatives((np.asarray(x) - left) / h)

    def curvature(x):
        return local @ basis.second_derivatives((np.asarray(x) - left) / h)

    return value, slope, curvature


def _element_quadrature(mesh: Mesh, k: int, npts: int = NORM_QUADRATURE):
    points, weights = leggauss(npts)
    left, right = mesh.nodes[k], mesh.nodes[k + 1]
    mid, half = 0.5 * (left + right), 0.5 * (right - left)
    return mid + half * points, half * weights


def interpolation_error_norms(func: SampledFunction, mesh: Mesh,
                              profile: StiffnessProfile) -> Tuple[float, float]:
    """(geometric-form norm, bending-form norm) of u - I_h u.

    The first is the square root of the integral of the squared first
    derivative of the error, the second weights the squared curvature
    error by the stiffness.
    """
    coeffs = hermite_interpolate(func, mesh)
    norm_b_sq = 0.0
    norm_a_sq = 0.0
    for k in range(mesh.num_elements):
        _, slope, curvature = interpolant_on_element(coeffs, mesh, k)
        x, w = _element_quadrature(mesh, k)
        err_slope = func.du(x) - slope(x)
        err_curv = func.d2u(x) - curvature(x)
        norm_b_sq += w @ err_slope**2
        norm_a_sq += w @ (profile(x) * err_curv**2)
    return float(np.sqrt(norm_b_sq)), float(np.sqrt(norm_a_sq))


def galerkin_orthogonality_defect(func: SampledFunction, mesh: Mesh,
                                  profile: StiffnessProfile) -> float:
    """Largest normalized bending-form pairing of the interpolation error
    with a discrete basis function.

    Vanishes (to quadrature and rounding) for piecewise-constant stiffness
    aligned with the mesh; genuinely varying stiffness leaves a defect many
    orders of magnitude above it.
    """
    coeffs = hermite_interpolate(func, mesh)
    ndof = 2 * (mesh.num_elements + 1)
    pairings = np.zeros(ndof)
    norm_a_sq = 0.0
    interp_norm_sq = 0.0
    for k in range(mesh.num_elements):
        left, right = mesh.nodes[k], mesh.nodes[k + 1]
        h = right - left
        basis = HermiteBasis(h)
        _, _, curvature = interpolant_on_element(coeffs, mesh, k)
        x, w = _element_quadrature(mesh, k)
        interp_curv = curvature(x)
        err_curv = func.d2u(x) - interp_curv
        sigma = profile(x)
        d2 = basis.second_derivatives((x - left) / h)
        pairings[2 * k: 2 * k + 4] += d2 @ (w * sigma * err_curv)
        norm_a_sq += w @ (sigma * err_curv**2)
        interp_norm_sq += w @ (sigma * interp_curv**2)
    # an error at rounding level below the interpolant's own energy is zero
    if norm_a_sq <= 1e-26 * max(interp_norm_sq, 1e-300):
        return 0.0
    system = assemble(mesh, profile)
    basis_norms_sq = system.bending_dense().diagonal()
    reduced = pairings[2:-2]
    return float(np.max(np.abs(reduced) / np.sqrt(norm_a_sq * basis_norms_sq)))


def wirtinger_ratio(f: Callable, df: Callable, interval: Tuple[float, float],
                    subintervals: int = 16, npts: int = 32) -> float:
    """Ratio of the integral of f^2 to its zero-mean Wirtinger bound
    ((beta-alpha)^2/(4 pi^2)) times the integral of f'^2.

    At most 1 for zero-mean f vanishing at the interval ends; equals 1 for
    the extremal single full-period sine.
    """
    alpha, beta = interval
    if beta <= alpha:
        raise ValueError("interval must have positive length")
    points, weights = leggauss(npts)
    num = 0.0
    den = 0.0
    edges = np.linspace(alpha, beta, subintervals + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = mid + half * points
        num += half * (weights @ np.asarray(f(x))**2)
        den += half * (weights @ np.asarray(df(x))**2)
    bound = (beta - alpha) ** 2 / (4.0 * np.pi**2) * den
    return float(num / bound)


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationRow:
    lemma: str
    instance: str
    measured: float
    bound: float
    comparison: str  # "<=" or ">="

    @property
    def passed(self) -> bool:
        if self.comparison == "<=":
            return self.measured <= self.bound
        return self.measured >= self.bound


@dataclass(frozen=True)
class VerificationReport:
    rows: Tuple[VerificationRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


_SUITE_PROFILES = (
    ("uniform", UniformStiffness(1.0)),
    ("two-segment", PiecewiseConstantStiffness([0.0, 0.5, 1.0], [1.0, 4.0])),
)


def _quartic_control() -> StiffnessProfile:
    line = np.polynomial.Polynomial([0.015, -0.005])
    return PolynomialStiffness((line**4).coef, 1.0)


def run_verification_suite(refinements: Sequence[int] = (2, 4, 8, 16, 32)) -> VerificationReport:
    """Check every lemma instance; returns one row per check."""
    rows: List[VerificationRow] = []
    for label, profile in _SUITE_PROFILES:
        for n in refinements:
            mesh = make_uniform_mesh(1.0, n)
            kappa = bounds_mod.kappa_vector(mesh, profile)
            c_h = bounds_mod.interpolation_constant(
                bounds_mod.scaled_mesh_size(mesh, kappa))
            for func in TEST_CORPUS:
                norm_b, norm_a = interpolation_error_norms(func, mesh, profile)
                ratio = norm_b / norm_a if norm_a else 0.0
                rows.append(VerificationRow(
                    "interpolation-inequality",
                    f"{func.name}, N={n}, {label}", ratio, c_h, "<="))
    for label, profile in _SUITE_PROFILES:
        for func in TEST_CORPUS:
            defect = galerkin_orthogonality_defect(func, make_uniform_mesh(1.0, 8),
                                                   profile)
            rows.append(VerificationRow(
                "galerkin-orthogonality",
                f"{func.name}, N=8, {label}", defect, 1e-10, "<="))
    control = _quartic_control()
    defect = galerkin_orthogonality_defect(TEST_CORPUS[0], make_uniform_mesh(1.0, 8),
                                           control)
    rows.append(VerificationRow(
        "galerkin-negative-control",
        f"{TEST_CORPUS[0].name}, N=8, quartic", defect, 1e-6, ">="))
    rows.append(VerificationRow(
        "wirtinger-extremal", "sin(2 pi x) on (0, 1)",
        wirtinger_ratio(lambda x: np.sin(2 * np.pi * x),
                        lambda x: 2 * np.pi * np.cos(2 * np.pi * x), (0.0, 1.0)),
        1.0 + 1e-12, "<="))
    rows.append(VerificationRow(
        "wirtinger", "sin(4 pi x) on (0, 1)",
        wirtinger_ratio(lambda x: np.sin(4 * np.pi * x),
                        lambda x: 4 * np.pi * np.cos(4 * np.pi * x), (0.0, 1.0)),
        0.25 + 1e-12, "<="))
    rows.append(VerificationRow(
        "wirtinger", "x(1-x) - 1/6 on (0, 1)",
        wirtinger_ratio(lambda x: x * (1.0 - x) - 1.0 / 6.0,
                        lambda x: 1.0 - 2.0 * x, (0.0, 1.0)),
        1.0, "<="))
    return VerificationReport(rows=tuple(rows))


def format_report(report: VerificationReport) -> str:
    """Plain-text table: lemma, instance, measured value, bound, pass/fail."""
    header = f"{'lemma':<28} {'instance':<38} {'measured':>13} {'bound':>13}  result"
    lines = [header, "-" * len(header)]
    for row in report.rows:
        lines.append(
            f"{row.lemma:<28} {row.instance:<38} {row.measured:>13.4e} "
            f"{row.bound:>13.4e}  {'pass' if row.passed else 'FAIL'}"
        )
    lines.append(f"{'overall:':<28} {'pass' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"
