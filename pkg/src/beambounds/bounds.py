"""Guaranteed two-sided bounds for the beam buckling eigenvalues.

The Rayleigh-Ritz eigenvalues of the assembled system bound the exact ones
from above.  A guaranteed lower bound follows from the interpolation
inequality for the clamped Hermite interpolant: with the per-element
stiffness infima kappa_k, the scaled mesh size

    scaled_h**2 = max_k  h_k**2 / kappa_k

yields the constant C_h = scaled_h / (2*pi), and every discrete eigenvalue
lam_h gives

    lam_h / (1 + lam_h * C_h**2)  <=  lam_exact  <=  lam_h.

For piecewise-constant stiffness on an aligned mesh this holds with lam_h
from the profile itself.  For smoothly varying (polynomial) stiffness the
upper bound still comes from the exact profile, while the lower bound is
computed from an auxiliary system assembled with the piecewise-constant
infima kappa(x); both systems share one mesh and one geometric matrix.

The same machinery serves the physical problem (stiffness in N*m^2,
eigenvalues in N) and the scaled forms used in the experiments (thickness
cubed or radius to the fourth as the coefficient).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fem
from .eigensolve import EigenResult, smallest_eigenpairs
from .errors import UnsupportedProfileError
from .model import (
    BeamGeometry,
    CircularSection,
    ConstantDimension,
    Mesh,
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    RectangularSection,
    StiffnessProfile,
)


@dataclass(frozen=True, eq=False)
class KappaVector:
    """Per-element infima of the bending stiffness.

    ``provenance`` records how the infima were obtained: "exact" for
    uniform and aligned piecewise-constant profiles (the infimum is the
    segment value itself), "endpoint-monotone" when the stiffness is
    monotone on each element and the infimum sits at an endpoint.
    """

    values: np.ndarray
    provenance: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if np.any(values <= 0):
            raise ValueError("element stiffness infima must be positive")


def kappa_vector(mesh: Mesh, profile: StiffnessProfile) -> KappaVector:
    """Exact per-element stiffness infima for the mesh.

    Raises :class:`UnsupportedProfileError` when the profile cannot certify
    an infimum (non-monotone polynomial stiffness).
    """
    nodes = mesh.nodes
    values = np.array([
        profile.infimum_on(nodes[k], nodes[k + 1])
        for k in range(mesh.num_elements)
    ])
    return KappaVector(values=values, provenance=profile.infimum_provenance)


def scaled_mesh_size(mesh: Mesh, kappa: KappaVector) -> float:
    """Mesh size scaled by the stiffness infima: sqrt(max_k h_k^2/kappa_k)."""
    if kappa.values.size != mesh.num_elements:
        raise ValueError("kappa vector does not match the mesh")
    return float(np.sqrt(np.max(mesh.element_lengths**2 / kappa.values)))


def interpolation_constant(scaled_h: float) -> float:
    """Constant C_h = scaled_h / (2*pi) of the interpolation inequality."""
    if scaled_h <= 0:
        raise ValueError(f"scaled mesh size must be positive, got {scaled_h}")
    return scaled_h / (2.0 * np.pi)


def lower_bound(upper, c_h_sq):
    """Guaranteed lower bound upper / (1 + upper * C_h^2).

    Strictly increasing in ``upper`` and strictly decreasing in ``c_h_sq``
    for positive arguments; the identity map when ``c_h_sq`` is zero.
    """
    upper = np.asarray(upper, dtype=float)
    if np.any(upper <= 0):
        raise ValueError("discrete eigenvalues must be positive")
    if c_h_sq < 0:
        raise ValueError(f"squared constant must be nonnegative, got {c_h_sq}")
    result = upper / (1.0 + upper * c_h_sq)
    return float(result) if result.ndim == 0 else result


@dataclass(frozen=True, eq=False)
class BoundsReport:
    """Per-eigenvalue guaranteed bounds plus the constants that formed them.

    ``auxiliary_eigenvalues`` holds the discrete eigenvalues of the
    kappa-system when the variable-stiffness path was taken, else None.
    """

    lower: np.ndarray
    upper: np.ndarray
    eta_rel: np.ndarray
    c_h: float
    c_h_sq: float
    scaled_h: float
    kappa: KappaVector
    mesh: Mesh
    guaranteed: bool
    auxiliary_eigenvalues: Optional[np.ndarray] = None
    eigenresult: Optional[EigenResult] = None

    def __post_init__(self):
        if np.any(self.lower > self.upper):
            raise ValueError("lower bounds must not exceed upper bounds")
        if np.any(self.eta_rel < 0) or np.any(self.eta_rel >= 1):
            raise ValueError("relative error estimates must lie in [0, 1)")

    @property
    def count(self) -> int:
        return self.lower.size


def two_sided_bounds(mesh: Mesh, profile: StiffnessProfile, count: int,
                     quadrature_order: int = fem.DEFAULT_QUADRATURE) -> BoundsReport:
    """Guaranteed lower and upper bounds for the ``count`` smallest
    eigenvalues of the beam with the given stiffness profile.

    Uniform and aligned piecewise-constant profiles need a single assembly
    and solve.  Polynomial profiles solve the exact-profile system for the
    upper bounds and the auxiliary piecewise-constant-infima system for the
    lower bounds, sharing the geometric matrix.
    """
    kappa = kappa_vector(mesh, profile)
    c_h_sq = float(np.max(mesh.element_lengths**2 / kappa.values)) / (4.0 * np.pi**2)
    scaled_h = float(np.sqrt(np.max(mesh.element_lengths**2 / kappa.values)))
    system = fem.assemble(mesh, profile, quadrature_order)
    result = smallest_eigenpairs(system, count)
    upper = result.eigenvalues
    if isinstance(profile, PolynomialStiffness):
        aux_profile = PiecewiseConstantStiffness(mesh.nodes, kappa.values)
        aux_system = fem.reassemble_bending(system, aux_profile)
        aux = smallest_eigenpairs(aux_system, count)
        lower = lower_bound(aux.eigenvalues, c_h_sq)
        aux_values = aux.eigenvalues
    else:
        lower = lower_bound(upper, c_h_sq)
        aux_values = None
    eta = (upper - lower) / upper
    return BoundsReport(
        lower=lower, upper=upper.copy(), eta_rel=eta,
        c_h=interpolation_constant(scaled_h), c_h_sq=c_h_sq, scaled_h=scaled_h,
        kappa=kappa, mesh=mesh,
        guaranteed=kappa.provenance in ("exact", "endpoint-monotone"),
        auxiliary_eigenvalues=aux_values, eigenresult=result,
    )


def stepped_scaled_bounds(mesh: Mesh, thicknesses, count: int) -> BoundsReport:
    """Bounds for a stepped rectangular beam in the scaled eigenvalue form.

    ``thicknesses`` are the per-segment values on equally long segments of
    the beam; the coefficient of the bending form is the thickness cubed,
    so eigenvalues are 12*P/(E*b).  Convert with
    :func:`critical_load_rectangular`.
    """
    t = np.asarray(thicknesses, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("need at least one segment thickness")
    if np.any(t <= 0):
        raise ValueError("thicknesses must be positive")
    breakpoints = np.linspace(0.0, mesh.length, t.size + 1)
    profile = PiecewiseConstantStiffness(breakpoints, t**3)
    return two_sided_bounds(mesh, profile, count)


def critical_load_rectangular(scaled_eigenvalue, youngs_modulus: float,
                              width: float):
    """Axial load P = E*b*lam/12 from a thickness-cubed-form eigenvalue."""
    return youngs_modulus * width * np.asarray(scaled_eigenvalue) / 12.0


def critical_load_circular(scaled_eigenvalue, youngs_modulus: float):
    """Axial load P = E*pi*lam/4 from a radius-fourth-form eigenvalue."""
    return youngs_modulus * np.pi * np.asarray(scaled_eigenvalue) / 4.0


@dataclass(frozen=True)
class AnalyticEigenvalue:
    """Closed-form first eigenvalue of a uniform clamped beam."""

    scaled: float        # thickness-cubed or radius-fourth form
    critical_load: float  # newtons


def analytic_first_eigenvalue(geometry: BeamGeometry) -> AnalyticEigenvalue:
    """Exact first eigenvalue for uniform cross-sections.

    Rectangular: scaled value 4*pi^2*t^3/L^2 with P = E*b*lam/12.
    Circular: 4*pi^2*r^4/L^2 with P = E*pi*lam/4.
    """
    section = geometry.cross_section
    L = geometry.length
    if isinstance(section, RectangularSection):
        dim = section.thickness
        if not isinstance(dim, ConstantDimension):
            raise UnsupportedProfileError(
                "closed-form eigenvalue exists only for uniform cross-sections"
            )
        lam = 4.0 * np.pi**2 * dim.value**3 / L**2
        load = float(critical_load_rectangular(lam, geometry.youngs_modulus,
                                               section.width))
        return AnalyticEigenvalue(scaled=lam, critical_load=load)
    if isinstance(section, CircularSection):
        dim = section.radius
        if not isinstance(dim, ConstantDimension):
            raise UnsupportedProfileError(
                "closed-form eigenvalue exists only for uniform cross-sections"
            )
        lam = 4.0 * np.pi**2 * dim.value**4 / L**2
        load = float(critical_load_circular(lam, geometry.youngs_modulus))
        return AnalyticEigenvalue(scaled=lam, critical_load=load)
    raise UnsupportedProfileError(f"unknown cross-section {section!r}")
