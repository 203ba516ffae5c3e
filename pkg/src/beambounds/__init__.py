"""Guaranteed two-sided eigenvalue bounds for clamped Euler-Bernoulli beam
buckling, computed with cubic Hermite finite elements.

The discrete eigenvalues bound the exact buckling loads from above; a
guaranteed lower bound follows from an explicitly known interpolation
constant built from per-element stiffness infima.  Variable stiffness is
handled through an auxiliary problem with piecewise-constant coefficients.
"""

from .bounds import (
    AnalyticEigenvalue,
    BoundsReport,
    KappaVector,
    analytic_first_eigenvalue,
    critical_load_circular,
    critical_load_rectangular,
    interpolation_constant,
    kappa_vector,
    lower_bound,
    scaled_mesh_size,
    stepped_scaled_bounds,
    two_sided_bounds,
)
from .eigensolve import (
    EigenResult,
    ResidualReport,
    smallest_eigenpairs,
    verify_residuals,
)
from .errors import (
    BeamBoundsError,
    FactorizationFailureError,
    MisalignedMeshError,
    NoConvergenceError,
    SingularSystemError,
    StaleResultError,
    UnsupportedProfileError,
)
from .fem import (
    AssembledSystem,
    HermiteBasis,
    assemble,
    element_bending_matrix,
    element_geometric_matrix,
    reassemble_bending,
)
from .model import (
    AffineDimension,
    BeamGeometry,
    CircularSection,
    ConstantDimension,
    Mesh,
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    RectangularSection,
    SteppedDimension,
    StiffnessProfile,
    UniformStiffness,
    check_alignment,
    make_uniform_mesh,
    stiffness_from_geometry,
)

__version__ = "0.1.0"

__all__ = [
    "AffineDimension",
    "AnalyticEigenvalue",
    "AssembledSystem",
    "BeamBoundsError",
    "BeamGeometry",
    "BoundsReport",
    "CircularSection",
    "ConstantDimension",
    "EigenResult",
    "FactorizationFailureError",
    "HermiteBasis",
    "KappaVector",
    "Mesh",
    "MisalignedMeshError",
    "NoConvergenceError",
    "PiecewiseConstantStiffness",
    "PolynomialStiffness",
    "RectangularSection",
    "ResidualReport",
    "SingularSystemError",
    "StaleResultError",
    "SteppedDimension",
    "StiffnessProfile",
    "UniformStiffness",
    "UnsupportedProfileError",
    "analytic_first_eigenvalue",
    "assemble",
    "check_alignment",
    "critical_load_circular",
    "critical_load_rectangular",
    "element_bending_matrix",
    "element_geometric_matrix",
    "interpolation_constant",
    "kappa_vector",
    "lower_bound",
    "make_uniform_mesh",
    "reassemble_bending",
    "scaled_mesh_size",
    "smallest_eigenpairs",
    "stepped_scaled_bounds",
    "stiffness_from_geometry",
    "two_sided_bounds",
    "verify_residuals",
]
