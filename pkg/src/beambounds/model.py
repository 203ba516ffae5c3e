"""Beam geometry, bending-stiffness profiles, and 1D meshes.

Units are SI throughout and never converted implicitly: lengths in metres,
Young's modulus in pascals, bending stiffness in N*m^2.  The scaled
eigenvalue forms used by the experiment presets simply carry a different
coefficient (m^3 for thickness-cubed, m^4 for radius-to-the-fourth) through
the same machinery.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import MisalignedMeshError, UnsupportedProfileError

# Absolute node/breakpoint tolerance is this factor times the beam length.
ALIGNMENT_TOL = 1e-12


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Cross-section dimension profiles (thickness of a rectangle, radius of a
# circle).  Only shapes with certifiable per-element stiffness infima are
# representable: constant, stepped (piecewise constant), and affine.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantDimension:
    """A thickness or radius that does not vary along the beam."""

    value: float

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError(f"dimension must be positive, got {self.value}")


@dataclass(frozen=True)
class SteppedDimension:
    """Piecewise-constant thickness or radius.

    ``breakpoints`` holds the r+1 segment boundaries from 0 to the beam
    length; ``values`` the r per-segment dimensions.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bp = tuple(float(y) for y in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if len(bp) < 2 or len(vals) != len(bp) - 1:
            raise ValueError("need r+1 breakpoints for r segment values")
        if bp[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if any(b >= c for b, c in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v <= 0 for v in vals):
            raise ValueError("segment dimensions must be positive")


@dataclass(frozen=True)
class AffineDimension:
    """Thickness or radius varying linearly from ``start`` at x=0 to
    ``end`` at x=L."""

    start: float
    end: float

    def __post_init__(self):
        if self.start <= 0 or self.end <= 0:
            raise ValueError("dimension endpoints must be positive")


DimensionProfile = Union[ConstantDimension, SteppedDimension, AffineDimension]


@dataclass(frozen=True)
class RectangularSection:
    width: float
    thickness: DimensionProfile

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"width must be positive, got {self.width}")


@dataclass(frozen=True)
class CircularSection:
    radius: DimensionProfile


@dataclass(frozen=True)
class BeamGeometry:
    """Physical description of the beam: length, material, cross-section."""

    length: float
    youngs_modulus: float
    cross_section: Union[RectangularSection, CircularSection]

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.youngs_modulus <= 0:
            raise ValueError("Young's modulus must be positive")
        dim = _section_dimension(self.cross_section)
        if isinstance(dim, SteppedDimension) and not np.isclose(
            dim.breakpoints[-1], self.length, rtol=0, atol=ALIGNMENT_TOL * self.length
        ):
            raise ValueError("last breakpoint must equal the beam length")


def _section_dimension(section) -> DimensionProfile:
    if isinstance(section, RectangularSection):
        return section.thickness
    if isinstance(section, CircularSection):
        return section.radius
    raise TypeError(f"unknown cross-section {section!r}")


# ---------------------------------------------------------------------------
# Bending-stiffness profiles: the positive coefficient sigma(x) of the
# fourth-order term.  Each kind can evaluate itself pointwise, restrict
# itself to an element, and report a certified infimum over an element.
# ---------------------------------------------------------------------------

class StiffnessProfile:
    """Common interface of the three stiffness-profile kinds.

    ``c1`` and ``c2`` bound the coefficient on the whole beam,
    0 < c1 <= sigma(x) <= c2.  ``infimum_on`` returns the exact infimum
    over an element, or raises :class:`UnsupportedProfileError` when no
    certified value is available.
    """

    #: how per-element infima are obtained; see :func:`bounds.kappa_vector`
    infimum_provenance = "exact"

    def __call__(self, x):
        raise NotImplementedError

    def restrict(self, left: float, right: float):
        """Coefficient on the element [left, right]: a float for constant
        stiffness, else polynomial coefficients in the local coordinate
        measured from ``left`` (lowest order first)."""
        raise NotImplementedError

    def infimum_on(self, left: float, right: float) -> float:
        raise NotImplementedError

    def scaled(self, factor: float) -> "StiffnessProfile":
        raise NotImplementedError


@dataclass(frozen=True)
class UniformStiffness(StiffnessProfile):
    value: float

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError(f"stiffness must be positive, got {self.value}")

    @property
    def c1(self) -> float:
        return self.value

    @property
    def c2(self) -> float:
        return self.value

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.value)

    def restrict(self, left, right):
        return self.value

    def infimum_on(self, left, right):
        return self.value

    def scaled(self, factor):
        return UniformStiffness(factor * self.value)


@dataclass(frozen=True, eq=False)
class PiecewiseConstantStiffness(StiffnessProfile):
    """Constant stiffness on each segment of a partition of [0, L].

    ``breakpoints`` are the r+1 segment boundaries y_1 = 0 < ... < y_{r+1} = L,
    ``values`` the r positive segment stiffnesses.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = _as_readonly(self.breakpoints)
        vals = _as_readonly(self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if bp.ndim != 1 or vals.ndim != 1 or bp.size != vals.size + 1:
            raise ValueError("need r+1 breakpoints for r segment values")
        if bp[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(vals <= 0):
            raise ValueError("segment stiffness values must be positive")

    @property
    def length(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def c1(self) -> float:
        return float(self.values.min())

    @property
    def c2(self) -> float:
        return float(self.values.max())

    def _segment(self, x) -> np.ndarray:
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(idx, 0, self.values.size - 1)

    def __call__(self, x):
        return self.values[self._segment(np.asarray(x, dtype=float))]

    def restrict(self, left, right):
        tol = ALIGNMENT_TOL * self.length
        seg = int(self._segment(0.5 * (left + right)))
        if left < self.breakpoints[seg] - tol or right > self.breakpoints[seg + 1] + tol:
            raise MisalignedMeshError(
                f"element [{left}, {right}] spans a stiffness breakpoint"
            )
        return float(self.values[seg])

    def infimum_on(self, left, right):
        return self.restrict(left, right)

    def scaled(self, factor):
        return PiecewiseConstantStiffness(self.breakpoints, factor * self.values)


@dataclass(frozen=True, eq=False)
class PolynomialStiffness(StiffnessProfile):
    """Stiffness given by a polynomial in x on [0, length].

    ``coefficients`` are ordered lowest degree first.  Certified per-element
    infima are available only when the polynomial is monotone on [0, length]
    (always the case for stiffness built from an affine thickness or radius);
    the infimum is then attained at an element endpoint.
    """

    coefficients: np.ndarray
    length: float

    infimum_provenance = "endpoint-monotone"

    def __post_init__(self):
        coef = _as_readonly(np.atleast_1d(self.coefficients))
        object.__setattr__(self, "coefficients", coef)
        if self.length <= 0:
            raise ValueError("domain length must be positive")
        crits = self._critical_points()
        candidates = np.concatenate(([0.0, self.length], crits))
        values = npoly.polyval(candidates, coef)
        object.__setattr__(self, "_c1", float(values.min()))
        object.__setattr__(self, "_c2", float(values.max()))
        object.__setattr__(self, "_monotone", crits.size == 0)
        if self._c1 <= 0:
            raise ValueError("stiffness polynomial must be positive on the beam")

    def _critical_points(self) -> np.ndarray:
        der = npoly.polyder(npoly.polytrim(self.coefficients, tol=0.0))
        if der.size <= 1 and (der.size == 0 or der[0] == 0.0):
            return np.empty(0)
        roots = npoly.polyroots(der)
        scale = max(abs(roots).max(), 1.0) if roots.size else 1.0
        real = roots.real[np.abs(roots.imag) <= 1e-9 * scale]
        eps = 1e-12 * self.length
        return real[(real > eps) & (real < self.length - eps)]

    @property
    def degree(self) -> int:
        return int(self.coefficients.size - 1)

    @property
    def c1(self) -> float:
        return self._c1

    @property
    def c2(self) -> float:
        return self._c2

    @property
    def is_monotone(self) -> bool:
        return self._monotone

    def __call__(self, x):
        return npoly.polyval(np.asarray(x, dtype=float), self.coefficients)

    def restrict(self, left, right):
        # shift to the local coordinate xi = x - left
        shifted = npoly.Polynomial(self.coefficients)(npoly.Polynomial([left, 1.0]))
        return shifted.coef

    def infimum_on(self, left, right):
        if not self._monotone:
            raise UnsupportedProfileError(
                "cannot certify per-element infima of a non-monotone "
                "polynomial stiffness"
            )
        return float(min(self(left), self(right)))

    def scaled(self, factor):
        return PolynomialStiffness(factor * self.coefficients, self.length)


# ---------------------------------------------------------------------------
# Mesh
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Mesh:
    """Partition 0 = x_1 < x_2 < ... < x_{N+1} = L of the beam."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = _as_readonly(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a mesh needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("first mesh node must be 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("mesh nodes must be strictly increasing")

    @property
    def num_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def length(self) -> float:
        return float(self.nodes[-1])

    @property
    def element_lengths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def h(self) -> float:
        return float(self.element_lengths.max())


def make_uniform_mesh(length: float, num_elements: int) -> Mesh:
    """Equispaced partition of [0, length] into ``num_elements`` elements."""
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    if num_elements < 1:
        raise ValueError(f"need at least one element, got {num_elements}")
    return Mesh(np.linspace(0.0, length, num_elements + 1))


def check_alignment(mesh: Mesh, profile: StiffnessProfile) -> bool:
    """True iff every breakpoint of a piecewise-constant profile coincides
    with a mesh node (within ``ALIGNMENT_TOL`` times the beam length).
    Uniform and polynomial profiles are always aligned."""
    if not isinstance(profile, PiecewiseConstantStiffness):
        return True
    tol = ALIGNMENT_TOL * mesh.length
    nodes = mesh.nodes
    for y in profile.breakpoints:
        pos = np.searchsorted(nodes, y)
        near = nodes[max(pos - 1, 0):pos + 1]
        if not np.any(np.abs(near - y) <= tol):
            return False
    return True


# ---------------------------------------------------------------------------
# Geometry -> stiffness
# ---------------------------------------------------------------------------

def _second_moment_factor(section) -> tuple:
    """Return (multiplier, exponent) such that EI = E * multiplier * d**exponent
    for the section's governing dimension d."""
    if isinstance(section, RectangularSection):
        return section.width / 12.0, 3
    if isinstance(section, CircularSection):
        return np.pi / 4.0, 4
    raise TypeError(f"unknown cross-section {section!r}")


def stiffness_from_geometry(geometry: BeamGeometry) -> StiffnessProfile:
    """Bending stiffness E*I(x) implied by the beam geometry.

    Rectangular sections give E*b*t(x)^3/12, circular ones E*pi*r(x)^4/4.
    Constant dimensions produce a uniform profile, stepped ones a
    piecewise-constant profile, and affine ones a polynomial profile of
    degree 3 (thickness) or 4 (radius).
    """
    section = geometry.cross_section
    factor, exponent = _second_moment_factor(section)
    scale = geometry.youngs_modulus * factor
    dim = _section_dimension(section)
    if isinstance(dim, ConstantDimension):
        return UniformStiffness(scale * dim.value**exponent)
    if isinstance(dim, SteppedDimension):
        values = scale * np.asarray(dim.values) ** exponent
        return PiecewiseConstantStiffness(np.asarray(dim.breakpoints), values)
    if isinstance(dim, AffineDimension):
        slope = (dim.end - dim.start) / geometry.length
        line = npoly.Polynomial([dim.start, slope])
        coef = scale * (line**exponent).coef
        return PolynomialStiffness(coef, geometry.length)
    raise UnsupportedProfileError(
        f"no stiffness model for dimension profile {dim!r}"
    )
