"""Cubic Hermite finite elements for the clamped beam buckling problem.

The element has four degrees of freedom: deflection and slope at each end,
ordered (u_left, u'_left, u_right, u'_right).  Globally the DOFs are
interleaved, node i owning indices (2i, 2i+1); clamped ends remove the four
boundary DOFs, so a mesh with N elements yields a reduced dimension of
2(N+1) - 4.

The bending form integrates sigma(x) * u'' * v'' and the geometric form
u' * v'.  Constant-coefficient elements use the classical closed-form
matrices; polynomial coefficients are integrated with Gauss-Legendre
quadrature that is exact for the integrand (5 points cover coefficient
degree up to 7), so the assembled matrices are the true Galerkin matrices
and the Rayleigh-Ritz upper-bound property is preserved.

Matrices are stored in symmetric lower-band form (bandwidth 7, i.e. three
subdiagonals); dense and sparse views are built on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import cholesky_banded
from scipy.sparse import dia_matrix

from .errors import MisalignedMeshError, SingularSystemError
from .model import (
    Mesh,
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    StiffnessProfile,
    check_alignment,
)

#: subdiagonals kept in band storage (total bandwidth 2*3 + 1 = 7)
BAND_SUB = 3

DEFAULT_QUADRATURE = 5


class HermiteBasis:
    """The four cubic Hermite shape functions on an element of length h.

    Methods take the reference coordinate s = (x - x_left)/h in [0, 1] and
    return arrays of shape (4,) + shape(s).  Each function carries unit
    value or unit slope at exactly one end DOF and zeros at the other three.
    """

    def __init__(self, length: float):
        if length <= 0:
            raise ValueError(f"element length must be positive, got {length}")
        self.length = float(length)

    def values(self, s):
        s = np.asarray(s, dtype=float)
        h = self.length
        return np.stack([
            1.0 - 3.0 * s**2 + 2.0 * s**3,
            h * (s - 2.0 * s**2 + s**3),
            3.0 * s**2 - 2.0 * s**3,
            h * (s**3 - s**2),
        ])

    def first_derivatives(self, s):
        s = np.asarray(s, dtype=float)
        h = self.length
        return np.stack([
            (-6.0 * s + 6.0 * s**2) / h,
            1.0 - 4.0 * s + 3.0 * s**2,
            (6.0 * s - 6.0 * s**2) / h,
            3.0 * s**2 - 2.0 * s,
        ])

    def second_derivatives(self, s):
        s = np.asarray(s, dtype=float)
        h = self.length
        return np.stack([
            (-6.0 + 12.0 * s) / h**2,
            (-4.0 + 6.0 * s) / h,
            (6.0 - 12.0 * s) / h**2,
            (-2.0 + 6.0 * s) / h,
        ])


def element_bending_matrix(length: float, stiffness,
                           quadrature_order: int = DEFAULT_QUADRATURE) -> np.ndarray:
    """4x4 element matrix of the bending form over one element.

    ``stiffness`` is either a positive constant (closed-form matrix) or a
    sequence of polynomial coefficients in the local coordinate, lowest
    order first (Gauss-Legendre quadrature with ``quadrature_order``
    points, exact when the coefficient degree is at most
    2*quadrature_order - 3).
    """
    if length <= 0:
        raise ValueError(f"element length must be positive, got {length}")
    h = float(length)
    if np.ndim(stiffness) == 0:
        sigma = float(stiffness)
        if sigma <= 0:
            raise ValueError(f"stiffness must be positive, got {sigma}")
        h2 = h * h
        return (sigma / h**3) * np.array([
            [12.0, 6.0 * h, -12.0, 6.0 * h],
            [6.0 * h, 4.0 * h2, -6.0 * h, 2.0 * h2],
            [-12.0, -6.0 * h, 12.0, -6.0 * h],
            [6.0 * h, 2.0 * h2, -6.0 * h, 4.0 * h2],
        ])
    coef = np.asarray(stiffness, dtype=float)
    basis = HermiteBasis(h)
    points, weights = leggauss(quadrature_order)
    mat = np.zeros((4, 4))
    for t, w in zip(points, weights):
        xi = 0.5 * h * (t + 1.0)  # local coordinate in [0, h]
        sigma = np.polynomial.polynomial.polyval(xi, coef)
        if sigma <= 0:
            raise ValueError("stiffness must be positive on the element")
        d2 = basis.second_derivatives(xi / h)
        mat += (0.5 * h * w * sigma) * np.outer(d2, d2)
    return mat


def element_geometric_matrix(length: float) -> np.ndarray:
    """4x4 element matrix of the geometric form; closed form, independent
    of the stiffness."""
    if length <= 0:
        raise ValueError(f"element length must be positive, got {length}")
    h = float(length)
    h2 = h * h
    return (1.0 / (30.0 * h)) * np.array([
        [36.0, 3.0 * h, -36.0, 3.0 * h],
        [3.0 * h, 4.0 * h2, -3.0 * h, -h2],
        [-36.0, -3.0 * h, 36.0, -3.0 * h],
        [3.0 * h, -h2, -3.0 * h, 4.0 * h2],
    ])


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """Matrix pair of the discrete eigenproblem on clamped-reduced DOFs.

    ``bending_band`` and ``geometric_band`` hold the symmetric matrices in
    lower-band storage: band[d, j] = M[j + d, j] for d = 0..3.
    """

    bending_band: np.ndarray
    geometric_band: np.ndarray
    mesh: Optional[Mesh]
    quadrature_order: int = DEFAULT_QUADRATURE

    @property
    def dimension(self) -> int:
        return self.bending_band.shape[1]

    def dof_index(self, node: int, kind: str) -> Optional[int]:
        """Reduced matrix index of a nodal DOF, or None if clamped away.

        ``kind`` is "deflection" or "slope".
        """
        if kind not in ("deflection", "slope"):
            raise ValueError(f"unknown DOF kind {kind!r}")
        if self.mesh is None:
            raise ValueError("system has no mesh attached")
        if not 0 <= node <= self.mesh.num_elements:
            raise ValueError(f"node {node} out of range")
        index = 2 * node + (0 if kind == "deflection" else 1) - 2
        if 0 <= index < self.dimension:
            return index
        return None

    def bending_dense(self) -> np.ndarray:
        return _band_to_dense(self.bending_band)

    def geometric_dense(self) -> np.ndarray:
        return _band_to_dense(self.geometric_band)

    def bending_sparse(self):
        return _band_to_sparse(self.bending_band)

    def geometric_sparse(self):
        return _band_to_sparse(self.geometric_band)


def _band_to_dense(band: np.ndarray) -> np.ndarray:
    n = band.shape[1]
    out = np.zeros((n, n))
    for d in range(band.shape[0]):
        idx = np.arange(n - d)
        out[idx + d, idx] = band[d, :n - d]
        if d:
            out[idx, idx + d] = band[d, :n - d]
    return out


def _band_to_sparse(band: np.ndarray):
    n = band.shape[1]
    sub = band.shape[0] - 1
    data = []
    offsets = []
    for d in range(-sub, sub + 1):
        row = np.zeros(n)
        k = abs(d)
        if d <= 0:
            row[:n - k] = band[k, :n - k]
        else:
            row[k:] = band[k, :n - k]
        data.append(row)
        offsets.append(d)
    return dia_matrix((np.array(data), np.array(offsets)), shape=(n, n)).tocsc()


def _scatter(band: np.ndarray, element_matrix: np.ndarray, first_node: int) -> None:
    # global DOFs 2k..2k+3 shifted by the two clamped left-end DOFs
    n = band.shape[1]
    for a in range(4):
        i = 2 * first_node + a - 2
        if not 0 <= i < n:
            continue
        for b in range(4):
            j = 2 * first_node + b - 2
            if not 0 <= j <= i:
                continue
            band[i - j, j] += element_matrix[a, b]


def _check_positive_definite(band: np.ndarray, name: str) -> None:
    if band.shape[1] == 0:
        return
    try:
        cholesky_banded(band, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"{name} matrix is not positive definite: {exc}")


def assemble_geometric_band(mesh: Mesh) -> np.ndarray:
    """Lower-band global matrix of the geometric form on reduced DOFs."""
    n = 2 * (mesh.num_elements + 1) - 4
    band = np.zeros((BAND_SUB + 1, n))
    for k in range(mesh.num_elements):
        h = mesh.nodes[k + 1] - mesh.nodes[k]
        _scatter(band, element_geometric_matrix(h), k)
    return band


def assemble_bending_band(mesh: Mesh, profile: StiffnessProfile,
                          quadrature_order: int = DEFAULT_QUADRATURE) -> np.ndarray:
    """Lower-band global matrix of the bending form on reduced DOFs."""
    if isinstance(profile, PiecewiseConstantStiffness) and not check_alignment(mesh, profile):
        raise MisalignedMeshError(
            "mesh does not align with the piecewise-constant stiffness breakpoints"
        )
    if isinstance(profile, PolynomialStiffness):
        # inexact integration would forfeit the upper-bound property
        needed = (profile.degree + 3 + 1) // 2
        if quadrature_order < needed:
            raise ValueError(
                f"stiffness of degree {profile.degree} needs at least "
                f"{needed} quadrature points for exact integration, got "
                f"{quadrature_order}"
            )
    n = 2 * (mesh.num_elements + 1) - 4
    band = np.zeros((BAND_SUB + 1, n))
    for k in range(mesh.num_elements):
        left, right = mesh.nodes[k], mesh.nodes[k + 1]
        restriction = profile.restrict(left, right)
        ke = element_bending_matrix(right - left, restriction, quadrature_order)
        _scatter(band, ke, k)
    return band


def assemble(mesh: Mesh, profile: StiffnessProfile,
             quadrature_order: int = DEFAULT_QUADRATURE) -> AssembledSystem:
    """Assemble the matrix pair for a mesh and stiffness profile.

    Raises :class:`MisalignedMeshError` when a piecewise-constant profile
    does not align with the mesh and :class:`SingularSystemError` when a
    factorization of either matrix fails.
    """
    bending = assemble_bending_band(mesh, profile, quadrature_order)
    geometric = assemble_geometric_band(mesh)
    system = AssembledSystem(bending, geometric, mesh, quadrature_order)
    _check_positive_definite(system.bending_band, "bending")
    _check_positive_definite(system.geometric_band, "geometric")
    return system


def reassemble_bending(system: AssembledSystem, profile: StiffnessProfile) -> AssembledSystem:
    """New system with the bending form reassembled for ``profile`` while
    sharing the already-assembled geometric matrix.

    This is how the auxiliary problem for variable stiffness reuses the
    geometric matrix of the exact-profile system.
    """
    if system.mesh is None:
        raise ValueError("system has no mesh attached")
    bending = assemble_bending_band(system.mesh, profile, system.quadrature_order)
    _check_positive_definite(bending, "bending")
    return AssembledSystem(bending, system.geometric_band, system.mesh,
                           system.quadrature_order)
