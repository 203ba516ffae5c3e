"""Element matrices and global assembly checked against quadrature oracles.

The oracle used throughout is plain Gauss-Legendre integration of products
of shape-function derivatives, written here independently of the
closed-form element matrices it checks.
"""

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from beambounds.errors import MisalignedMeshError
from beambounds.fem import (
    AssembledSystem,
    HermiteBasis,
    assemble,
    element_bending_matrix,
    element_geometric_matrix,
    reassemble_bending,
)
from beambounds.model import (
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    UniformStiffness,
    make_uniform_mesh,
)

CONICAL_QUARTIC = (np.polynomial.Polynomial([0.015, -0.005]) ** 4).coef


def bending_quadrature_oracle(h, sigma_coeffs, npts):
    """Integrate sigma * phi_i'' * phi_j'' over [0, h] with npts Gauss points."""
    basis = HermiteBasis(h)
    points, weights = leggauss(npts)
    out = np.zeros((4, 4))
    for t, w in zip(points, weights):
        xi = 0.5 * h * (t + 1.0)
        sigma = np.polynomial.polynomial.polyval(xi, np.atleast_1d(sigma_coeffs))
        d2 = basis.second_derivatives(xi / h)
        out += 0.5 * h * w * sigma * np.outer(d2, d2)
    return out


def geometric_quadrature_oracle(h, npts=6):
    basis = HermiteBasis(h)
    points, weights = leggauss(npts)
    out = np.zeros((4, 4))
    for t, w in zip(points, weights):
        xi = 0.5 * h * (t + 1.0)
        d1 = basis.first_derivatives(xi / h)
        out += 0.5 * h * w * np.outer(d1, d1)
    return out


class TestHermiteBasis:
    def test_kronecker_property(self):
        basis = HermiteBasis(0.7)
        values_left = basis.values(0.0)
        values_right = basis.values(1.0)
        slopes_left = basis.first_derivatives(0.0)
        slopes_right = basis.first_derivatives(1.0)
        table = np.column_stack([values_left, slopes_left, values_right, slopes_right])
        np.testing.assert_allclose(table, np.eye(4), atol=1e-14)

    def test_spans_all_cubics(self):
        rng = np.random.default_rng(7)
        h = 1.3
        coeffs = rng.standard_normal(4)
        poly = np.polynomial.Polynomial(coeffs)
        dpoly = poly.deriv()
        nodal = np.array([poly(0.0), dpoly(0.0), poly(h), dpoly(h)])
        basis = HermiteBasis(h)
        s = np.linspace(0.0, 1.0, 17)
        np.testing.assert_allclose(nodal @ basis.values(s), poly(h * s), rtol=1e-13,
                                   atol=1e-14)

    def test_rejects_nonpositive_length(self):
        with pytest.raises(ValueError):
            HermiteBasis(0.0)


class TestElementBendingMatrix:
    def test_unit_element_first_row(self):
        ke = element_bending_matrix(1.0, 1.0)
        np.testing.assert_allclose(ke[0], [12.0, 6.0, -12.0, 6.0], rtol=1e-15)

    def test_closed_form_matches_quadrature_oracle(self):
        for h in (0.25, 1.0, 3.0):
            ke = element_bending_matrix(h, 2.5)
            oracle = bending_quadrature_oracle(h, [2.5], npts=4)
            np.testing.assert_allclose(ke, oracle, rtol=1e-14)

    def test_zero_stiffness_oracle_edge_case(self):
        # the operation itself rejects sigma = 0; the oracle shows the
        # integrand vanishes
        np.testing.assert_array_equal(
            bending_quadrature_oracle(1.0, [0.0], npts=4), np.zeros((4, 4)))
        with pytest.raises(ValueError):
            element_bending_matrix(1.0, 0.0)

    def test_quartic_stiffness_matches_overintegration(self):
        ke = element_bending_matrix(0.5, CONICAL_QUARTIC, quadrature_order=5)
        oracle = bending_quadrature_oracle(0.5, CONICAL_QUARTIC, npts=20)
        np.testing.assert_allclose(ke, oracle, rtol=1e-13)

    def test_symmetric_exactly(self):
        ke = element_bending_matrix(0.3, CONICAL_QUARTIC)
        np.testing.assert_array_equal(ke, ke.T)
        kc = element_bending_matrix(0.3, 4.2)
        np.testing.assert_array_equal(kc, kc.T)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            element_bending_matrix(-1.0, 1.0)
        with pytest.raises(ValueError):
            element_bending_matrix(1.0, [-1.0, 0.1])  # negative on element


class TestElementGeometricMatrix:
    def test_unit_element_first_row(self):
        ge = element_geometric_matrix(1.0)
        np.testing.assert_allclose(ge[0], np.array([36.0, 3.0, -36.0, 3.0]) / 30.0,
                                   rtol=1e-15)

    @pytest.mark.parametrize("h", [0.25, 1.0, 4.0])
    def test_scaling_against_oracle(self, h):
        np.testing.assert_allclose(element_geometric_matrix(h),
                                   geometric_quadrature_oracle(h), rtol=1e-14)

    def test_quadratic_form_reproduces_exact_integral(self):
        # cubic with derivative x(1-x): nodal vector (0, 0, 1/6, 0);
        # integral of x^2 (1-x)^2 over [0, 1] is exactly 1/30
        v = np.array([0.0, 0.0, 1.0 / 6.0, 0.0])
        ge = element_geometric_matrix(1.0)
        assert v @ ge @ v == pytest.approx(1.0 / 30.0, rel=1e-15)

    def test_rejects_nonpositive_length(self):
        with pytest.raises(ValueError):
            element_geometric_matrix(0.0)


def dense_assembly_oracle(mesh, profile, quadrature_order=5):
    """Straightforward dense assembly with explicit DOF elimination."""
    n_nodes = mesh.num_elements + 1
    ndof = 2 * n_nodes
    A = np.zeros((ndof, ndof))
    B = np.zeros((ndof, ndof))
    for k in range(mesh.num_elements):
        left, right = mesh.nodes[k], mesh.nodes[k + 1]
        ke = element_bending_matrix(right - left, profile.restrict(left, right),
                                    quadrature_order)
        ge = element_geometric_matrix(right - left)
        dofs = np.arange(2 * k, 2 * k + 4)
        A[np.ix_(dofs, dofs)] += ke
        B[np.ix_(dofs, dofs)] += ge
    keep = np.arange(2, ndof - 2)
    return A[np.ix_(keep, keep)], B[np.ix_(keep, keep)]


class TestAssemble:
    def test_two_elements_reduce_to_middle_node(self):
        system = assemble(make_uniform_mesh(1.0, 2), UniformStiffness(1.0))
        assert system.dimension == 2

    def test_dimension_count(self):
        system = assemble(make_uniform_mesh(1.0, 4), UniformStiffness(0.015**3))
        assert system.dimension == 6

    @pytest.mark.parametrize("profile", [
        UniformStiffness(0.015**3),
        PiecewiseConstantStiffness(np.linspace(0, 1, 9),
                                   np.linspace(1e-6, 8e-6, 8)),
        PolynomialStiffness(CONICAL_QUARTIC, 1.0),
    ])
    def test_matches_dense_assembly_oracle(self, profile):
        mesh = make_uniform_mesh(1.0, 8)
        system = assemble(mesh, profile)
        A_oracle, B_oracle = dense_assembly_oracle(mesh, profile)
        np.testing.assert_array_equal(system.bending_dense(), A_oracle)
        np.testing.assert_array_equal(system.geometric_dense(), B_oracle)
        np.testing.assert_allclose(system.bending_sparse().toarray(), A_oracle,
                                   rtol=0, atol=0)

    def test_symmetric_positive_definite(self):
        mesh = make_uniform_mesh(1.0, 8)
        profile = PiecewiseConstantStiffness(np.linspace(0, 1, 9),
                                             np.linspace(1e-6, 8e-6, 8))
        system = assemble(mesh, profile)
        A = system.bending_dense()
        B = system.geometric_dense()
        np.testing.assert_array_equal(A, A.T)
        np.testing.assert_array_equal(B, B.T)
        assert np.linalg.eigvalsh(A).min() > 0
        assert np.linalg.eigvalsh(B).min() > 0

    def test_quadratic_forms_positive_on_random_vectors(self):
        rng = np.random.default_rng(11)
        system = assemble(make_uniform_mesh(1.0, 16), UniformStiffness(2.0))
        A = system.bending_dense()
        B = system.geometric_dense()
        for _ in range(100):
            v = rng.standard_normal(system.dimension)
            assert v @ A @ v > 0
            assert v @ B @ v > 0

    @pytest.mark.parametrize("profile", [
        PiecewiseConstantStiffness([0.0, 0.5, 1.0], [2.0, 3.0]),
        PolynomialStiffness(CONICAL_QUARTIC, 1.0),
    ])
    def test_quadratic_forms_reproduce_integrals_of_discrete_functions(self, profile):
        # v' and v'' of a random clamped piecewise cubic, integrated by
        # 20-point Gauss per element, must match the quadratic forms
        rng = np.random.default_rng(3)
        mesh = make_uniform_mesh(1.0, 4)
        system = assemble(mesh, profile)
        v = rng.standard_normal(system.dimension)
        full = np.concatenate([[0.0, 0.0], v, [0.0, 0.0]])
        points, weights = leggauss(20)
        bending_integral = 0.0
        geometric_integral = 0.0
        for k in range(mesh.num_elements):
            left, right = mesh.nodes[k], mesh.nodes[k + 1]
            h = right - left
            basis = HermiteBasis(h)
            local = full[2 * k: 2 * k + 4]
            x = 0.5 * (left + right) + 0.5 * h * points
            w = 0.5 * h * weights
            curv = local @ basis.second_derivatives((x - left) / h)
            slope = local @ basis.first_derivatives((x - left) / h)
            bending_integral += w @ (profile(x) * curv**2)
            geometric_integral += w @ slope**2
        assert v @ system.bending_dense() @ v == pytest.approx(
            bending_integral, rel=1e-12)
        assert v @ system.geometric_dense() @ v == pytest.approx(
            geometric_integral, rel=1e-12)

    @pytest.mark.parametrize("factor", [0.5, 2.0, 4.0])
    def test_dyadic_profile_scaling_is_exact(self, factor):
        mesh = make_uniform_mesh(1.0, 8)
        profile = PiecewiseConstantStiffness(np.linspace(0, 1, 9),
                                             np.linspace(1.0, 8.0, 8))
        base = assemble(mesh, profile)
        scaled = assemble(mesh, profile.scaled(factor))
        np.testing.assert_array_equal(scaled.bending_band,
                                      factor * base.bending_band)
        np.testing.assert_array_equal(scaled.geometric_band, base.geometric_band)

    def test_general_profile_scaling(self):
        mesh = make_uniform_mesh(1.0, 8)
        profile = UniformStiffness(1.7)
        base = assemble(mesh, profile)
        scaled = assemble(mesh, profile.scaled(3.0))
        np.testing.assert_allclose(scaled.bending_band, 3.0 * base.bending_band,
                                   rtol=1e-15)

    def test_misaligned_mesh_raises(self):
        profile = PiecewiseConstantStiffness([0.0, 0.5, 1.0], [1.0, 2.0])
        with pytest.raises(MisalignedMeshError):
            assemble(make_uniform_mesh(1.0, 3), profile)

    def test_insufficient_quadrature_rejected(self):
        # 3-point Gauss cannot integrate a quartic coefficient exactly, and
        # inexact integration would forfeit the upper-bound property
        profile = PolynomialStiffness(CONICAL_QUARTIC, 1.0)
        with pytest.raises(ValueError):
            assemble(make_uniform_mesh(1.0, 4), profile, quadrature_order=3)
        assemble(make_uniform_mesh(1.0, 4), profile, quadrature_order=4)

    def test_dof_index_mapping(self):
        system = assemble(make_uniform_mesh(1.0, 4), UniformStiffness(1.0))
        assert system.dof_index(0, "deflection") is None
        assert system.dof_index(0, "slope") is None
        assert system.dof_index(1, "deflection") == 0
        assert system.dof_index(1, "slope") == 1
        assert system.dof_index(3, "slope") == 5
        assert system.dof_index(4, "deflection") is None
        with pytest.raises(ValueError):
            system.dof_index(1, "rotation")

    def test_reassemble_bending_shares_geometric_matrix(self):
        mesh = make_uniform_mesh(1.0, 8)
        system = assemble(mesh, PolynomialStiffness(CONICAL_QUARTIC, 1.0))
        aux = reassemble_bending(
            system, PiecewiseConstantStiffness(mesh.nodes,
                                               np.full(8, 1e-8)))
        assert aux.geometric_band is system.geometric_band
        assert not np.array_equal(aux.bending_band, system.bending_band)
