"""Tests for the two-sided bound machinery.

Benchmark values quoted at 7 significant digits come from the published
convergence tables; arithmetic identities are checked against independent
evaluations (sampling oracles, closed forms, unit conversions).
"""

import numpy as np
import pytest

from beambounds.bounds import (
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
from beambounds.errors import UnsupportedProfileError
from beambounds.experiments import uniform_reference_eigenvalues
from beambounds.model import (
    AffineDimension,
    BeamGeometry,
    CircularSection,
    ConstantDimension,
    Mesh,
    PiecewiseConstantStiffness,
    PolynomialStiffness,
    RectangularSection,
    SteppedDimension,
    UniformStiffness,
    make_uniform_mesh,
    stiffness_from_geometry,
)

CONICAL_QUARTIC = (np.polynomial.Polynomial([0.015, -0.005]) ** 4).coef
STEPPED_SYMMETRIC = np.array(
    [0.0155, 0.010, 0.0153, 0.0192, 0.0192, 0.0153, 0.010, 0.0155])


class TestKappaVector:
    def test_uniform(self):
        kappa = kappa_vector(make_uniform_mesh(1.0, 4), UniformStiffness(2.5))
        np.testing.assert_array_equal(kappa.values, np.full(4, 2.5))
        assert kappa.provenance == "exact"

    def test_stepped_physical_form(self):
        # aligned mesh, one element per segment: kappa is E*b*t^3/12 exactly
        thicknesses = (0.015, 0.01, 0.02, 0.012)
        geometry = BeamGeometry(1.0, 21e10, RectangularSection(
            0.05, SteppedDimension((0.0, 0.25, 0.5, 0.75, 1.0), thicknesses)))
        profile = stiffness_from_geometry(geometry)
        kappa = kappa_vector(make_uniform_mesh(1.0, 4), profile)
        expected = 21e10 * 0.05 / 12.0 * np.asarray(thicknesses) ** 3
        np.testing.assert_allclose(kappa.values, expected, rtol=1e-15)

    def test_decreasing_quartic_takes_right_endpoint(self):
        profile = PolynomialStiffness(CONICAL_QUARTIC, 1.0)
        mesh = make_uniform_mesh(1.0, 8)
        kappa = kappa_vector(mesh, profile)
        assert kappa.provenance == "endpoint-monotone"
        for k in range(8):
            right = mesh.nodes[k + 1]
            assert kappa.values[k] == pytest.approx(
                (0.015 - 0.005 * right) ** 4, rel=1e-14)
            # sampling oracle: the infimum really is attained at the right end
            x = np.linspace(mesh.nodes[k], right, 1000)
            assert kappa.values[k] <= profile(x).min() * (1 + 1e-13)

    def test_non_certifiable_profile_raises(self):
        profile = PolynomialStiffness([0.35, -1.0, 1.0], 1.0)
        with pytest.raises(UnsupportedProfileError):
            kappa_vector(make_uniform_mesh(1.0, 4), profile)


class TestScaledMeshSize:
    def test_single_unit_element(self):
        mesh = Mesh(np.array([0.0, 1.0]))
        kappa = kappa_vector(mesh, UniformStiffness(1.0))
        assert scaled_mesh_size(mesh, kappa) == pytest.approx(1.0, rel=1e-15)

    def test_maximum_over_elements(self):
        mesh = Mesh(np.array([0.0, 0.5, 1.0]))
        kappa = kappa_vector(mesh, PiecewiseConstantStiffness(
            [0.0, 0.5, 1.0], [1.0, 8.0]))
        # max(0.25/1, 0.25/8) = 0.25
        assert scaled_mesh_size(mesh, kappa) == pytest.approx(0.5, rel=1e-15)

    def test_benchmark_value(self):
        mesh = make_uniform_mesh(1.0, 4)
        kappa = kappa_vector(mesh, UniformStiffness(0.015**3))
        assert scaled_mesh_size(mesh, kappa) ** 2 == pytest.approx(
            (0.25**2) / 0.015**3, rel=1e-14)
        assert scaled_mesh_size(mesh, kappa) ** 2 == pytest.approx(18518.52, rel=1e-6)


class TestInterpolationConstant:
    def test_two_pi_gives_one(self):
        assert interpolation_constant(2.0 * np.pi) == pytest.approx(1.0, rel=1e-15)

    def test_uniform_rectangular_coarsest(self):
        c_sq = interpolation_constant(np.sqrt(0.25 / 0.015**3)) ** 2
        assert c_sq == pytest.approx(0.25 / (4 * np.pi**2 * 0.015**3), rel=1e-14)
        assert c_sq == pytest.approx(1876.317, rel=1e-6)

    def test_stepped_at_eighth(self):
        # weakest segment t = 0.010 governs
        c_sq = interpolation_constant(np.sqrt((1.0 / 64.0) / 0.010**3)) ** 2
        assert c_sq == pytest.approx(395.7858, rel=1e-6)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            interpolation_constant(0.0)


class TestLowerBound:
    def test_zero_constant_is_identity(self):
        assert lower_bound(3.5, 0.0) == 3.5

    def test_uniform_rectangular_coarsest_row(self):
        c_sq = 0.25 / (4 * np.pi**2 * 0.015**3)
        assert lower_bound(1.350000e-4, c_sq) == pytest.approx(1.077154e-4, rel=5e-7)

    def test_uniform_rectangular_second_row(self):
        c_sq = (0.25 / (4 * np.pi**2 * 0.015**3)) / 4.0
        assert lower_bound(1.342419e-4, c_sq) == pytest.approx(1.262895e-4, rel=5e-7)

    @pytest.mark.parametrize("upper", [1e-7, 1e-4, 1.0, 40.0])
    @pytest.mark.parametrize("c_sq", [0.0, 1.0, 400.0, 2e3])
    def test_never_exceeds_upper(self, upper, c_sq):
        assert lower_bound(upper, c_sq) <= upper

    def test_strictly_increasing_in_upper(self):
        c_sq = 400.0
        uppers = np.geomspace(1e-6, 1e2, 25)
        values = lower_bound(uppers, c_sq)
        assert np.all(np.diff(values) > 0)

    def test_strictly_decreasing_in_constant(self):
        values = [lower_bound(1.35e-4, c) for c in np.linspace(0.0, 4e3, 25)]
        assert np.all(np.diff(values) < 0)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            lower_bound(-1.0, 1.0)
        with pytest.raises(ValueError):
            lower_bound(1.0, -1.0)


class TestTwoSidedBounds:
    def test_uniform_circular_fine_row(self):
        report = two_sided_bounds(make_uniform_mesh(1.0, 128),
                                  UniformStiffness(0.01**4), 1)
        assert report.lower[0] == pytest.approx(3.947601e-7, rel=5e-7)
        assert report.upper[0] == pytest.approx(3.947842e-7, rel=5e-7)
        assert report.guaranteed

    def test_conical_finest_row(self):
        report = two_sided_bounds(make_uniform_mesh(1.0, 256),
                                  PolynomialStiffness(CONICAL_QUARTIC, 1.0), 1)
        assert report.lower[0] == pytest.approx(8.853489e-7, rel=5e-7)
        assert report.upper[0] == pytest.approx(8.882644e-7, rel=5e-7)
        assert report.eta_rel[0] == pytest.approx(3.282e-3, abs=5e-7)
        assert report.auxiliary_eigenvalues is not None

    def test_stepped_finest_row(self):
        # the error estimate reproduces the published digits; the printed
        # segment thicknesses are rounded too coarsely to pin the eigenvalue
        # itself beyond about 2e-5 relative
        report = stepped_scaled_bounds(make_uniform_mesh(1.0, 256),
                                       STEPPED_SYMMETRIC, 1)
        assert report.eta_rel[0] == pytest.approx(6.1639e-5, abs=2e-9)
        assert report.lower[0] == pytest.approx(1.594770e-4, rel=5e-5)
        assert report.upper[0] == pytest.approx(1.594868e-4, rel=5e-5)

    def test_sandwich_on_random_stepped_profiles(self):
        rng = np.random.default_rng(5)
        grid = np.linspace(0.0, 1.0, 9)
        for _ in range(10):
            r = int(rng.integers(1, 9))
            cuts = np.sort(rng.choice(np.arange(1, 8), size=r - 1, replace=False))
            breakpoints = np.concatenate([[0.0], grid[cuts], [1.0]])
            values = rng.uniform(1e-6, 1e-2, r)
            profile = PiecewiseConstantStiffness(breakpoints, values)
            for elements in (8, 16):
                report = two_sided_bounds(make_uniform_mesh(1.0, elements),
                                          profile, 5)
                assert np.all(report.lower <= report.upper)
                assert np.all(report.eta_rel >= 0)
                assert np.all(report.eta_rel < 1)

    def test_auxiliary_eigenvalues_below_exact_profile(self):
        # same mesh: replacing the stiffness by its infima lowers every
        # discrete eigenvalue
        profile = PolynomialStiffness(CONICAL_QUARTIC, 1.0)
        for elements in (8, 16, 32):
            report = two_sided_bounds(make_uniform_mesh(1.0, elements), profile, 5)
            assert np.all(report.auxiliary_eigenvalues <= report.upper)
            assert report.auxiliary_eigenvalues[0] < report.upper[0] * (1 - 1e-6)

    def test_first_five_bracket_exact_uniform_eigenvalues(self):
        references = 0.015**3 * uniform_reference_eigenvalues(5)
        for elements in (8, 16, 32, 64, 128):
            report = two_sided_bounds(make_uniform_mesh(1.0, elements),
                                      UniformStiffness(0.015**3), 5)
            assert np.all(report.lower <= references * (1 + 1e-12))
            assert np.all(report.upper >= references * (1 - 1e-12))

    def test_halving_mesh_quarters_squared_constant(self):
        profile = UniformStiffness(0.015**3)
        coarse = two_sided_bounds(make_uniform_mesh(1.0, 8), profile, 1)
        fine = two_sided_bounds(make_uniform_mesh(1.0, 16), profile, 1)
        assert fine.c_h_sq == coarse.c_h_sq / 4.0


class TestSteppedScaledBounds:
    def test_single_segment_matches_uniform_table_value(self):
        report = stepped_scaled_bounds(make_uniform_mesh(1.0, 128), [0.015], 1)
        assert report.upper[0] == pytest.approx(1.332397e-4, rel=5e-7)

    def test_uniform_thickness_equals_physical_form_up_to_conversion(self):
        mesh = make_uniform_mesh(1.0, 16)
        scaled = stepped_scaled_bounds(mesh, [0.015], 3)
        geometry = BeamGeometry(1.0, 21e10, RectangularSection(
            0.05, ConstantDimension(0.015)))
        physical = two_sided_bounds(mesh, stiffness_from_geometry(geometry), 3)
        factor = 21e10 * 0.05 / 12.0
        np.testing.assert_allclose(physical.upper, factor * scaled.upper,
                                   rtol=1e-12)
        np.testing.assert_allclose(physical.lower, factor * scaled.lower,
                                   rtol=1e-12)

    def test_stepped_coarsest_row_estimate(self):
        report = stepped_scaled_bounds(make_uniform_mesh(1.0, 8),
                                       STEPPED_SYMMETRIC, 1)
        assert report.eta_rel[0] == pytest.approx(5.9423e-2, abs=2e-6)
        assert report.lower[0] == pytest.approx(1.501389e-4, rel=5e-5)
        assert report.upper[0] == pytest.approx(1.596242e-4, rel=5e-5)

    def test_rejects_bad_thicknesses(self):
        mesh = make_uniform_mesh(1.0, 8)
        with pytest.raises(ValueError):
            stepped_scaled_bounds(mesh, [], 1)
        with pytest.raises(ValueError):
            stepped_scaled_bounds(mesh, [0.015, -0.01], 1)


class TestCriticalLoadConversions:
    def test_rectangular(self):
        assert critical_load_rectangular(1.2e-4, 21e10, 0.05) == pytest.approx(
            21e10 * 0.05 * 1.2e-4 / 12.0, rel=1e-15)

    def test_circular(self):
        assert critical_load_circular(4e-7, 21e10) == pytest.approx(
            21e10 * np.pi * 1e-7, rel=1e-15)


class TestAnalyticFirstEigenvalue:
    def test_uniform_rectangular(self):
        geometry = BeamGeometry(1.0, 21e10, RectangularSection(
            0.05, ConstantDimension(0.015)))
        result = analytic_first_eigenvalue(geometry)
        assert result.scaled == pytest.approx(4 * np.pi**2 * 0.015**3, rel=1e-12)
        assert result.scaled == pytest.approx(1.33240e-4, rel=1e-5)
        assert result.critical_load == pytest.approx(1.165847e5, rel=5e-7)

    def test_uniform_circular(self):
        geometry = BeamGeometry(1.0, 21e10, CircularSection(ConstantDimension(0.01)))
        result = analytic_first_eigenvalue(geometry)
        assert result.scaled == pytest.approx(3.947842e-7, rel=5e-7)
        assert result.critical_load == pytest.approx(6.511318e4, rel=5e-7)

    def test_cubic_thickness_scaling(self):
        base = analytic_first_eigenvalue(BeamGeometry(
            1.0, 21e10, RectangularSection(0.05, ConstantDimension(0.015))))
        doubled = analytic_first_eigenvalue(BeamGeometry(
            1.0, 21e10, RectangularSection(0.05, ConstantDimension(0.030))))
        assert doubled.scaled == pytest.approx(8.0 * base.scaled, rel=1e-14)

    def test_non_uniform_rejected(self):
        geometry = BeamGeometry(1.0, 21e10, CircularSection(
            AffineDimension(0.015, 0.01)))
        with pytest.raises(UnsupportedProfileError):
            analytic_first_eigenvalue(geometry)
