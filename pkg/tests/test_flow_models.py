"""Model right-hand sides, catalog states, and the analytic-series machinery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gevreyflow.errors import ConfigurationError, SeriesRadiusError, StateError
from gevreyflow.grid import GridSpec, l2_norm
from gevreyflow.models import (
    CATALOG,
    AnalyticSeries,
    ModelState,
    elsasser_from_primitive,
    ftilde_eval,
    initial_data,
    majorant_eval,
    primitive_from_elsasser,
    random_gevrey_field,
    rhs,
    riesz_velocity,
)
from gevreyflow.norms import cwien, gevrey_norm

from conftest import complex_velocity, real_scalar, real_velocity

seeds = st.integers(min_value=0, max_value=10**6)


class TestAnalyticSeries:
    def test_radius_from_geometric_coefficients(self):
        # a_n = 2^n: radius 1/2
        series = AnalyticSeries((2.0, 4.0, 8.0, 16.0, 32.0))
        assert series.radius_estimate() == pytest.approx(0.5, rel=0.05)

    def test_polynomial_radius_infinite(self):
        assert AnalyticSeries((0.0, 1.0)).radius_estimate() == math.inf

    def test_majorant_square(self):
        assert majorant_eval(AnalyticSeries((0.0, 1.0)), 0.3).value == pytest.approx(0.09)

    def test_majorant_divergence(self):
        series = AnalyticSeries(tuple(2.0**n for n in range(1, 9)))
        with pytest.raises(SeriesRadiusError):
            majorant_eval(series, 0.8)

    def test_ftilde_square_closed_form(self):
        # F(z)=z^2: Ftilde(s) = 2^{r+3/2} C_W s; at r=2, d=2 that is 2^{3.5}/pi * s
        val = ftilde_eval(AnalyticSeries((0.0, 1.0)), 2.0, 2, 0.7).value
        assert val == pytest.approx(2.0**3.5 / math.pi * 0.7, rel=1e-12)

    def test_ftilde_linear_is_one(self):
        assert ftilde_eval(AnalyticSeries((1.0,)), 2.0, 2, 5.0).value == pytest.approx(1.0)

    @given(s1=st.floats(0.0, 0.15), s2=st.floats(0.16, 0.3))
    @settings(max_examples=30, deadline=None)
    def test_ftilde_strictly_increasing(self, s1, s2):
        series = AnalyticSeries((0.5, 0.25, 0.125))
        assert ftilde_eval(series, 2.0, 2, s1).value < ftilde_eval(series, 2.0, 2, s2).value


class TestModelStateValidation:
    def test_unknown_tag(self, grid2d):
        with pytest.raises(StateError):
            ModelState(tag="navier", members={"u": real_velocity(grid2d, 0)})

    def test_wrong_members(self, grid2d):
        with pytest.raises(StateError):
            ModelState(tag="euler", members={"eta": real_scalar(grid2d, 0)})

    def test_sqg_is_two_dimensional(self, grid3d):
        eta = random_gevrey_field(grid3d, 1, 0, 1.0, hermitian=True, div_free=False)
        state = ModelState(tag="sqg", members={"eta": eta})
        with pytest.raises(StateError):
            state.validate()

    def test_catalog_states_validate(self, grid2d, grid3d):
        for name in CATALOG:
            grid = grid3d if name in ("taylor_green_3d",) else grid2d
            initial_data(name, grid).validate()

    def test_unknown_catalog_name(self, grid2d):
        with pytest.raises(ConfigurationError):
            initial_data("vortex_sheet", grid2d)


class TestSteadyStates:
    def test_taylor_green_2d_is_steady(self, grid2d):
        state = initial_data("taylor_green_2d", grid2d)
        tendency = rhs(state)
        assert np.max(np.abs(tendency.members["u"].coeffs)) < 1e-14

    def test_sqg_single_mode_is_steady(self, grid2d):
        state = initial_data("sqg_single_mode", grid2d)
        tendency = rhs(state)
        assert np.max(np.abs(tendency.members["eta"].coeffs)) < 1e-14

    def test_mhd_zero_elsasser_slot(self, grid2d):
        # w = 0 makes both advection terms vanish: an exact nonlinear solution
        state = initial_data("mhd_alfven", grid2d)
        tendency = rhs(state)
        for name in ("v", "w"):
            assert np.max(np.abs(tendency.members[name].coeffs)) < 1e-14


class TestTendencies:
    def test_mhd_equal_slots_reduce_to_euler(self, grid2d):
        u = real_velocity(grid2d, 17)
        mhd = ModelState(tag="mhd", members={"v": u, "w": u})
        euler = ModelState(tag="euler", members={"u": u})
        tv = rhs(mhd).members["v"].coeffs
        te = rhs(euler).members["u"].coeffs
        assert np.max(np.abs(tv - te)) < 1e-14

    def test_boussinesq_buoyancy_not_a_pure_gradient(self, grid2d):
        state = initial_data("bouss_stratified", grid2d, g=3.0)
        zero_vel = state.members["u"].with_coeffs(np.zeros_like(state.members["u"].coeffs))
        frozen = ModelState(
            tag="boussinesq",
            members={"u": zero_vel, "eta": state.members["eta"]},
            g=state.g,
            e_axis=state.e_axis,
        )
        tendency = rhs(frozen)
        assert np.max(np.abs(tendency.members["u"].coeffs)) > 1e-3

    @given(seed=seeds)
    @settings(max_examples=10, deadline=None)
    def test_tendencies_mean_free(self, grid2d, seed):
        u = real_velocity(grid2d, seed)
        eta = real_scalar(grid2d, seed + 1)
        state = ModelState(tag="boussinesq", members={"u": u, "eta": eta}, g=2.0)
        tendency = rhs(state)
        for f in tendency.members.values():
            assert abs(f.coeffs[(slice(None),) + (0, 0)]).max() == 0.0

    def test_analytic_amplitude_guard(self, grid2d):
        u = real_scalar(grid2d, 5)
        big = u.with_coeffs(u.coeffs * 1e6)
        series = AnalyticSeries(tuple(2.0**n for n in range(1, 7)))
        state = ModelState(tag="analytic", members={"u": big}, series=series)
        with pytest.raises(SeriesRadiusError):
            rhs(state)


class TestRieszVelocity:
    def test_norm_identity(self, grid2d):
        eta = real_scalar(grid2d, 23)
        u = riesz_velocity(eta)
        assert gevrey_norm(u, 2.0, 0.4) == pytest.approx(gevrey_norm(eta, 2.0, 0.4), rel=1e-12)
        assert l2_norm(u) == pytest.approx(l2_norm(eta), rel=1e-12)

    def test_divergence_free(self, grid2d):
        from gevreyflow.grid import divergence_defect

        u = riesz_velocity(real_scalar(grid2d, 24))
        assert divergence_defect(u) < 1e-13


class TestElsasser:
    @given(seed=seeds, S=st.floats(0.1, 10.0))
    @settings(max_examples=20, deadline=None)
    def test_round_trip(self, grid2d, seed, S):
        u = real_velocity(grid2d, seed)
        b = real_velocity(grid2d, seed + 7)
        v, w = elsasser_from_primitive(u, b, S)
        u2, b2 = primitive_from_elsasser(v, w, S)
        assert np.max(np.abs(u2.coeffs - u.coeffs)) < 1e-14
        assert np.max(np.abs(b2.coeffs - b.coeffs)) < 1e-14

    def test_rejects_nonpositive_s(self, grid2d):
        u = real_velocity(grid2d, 1)
        with pytest.raises(ConfigurationError):
            elsasser_from_primitive(u, u, 0.0)


class TestRandomFields:
    def test_finite_gevrey_norm(self, grid2d):
        state = initial_data("random_gevrey", grid2d, seed=7, beta_decay=1.0)
        assert math.isfinite(gevrey_norm(state.members["u"], 2.0, 0.5))

    def test_deterministic_under_seed(self, grid2d):
        a = random_gevrey_field(grid2d, 2, 9, 1.0, hermitian=False, div_free=True)
        b = random_gevrey_field(grid2d, 2, 9, 1.0, hermitian=False, div_free=True)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_complexified_not_hermitian(self, grid2d):
        from gevreyflow.grid import hermitian_defect

        f = complex_velocity(grid2d, 3)
        assert hermitian_defect(f) > 1e-6
