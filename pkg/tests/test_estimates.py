"""Inequality-lab checks: oracle pairings, lemma sweeps, measured constants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gevreyflow import estimates
from gevreyflow.errors import ConfigurationError
from gevreyflow.grid import GridSpec, SpectralField
from gevreyflow.models import AnalyticSeries, initial_data, random_gevrey_field

from conftest import complex_scalar, complex_velocity, real_velocity

seeds = st.integers(min_value=0, max_value=10**6)


class TestEulerEstimate:
    def test_real_taylor_green_lhs_vanishes(self, grid2d):
        u = initial_data("taylor_green_2d", grid2d).members["u"]
        rep = estimates.verify_euler_estimate(u, 2.0, 0.5)
        assert rep.lhs < 1e-12
        assert rep.rhs_without_c > 0

    @given(seed=seeds)
    @settings(max_examples=10, deadline=None)
    def test_oracle_and_fft_paths_agree(self, grid2d, seed):
        u = complex_velocity(grid2d, seed)
        rep = estimates.verify_euler_estimate(u, 2.0, 0.3)
        scale = max(rep.rhs_without_c, 1e-30)
        assert abs(rep.lhs - rep.lhs_fft) / scale < 1e-10

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_ratio_invariant_under_scaling(self, grid2d, lam):
        u = complex_velocity(grid2d, 7)
        scaled = u.with_coeffs(u.coeffs * lam)
        r1 = estimates.verify_euler_estimate(u, 2.0, 0.3).ratio
        r2 = estimates.verify_euler_estimate(scaled, 2.0, 0.3).ratio
        assert r2 == pytest.approx(r1, rel=1e-12)

    @pytest.mark.parametrize("phi", [math.pi / 4, math.pi / 2])
    def test_inequality_survives_phase_rotation(self, grid2d, phi):
        u = complex_velocity(grid2d, 8)
        base = estimates.verify_euler_estimate(u, 2.0, 0.3)
        c_emp = 1.1 * base.ratio + 1e-3
        rotated = u.with_coeffs(u.coeffs * complex(math.cos(phi), math.sin(phi)))
        rep = estimates.verify_euler_estimate(rotated, 2.0, 0.3)
        assert rep.lhs <= c_emp * rep.rhs_without_c or rep.ratio <= 1.0


class TestSqgEstimate:
    def test_catalog_state_ratio(self, grid2d):
        eta = initial_data("sqg_two_mode", grid2d).members["eta"]
        rep = estimates.verify_sqg_estimate(eta, 2.0, 0.3)
        assert math.isfinite(rep.ratio)
        scale = max(rep.rhs_without_c, 1e-30)
        assert abs(rep.lhs - rep.lhs_fft) / scale < 1e-10

    def test_rejects_three_dimensions(self, grid3d):
        eta = random_gevrey_field(grid3d, 1, 0, 1.0, hermitian=True, div_free=False)
        with pytest.raises(ConfigurationError):
            estimates.verify_sqg_estimate(eta, 2.5, 0.3)


class TestPairEstimate:
    @given(seed=seeds)
    @settings(max_examples=5, deadline=None)
    def test_paths_agree(self, grid2d, seed):
        a = complex_velocity(grid2d, seed)
        b = complex_velocity(grid2d, seed + 13)
        rep = estimates.verify_pair_advection_estimate(a, b, 2.0, 0.3)
        scale = max(rep.rhs_without_c, 1e-30)
        assert abs(rep.lhs - rep.lhs_fft) / scale < 1e-10


class TestAnalyticEstimate:
    def test_linear_real_field_skew(self, grid2d):
        u = random_gevrey_field(grid2d, 1, 4, 1.0, hermitian=True, div_free=False)
        agg, per_term = estimates.verify_analytic_estimate(
            u, AnalyticSeries((1.0,)), 2.0, 0.3
        )
        # <d_x u, W u> vanishes for real u by skew symmetry of d_x
        assert agg.lhs < 1e-12 * max(agg.rhs_without_c, 1.0)
        assert per_term[0].meta["n"] == 1

    @given(seed=seeds)
    @settings(max_examples=10, deadline=None)
    def test_square_term_within_measured_constant(self, grid2d, seed):
        u = complex_scalar(grid2d, seed)
        _, per_term = estimates.verify_analytic_estimate(u, AnalyticSeries((0.0, 1.0)), 2.0, 0.3)
        assert per_term[1].ratio < 1.0


class TestWavenumberLemmas:
    def test_exhaustive_sweep_clean(self):
        reports = estimates.verify_wavenumber_lemmas(shell_max=16, r=2.0)
        for rep in reports.values():
            assert rep.violations == 0
        assert reports["split"].checked > 10**6

    @pytest.mark.parametrize("r", [1.75, 2.0, 3.0])
    def test_clean_across_exponents(self, r):
        reports = estimates.verify_wavenumber_lemmas(shell_max=8, r=r)
        assert all(rep.violations == 0 for rep in reports.values())


class TestEmpiricalConstant:
    def test_enforces_minimum_ensemble(self, grid2d):
        with pytest.raises(ConfigurationError):
            estimates.empirical_constant("euler", grid2d, 2.0, 0.3, n_samples=10)

    def test_unknown_model(self, grid2d):
        with pytest.raises(ConfigurationError):
            estimates.sample_ratio("stokes", grid2d, 2.0, 0.3, 0)

    def test_reproducible_across_seeds(self, grid2d):
        a = estimates.empirical_constant("euler", grid2d, 2.0, 0.3, n_samples=100, seed=1)
        b = estimates.empirical_constant("euler", grid2d, 2.0, 0.3, n_samples=100, seed=2)
        assert not a.degenerate and not b.degenerate
        assert abs(a.c_emp - b.c_emp) / a.c_emp < 0.2

    def test_safety_factor_applied(self, grid2d):
        m = estimates.empirical_constant("sqg", grid2d, 2.0, 0.3, n_samples=100, seed=5)
        assert m.c_emp == pytest.approx(1.1 * m.max_ratio, rel=1e-12)
        assert len(m.ratios) == 100
