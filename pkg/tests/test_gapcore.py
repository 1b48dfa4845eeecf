import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from bcsfield import (
    ConstantDiagonal,
    Cosine1D,
    MultiOrbitalDiagonal,
    Regime,
    canonical_time,
    constant_model_beta_c,
    constant_model_delta,
    constant_model_tau,
    dg_dt,
    dg_dx,
    dg_dz,
    g,
    solve_beta_c,
    solve_delta,
    solve_tau,
)
from bcsfield.gapcore import AdmissibilityError, ModelParams, beta_c_upper_bound

from conftest import U_DEFAULT, central_diff

TWO_PI = 2.0 * math.pi


class TestG:
    def test_constant_model_closed_form_at_2pi(self):
        # g(beta, 2pi, 0) = -16 + coth(beta/2) for b=1, e=1, U=-1/8
        m = ConstantDiagonal(1, 1.0)
        for beta in (0.05, 0.12, 0.3):
            expect = -16.0 + 1.0 / math.tanh(beta / 2.0)
            assert g(m, U_DEFAULT, beta, TWO_PI, 0.0) == pytest.approx(
                expect, abs=1e-12)

    def test_negative_at_t_pi(self):
        # at t = pi the integrand reduces to tanh(beta E)/E <= b/e_min < 2/|U|
        for m in (ConstantDiagonal(1, 1.0), MultiOrbitalDiagonal(8, 7, 1.0, 7.0),
                  Cosine1D(1.0, 1.0)):
            U = -0.9 * 2.0 * m.e_min / m.b
            for beta in (0.001, 0.5, 5.0):
                assert g(m, U, beta, math.pi, 0.0) < 0.0

    def test_small_beta_limit_sign(self):
        m = ConstantDiagonal(1, 1.0)
        assert g(m, U_DEFAULT, 0.001, math.pi, 0.0) == pytest.approx(
            -2.0 / abs(U_DEFAULT), abs=0.01)

    def test_large_z_limit(self):
        m = ConstantDiagonal(1, 1.0)
        assert g(m, U_DEFAULT, 1.0, TWO_PI, 1e6) < -2.0 / abs(U_DEFAULT) + 1e-4

    def test_preconditions(self):
        m = ConstantDiagonal(1, 1.0)
        with pytest.raises(ValueError):
            g(m, U_DEFAULT, -1.0, TWO_PI, 0.0)
        with pytest.raises(ValueError):
            g(m, 0.125, 1.0, TWO_PI, 0.0)
        with pytest.raises(ValueError):
            g(m, U_DEFAULT, 1.0, TWO_PI, -0.1)

    @given(st.floats(0.02, 0.5), st.floats(0.0, 4.0 * math.pi),
           st.floats(0.0, 3.0), st.floats(0.1, 3.0))
    @settings(max_examples=30, deadline=None)
    def test_strict_monotone_decrease_in_z(self, beta, t, z1, dz):
        m = ConstantDiagonal(1, 1.0)
        assert g(m, U_DEFAULT, beta, t, z1) > g(m, U_DEFAULT, beta, t, z1 + dz)

    @given(st.floats(0.02, 0.5), st.floats(-10.0, 10.0), st.floats(0.0, 2.0))
    @settings(max_examples=30, deadline=None)
    def test_time_symmetry(self, beta, t, z):
        m = Cosine1D(1.0, 1.0)
        base = g(m, U_DEFAULT, beta, t, z)
        assert g(m, U_DEFAULT, beta, 4.0 * math.pi - t, z) == pytest.approx(
            base, abs=1e-13)
        assert g(m, U_DEFAULT, beta, t + 4.0 * math.pi, z) == pytest.approx(
            base, abs=1e-13)


class TestDerivatives:
    def test_dg_dt_zero_at_2pi(self):
        m = ConstantDiagonal(1, 1.0)
        assert dg_dt(m, U_DEFAULT, 0.5, TWO_PI, 0.0) == 0.0

    def test_dg_dt_positive_on_pi_2pi(self):
        for m in (ConstantDiagonal(1, 1.0), Cosine1D(1.0, 1.0)):
            for t in (3.5, 4.5, 6.0):
                assert dg_dt(m, U_DEFAULT, 0.5, t, 0.0) > 0.0

    def test_against_finite_differences(self):
        rng = np.random.default_rng(11)
        models = [ConstantDiagonal(1, 1.0), MultiOrbitalDiagonal(8, 7, 1.0, 7.0),
                  Cosine1D(1.0, 1.0)]
        for _ in range(20):
            m = models[rng.integers(len(models))]
            beta = rng.uniform(0.05, 1.0)
            t = rng.uniform(0.5, 4.0 * math.pi)
            z = rng.uniform(0.1, 2.0)
            h = 1e-5
            assert dg_dx(m, U_DEFAULT, beta, t, z) == pytest.approx(
                central_diff(lambda x: g(m, U_DEFAULT, x, t, z), beta, h), abs=1e-6)
            assert dg_dt(m, U_DEFAULT, beta, t, z) == pytest.approx(
                central_diff(lambda x: g(m, U_DEFAULT, beta, x, z), t, h), abs=1e-6)
            assert dg_dz(m, U_DEFAULT, beta, t, z) == pytest.approx(
                central_diff(lambda x: g(m, U_DEFAULT, beta, t, x), z, h), abs=1e-6)

    def test_dg_dz_raw_vanishes_at_zero(self):
        m = ConstantDiagonal(1, 1.0)
        assert dg_dz(m, U_DEFAULT, 0.5, 5.0, 0.0, at_zero="raw") == 0.0

    def test_dg_dz_limit_density_at_zero(self):
        # limit of (1/z) dg/dz as z -> 0: finite and negative
        m = ConstantDiagonal(1, 1.0)
        lim = dg_dz(m, U_DEFAULT, 0.5, 5.0, 0.0, at_zero="limit")
        assert lim < 0.0
        z = 1e-4
        assert dg_dz(m, U_DEFAULT, 0.5, 5.0, z) / z == pytest.approx(lim, rel=1e-4)


class TestSolveDelta:
    def test_t_pi_always_disordered(self):
        for m in (ConstantDiagonal(1, 1.0), MultiOrbitalDiagonal(8, 7, 1.0, 7.0)):
            U = -0.9 * 2.0 * m.e_min / m.b
            res = solve_delta(m, U, 0.5, math.pi)
            assert res.regime is Regime.QMinus
            assert res.delta == 0.0

    def test_boundary_point_is_qzero(self):
        m = ConstantDiagonal(1, 1.0)
        bc = constant_model_beta_c(1, 1.0, U_DEFAULT)
        res = solve_delta(m, U_DEFAULT, bc, TWO_PI)
        assert res.regime is Regime.QZero
        assert res.delta == 0.0

    def test_ordered_point_matches_oracle(self):
        m = ConstantDiagonal(1, 1.0)
        res = solve_delta(m, U_DEFAULT, 0.06, TWO_PI)
        assert res.regime is Regime.QPlus
        assert abs(res.residual) <= 1e-10
        assert res.delta == pytest.approx(
            constant_model_delta(1, 1.0, U_DEFAULT, 0.06, TWO_PI), abs=1e-9)

    def test_scalar_relation_cross_check(self):
        m = ConstantDiagonal(1, 1.0)
        res = solve_delta(m, U_DEFAULT, 0.06, TWO_PI)
        s = math.sqrt(1.0 + res.delta**2)
        assert math.sinh(0.06 * s) / ((math.cosh(0.06 * s) - 1.0) * s) == pytest.approx(
            16.0, abs=1e-8)


class TestBetaC:
    def test_constant_model_closed_form(self):
        m = ConstantDiagonal(1, 1.0)
        bc = solve_beta_c(m, U_DEFAULT)
        assert bc == pytest.approx(constant_model_beta_c(1, 1.0, U_DEFAULT), abs=1e-10)
        assert bc == pytest.approx(0.12516285, abs=5e-7)

    def test_multi_orbital_bound_and_residual(self):
        m = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
        bc = solve_beta_c(m, U_DEFAULT)
        assert abs(g(m, U_DEFAULT, bc, TWO_PI, 0.0)) < 1e-9
        assert bc <= 2.0 * math.atanh(0.5) + 1e-10

    def test_monotone_in_coupling(self):
        m = ConstantDiagonal(1, 1.0)
        bcs = [solve_beta_c(m, -u) for u in (0.05, 0.125, 0.4, 1.0)]
        assert bcs == sorted(bcs)

    def test_inadmissible_coupling_rejected(self):
        m = ConstantDiagonal(1, 1.0)
        with pytest.raises(AdmissibilityError):
            solve_beta_c(m, -2.5)

    def test_against_brentq_oracle(self):
        # independent root finder on the same scalar function
        m = Cosine1D(1.0, 1.0)
        U = -0.5
        bc = solve_beta_c(m, U)
        ref = brentq(lambda b: g(m, U, b, TWO_PI, 0.0), 1e-4,
                     beta_c_upper_bound(m, U), xtol=1e-13)
        assert bc == pytest.approx(ref, abs=1e-10)


class TestSolveTau:
    def test_matches_constant_model_closed_form(self):
        m = ConstantDiagonal(1, 1.0)
        bc = constant_model_beta_c(1, 1.0, U_DEFAULT)
        for frac in (0.1, 0.5, 0.9):
            assert solve_tau(m, U_DEFAULT, frac * bc) == pytest.approx(
                constant_model_tau(1, 1.0, U_DEFAULT, frac * bc), abs=1e-10)

    def test_endpoint_limits(self):
        m = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
        bc = solve_beta_c(m, U_DEFAULT)
        assert solve_tau(m, U_DEFAULT, 0.999 * bc) > TWO_PI - 0.1
        assert solve_tau(m, U_DEFAULT, 0.001 * bc) > TWO_PI - 0.5

    def test_beta_above_beta_c_rejected(self):
        m = ConstantDiagonal(1, 1.0)
        bc = constant_model_beta_c(1, 1.0, U_DEFAULT)
        with pytest.raises(ValueError):
            solve_tau(m, U_DEFAULT, 2.0 * bc)

    def test_well_posedness_brackets(self):
        m = Cosine1D(1.0, 1.0)
        U = -0.5
        bc = solve_beta_c(m, U)
        for frac in np.linspace(0.05, 0.95, 7):
            beta = frac * bc
            assert g(m, U, beta, math.pi, 0.0) < 0.0
            assert g(m, U, beta, TWO_PI, 0.0) > 0.0
            tau = solve_tau(m, U, beta)
            assert math.pi < tau < TWO_PI
            assert abs(g(m, U, beta, tau, 0.0)) <= 1e-10


class TestCanonicalTime:
    def test_fixed_point(self):
        t_hat, branch = canonical_time(TWO_PI)
        assert t_hat == pytest.approx(TWO_PI)
        assert branch == {"period": 0, "reflected": False}

    def test_reflection(self):
        t_hat, branch = canonical_time(4.0 * math.pi - 0.3)
        assert t_hat == pytest.approx(0.3)
        assert branch["reflected"] is True

    def test_periodicity(self):
        t_hat, branch = canonical_time(6.0 * math.pi)
        assert t_hat == pytest.approx(TWO_PI)
        assert branch["period"] == 1

    @given(st.floats(-50.0, 50.0))
    @settings(max_examples=50, deadline=None)
    def test_preserves_cos_half(self, t):
        t_hat, _ = canonical_time(t)
        assert 0.0 <= t_hat <= TWO_PI + 1e-12
        assert math.cos(0.5 * t_hat) == pytest.approx(math.cos(0.5 * t), abs=1e-9)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(U=0.1, beta=1.0, t=0.0)
        with pytest.raises(ValueError):
            ModelParams(U=-0.1, beta=-1.0, t=0.0)

    def test_theta_conversion(self):
        p = ModelParams(U=-0.1, beta=2.0, t=6.0)
        assert p.theta == pytest.approx(3.0)
