import math

import numpy as np
import pytest

from bcsfield import (
    ConstantDiagonal,
    Cosine1D,
    MeasureFractions,
    MultiOrbitalDiagonal,
    QuadratureConfig,
    QuadratureError,
    build_bump_dispersion,
    cosine_integral_closed,
    trace_integral,
)
from bcsfield.bzquad import _grid_estimate


class TestExactSums:
    def test_multi_orbital_identity_function(self):
        # constant integrand: exact sum 7*7 + 1 = 50
        m = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
        assert trace_integral(m, lambda x: x) == pytest.approx(50.0, abs=1e-14)

    def test_constant_function_gives_c_times_b(self):
        for m in (ConstantDiagonal(3, 2.0), MultiOrbitalDiagonal(5, 2, 1.0, 4.0)):
            assert trace_integral(m, lambda x: np.full_like(x, 2.5)) == pytest.approx(
                2.5 * m.b, abs=1e-14)

    def test_zero_function(self):
        for m in (ConstantDiagonal(2, 1.0), Cosine1D(1.0, 1.0)):
            assert trace_integral(m, lambda x: np.zeros_like(x)) == 0.0

    def test_orbital_selection(self):
        m = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
        assert trace_integral(m, lambda x: x, orbital=0) == pytest.approx(7.0)
        assert trace_integral(m, lambda x: x, orbital=7) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            trace_integral(m, lambda x: x, orbital=8)


class TestCosineQuadrature:
    def test_appendix_oracle(self):
        m = Cosine1D(1.0, 1.0)
        val = trace_integral(m, lambda lam: 1.0 / (1.0 + lam * lam))
        assert val == pytest.approx(cosine_integral_closed(1.0, 1.0), abs=1e-10)

    def test_constant_integrand_on_grid_model(self):
        m = Cosine1D(1.0, 1.0)
        assert trace_integral(m, lambda x: np.full_like(x, 3.0)) == pytest.approx(
            3.0, abs=1e-12)

    def test_geometric_convergence(self):
        # periodic trapezoid on an analytic integrand: error drops by far
        # more than 10x per doubling once resolved below 1e-4
        m = Cosine1D(1.0, 1.0)
        f = lambda lam: 1.0 / (1.0 + 2.0 * lam * lam)
        exact = cosine_integral_closed(2.0, 1.0)
        errs = [abs(_grid_estimate(m, f, n, None) - exact) for n in (8, 16, 32, 64)]
        started = False
        for e1, e2 in zip(errs, errs[1:]):
            if e1 < 1e-4 and e1 > 1e-14:
                started = True
                assert e2 < 0.1 * e1
        assert started

    def test_non_convergence_reports_estimates(self):
        m = Cosine1D(1.0, 1.0)
        cfg = QuadratureConfig(base_points_per_dim=4, abs_tol=1e-11, max_doublings=1)
        with pytest.raises(QuadratureError) as exc:
            trace_integral(m, lambda lam: 1.0 / (1.0 + 50.0 * lam * lam), cfg)
        assert exc.value.last is not None
        assert exc.value.previous is not None


class TestBumpQuadrature:
    def test_smooth_integrand_converges(self):
        m = build_bump_dispersion(1, 2, MeasureFractions(0.2, 0.6), 1.0, 2.0)
        val = trace_integral(m, lambda lam: 1.0 / lam)
        # eigenvalues lie in [1, 2] and both plateau fractions contribute
        assert 2.0 / 2.0 < val < 2.0 / 1.0

    def test_2d_tensor_grid(self):
        m = build_bump_dispersion(2, 1, MeasureFractions(0.2, 0.6), 1.0, 2.0)
        cfg = QuadratureConfig(base_points_per_dim=16, abs_tol=1e-8, max_doublings=8)
        val = trace_integral(m, lambda lam: lam, cfg)
        assert 1.0 < val < 2.0


class TestConfigValidation:
    def test_rejects_bad_config(self):
        with pytest.raises(ValueError):
            QuadratureConfig(base_points_per_dim=2)
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_doublings=0)
