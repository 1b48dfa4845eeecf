import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bcsfield import (
    BZGeometry,
    ConstantDiagonal,
    Cosine1D,
    MeasureFractions,
    MultiOrbitalDiagonal,
    build_bump_dispersion,
    canonical_geometry,
    verify_bounds,
)

TWO_PI = 2.0 * math.pi


class TestGeometry:
    def test_canonical_normalization(self):
        for d in (1, 2, 3):
            geo = canonical_geometry(d)
            assert geo.D_d == pytest.approx((2.0 * math.pi) ** (-d), rel=1e-14)

    def test_non_canonical_normalization(self):
        basis = np.array([[2.0, 0.5], [0.0, 1.0]])
        geo = BZGeometry(2, basis)
        expect = 1.0 / (abs(np.linalg.det(basis)) * (2.0 * math.pi) ** 2)
        assert geo.D_d == pytest.approx(expect, rel=1e-14)

    def test_rejects_singular_basis(self):
        with pytest.raises(ValueError):
            BZGeometry(2, np.array([[1.0, 2.0], [2.0, 4.0]]))


class TestEigenvalues:
    def test_cosine_at_pi(self):
        # cos(pi) = -1 kills the hopping term
        m = Cosine1D(1.0, 1.0)
        assert m.eigenvalues(np.array([math.pi]))[0] == pytest.approx(1.0, abs=1e-14)

    def test_cosine_at_zero(self):
        m = Cosine1D(1.0, 1.0)
        assert m.eigenvalues(np.array([0.0]))[0] == pytest.approx(3.0, abs=1e-14)

    def test_multi_orbital_figure2(self):
        m = MultiOrbitalDiagonal(8, 7, 1.0, 7.0)
        lam = m.eigenvalues(np.array([0.37]))
        assert lam.tolist() == [7.0] * 7 + [1.0]

    def test_dimension_mismatch_rejected(self):
        m = Cosine1D(1.0, 1.0)
        with pytest.raises(ValueError):
            m.eigenvalues(np.array([0.0, 0.0]))

    @given(st.floats(-30.0, 30.0))
    @settings(max_examples=40, deadline=None)
    def test_periodicity_and_evenness(self, k):
        for m in (Cosine1D(1.3, 0.7), ConstantDiagonal(2, 1.5),
                  build_bump_dispersion(1, 1, MeasureFractions(0.2, 0.6), 1.0, 2.0)):
            lam = m.eigenvalues(np.array([k]))
            assert np.all(np.abs(m.eigenvalues(np.array([k + TWO_PI])) - lam) < 1e-12)
            assert np.all(np.abs(m.eigenvalues(np.array([-k])) - lam) < 1e-12)

    def test_deterministic(self):
        m = Cosine1D(1.0, 1.0)
        k = np.array([0.123])
        assert np.array_equal(m.eigenvalues(k), m.eigenvalues(k))


class TestVerifyBounds:
    def test_constant(self):
        assert verify_bounds(ConstantDiagonal(1, 1.0), 64) == (1.0, 1.0)

    def test_cosine(self):
        lo, hi = verify_bounds(Cosine1D(1.0, 1.0), 256)
        assert lo == pytest.approx(1.0, abs=1e-3)
        assert hi == pytest.approx(3.0, abs=1e-3)

    def test_bump(self):
        m = build_bump_dispersion(1, 1, MeasureFractions(0.25, 0.5), 1.0, 2.0)
        lo, hi = verify_bounds(m, 4096)
        assert lo == pytest.approx(1.0, abs=1e-12)
        assert hi == pytest.approx(2.0, abs=1e-12)

    def test_within_certified_range(self):
        for m in (Cosine1D(2.0, 0.5), MultiOrbitalDiagonal(4, 2, 1.0, 3.0)):
            lo, hi = verify_bounds(m, 512)
            assert lo >= m.e_min - 1e-12
            assert hi <= m.e_max + 1e-12

    def test_too_few_samples_rejected(self):
        m = build_bump_dispersion(2, 1, MeasureFractions(0.2, 0.5), 1.0, 2.0)
        with pytest.raises(ValueError):
            verify_bounds(m, 2)


class TestBump:
    def test_plateau_is_exact(self):
        m = build_bump_dispersion(1, 1, MeasureFractions(0.25, 0.5), 1.0, 2.0)
        for frac in (0.0, 0.5, 0.99):
            k = np.array([math.pi + frac * m.plateau_radius])
            assert abs(m.eigenvalues(k)[0] - 2.0) < 1e-12

    def test_outside_support_is_emin(self):
        m = build_bump_dispersion(1, 1, MeasureFractions(0.25, 0.5), 1.0, 2.0)
        for frac in (1.0, 1.5):
            k = np.array([math.pi + frac * m.support_radius])
            assert m.eigenvalues(k)[0] == 1.0

    def test_plateau_2d(self):
        m = build_bump_dispersion(2, 3, MeasureFractions(0.1, 0.4), 1.0, 2.0)
        k = np.full(2, math.pi + 0.9 * m.plateau_radius)
        lam = m.eigenvalues(k)
        assert lam.shape == (3,)
        assert np.all(np.abs(lam - 2.0) < 1e-12)

    def test_degenerate_levels_rejected(self):
        with pytest.raises(ValueError):
            build_bump_dispersion(1, 1, MeasureFractions(0.25, 0.5), 1.0, 1.0)

    def test_bad_fraction_ordering_rejected(self):
        with pytest.raises(ValueError):
            MeasureFractions(0.5, 0.25)
        with pytest.raises(ValueError):
            MeasureFractions(0.0, 0.5)

    def test_level_fractions_1d(self):
        fr = MeasureFractions(0.25, 0.5)
        m = build_bump_dispersion(1, 1, fr, 1.0, 2.0)
        n = 100000
        X = np.linspace(0.0, TWO_PI, n, endpoint=False)[:, None]
        lam = m.eigs_dual(X)[:, 0]
        top = float(np.mean(lam == 2.0))
        bot = float(np.mean(lam == 1.0))
        # equality sets can only overshoot by the float blur of the ramp tails
        blur = 1.0 / (math.log(1.0 / np.finfo(float).eps)
                      + 1.0 / (m.support_radius - m.plateau_radius)) / math.pi
        assert fr.s - 2.0 / n <= top <= fr.s + blur + 2.0 / n
        assert (1.0 - fr.t) - 2.0 / n <= bot <= (1.0 - fr.t) + blur + 2.0 / n
