import math

import numpy as np
import pytest
from scipy import integrate

from fracheat import DomainError
from fracheat.kernel import (
    FractionalOrder,
    KernelSpec,
    decay_sandwich,
    far_field_series,
    fourier_multiplier,
    gradient_bound_ratio,
    kernel_mass,
    marginal_1d,
    poisson_explicit,
    poisson_radial,
    poisson_semigroup_defect,
    radial_profile,
)


def test_fractional_order_regimes():
    assert FractionalOrder(0.3).regime == "sub"
    assert FractionalOrder(0.5).regime == "critical"
    assert FractionalOrder(0.7).regime == "super"
    with pytest.raises(DomainError):
        FractionalOrder(1.0)


def test_kernel_spec_mass():
    assert KernelSpec(2, 0.5).mass == 1.0
    assert KernelSpec(2, 0.5, normalized=False).mass == pytest.approx(2 * math.pi)
    assert KernelSpec(2, 0.7, normalized=False).mass == 1.0


class TestMultiplier:
    def test_zero_frequency(self):
        for n in (1, 2, 3):
            assert fourier_multiplier(0.0, 0.3, 0.4, n) == pytest.approx((2 * math.pi) ** (-n / 2))

    def test_unit_point(self):
        assert fourier_multiplier(1.0, 1.0, 0.5, 2) == pytest.approx(math.exp(-1.0) / (2 * math.pi))

    def test_decay(self):
        assert fourier_multiplier(2.0, 1e6, 0.6, 2) == 0.0


class TestPoisson:
    def test_origin_values(self):
        assert poisson_explicit(np.zeros(1), 1.0, KernelSpec(1, 0.5)) == pytest.approx(1.0 / math.pi)
        assert poisson_explicit(np.zeros(2), 1.0, KernelSpec(2, 0.5)) == pytest.approx(1.0 / (2 * math.pi))

    def test_mass(self):
        f = lambda r: 2 * math.pi * r * poisson_radial(r, 0.7, 2)
        m, _ = integrate.quad(f, 0, np.inf, epsabs=1e-13, limit=400)
        assert m == pytest.approx(1.0, abs=1e-8)

    def test_requires_half(self):
        with pytest.raises(DomainError):
            poisson_explicit(np.zeros(2), 1.0, KernelSpec(2, 0.4))


class TestRadialProfile:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_half_matches_closed_form(self, n):
        r = np.array([0.0, 0.1, 0.5, 1.0, 3.0, 10.0])
        got = radial_profile(r, 0.4, n, 0.5)
        assert np.max(np.abs(got - poisson_radial(r, 0.4, n))) <= 1e-6

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
    def test_mass(self, n, s):
        assert kernel_mass(1.0, n, s) == pytest.approx(1.0, abs=1e-5)

    @pytest.mark.parametrize("n,s", [(1, 0.3), (2, 0.75), (3, 0.5)])
    def test_scaling(self, n, s):
        t = 0.05
        r = np.array([0.01, 0.2, 1.0, 4.0])
        lhs = radial_profile(r, t, n, s)
        rhs = t ** (-n / (2 * s)) * radial_profile(r * t ** (-1 / (2 * s)), 1.0, n, s)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-8)

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
    def test_positivity(self, n, s):
        t = 0.3
        r = np.concatenate([[0.0], np.geomspace(1e-3, 50.0, 60) * t ** (1 / (2 * s))])
        assert np.all(radial_profile(r, t, n, s) >= -1e-10)

    def test_far_field_agrees_with_inversion(self):
        r = np.array([20.0, 40.0])
        np.testing.assert_allclose(far_field_series(r, 1.0, 2, 0.3), radial_profile(r, 1.0, 2, 0.3), rtol=1e-6)


class TestMarginal:
    def test_cauchy(self):
        z = np.array([0.0, 0.3, 2.0, 7.0])
        t = 0.5
        np.testing.assert_allclose(marginal_1d(z, t, 0.5), t / (np.pi * (z * z + t * t)), atol=1e-8)

    @pytest.mark.parametrize("s", [0.3, 0.6, 0.8])
    def test_unit_mass(self, s):
        assert kernel_mass(0.7, 1, s) == pytest.approx(1.0, abs=1e-6)

    def test_even(self):
        z = np.array([0.4, 1.7])
        np.testing.assert_array_equal(marginal_1d(-z, 0.2, 0.7), marginal_1d(z, 0.2, 0.7))

    def test_independent_of_dimension(self):
        # integrate the 2-D kernel over the transverse line at fixed z1
        z1, t, s = 0.8, 1.0, 0.6
        f = lambda y: radial_profile(np.array([math.hypot(z1, y)]), t, 2, s)[0]
        val, _ = integrate.quad(f, -np.inf, np.inf, epsabs=1e-11, limit=400)
        assert val == pytest.approx(float(marginal_1d(z1, t, s)), rel=1e-6)


@pytest.mark.parametrize("n,s", [(1, 0.25), (2, 0.25), (1, 0.75), (2, 0.75)])
def test_decay_sandwich(n, s):
    lo, hi = decay_sandwich(n, s)
    assert 0 < lo <= hi < np.inf


def test_semigroup_law_real_space():
    assert poisson_semigroup_defect(0.7, 0.3, 0.5) <= 1e-6


def test_gradient_bound_stable():
    vals = [gradient_bound_ratio(t, 2, 0.75) for t in (0.1, 0.01, 0.001)]
    assert all(np.isfinite(vals))
    assert max(vals) / min(vals) <= 2.0


def test_bad_time():
    with pytest.raises(DomainError):
        radial_profile(1.0, 0.0, 2, 0.5)
