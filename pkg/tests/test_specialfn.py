import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, optimize

from fracheat import DomainError
from fracheat.specialfn import (
    ConstantsTable,
    ball_volume,
    beta_fn,
    beta_trig_integral,
    bessel_j,
    cns_constant,
    gamma_fn,
    gamma_limit_constant,
    log_gamma,
    poisson_normalization,
    printed_gamma_candidates,
    radial_power_integral,
    radial_power_integral_quad,
    slab_constant,
    sphere_area,
)
from fracheat.spectral import gagliardo_gaussian_check


class TestGamma:
    def test_half(self):
        assert gamma_fn(0.5) == pytest.approx(1.7724538509055159, rel=1e-13)

    def test_one(self):
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_third_against_euler_integral(self):
        # Gamma(x) = int_0^inf r^{x-1} e^{-r} dr, split where the singularity sits
        f = lambda r: r ** (1.0 / 3.0 - 1.0) * math.exp(-r)
        a, _ = integrate.quad(f, 0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
        b, _ = integrate.quad(f, 1.0, np.inf, epsabs=0, epsrel=1e-13, limit=200)
        assert gamma_fn(1.0 / 3.0) == pytest.approx(a + b, rel=1e-10)
        assert gamma_fn(1.0 / 3.0) == pytest.approx(2.678938535, abs=1e-9)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0])
    def test_poles(self, x):
        with pytest.raises(DomainError):
            gamma_fn(x)

    def test_accuracy_on_range(self):
        xs = np.linspace(0.1, 30.0, 300)
        err = max(abs(gamma_fn(x) / math.gamma(x) - 1.0) for x in xs)
        assert err <= 1e-12

    @given(st.floats(0.5, 20.0))
    def test_recurrence(self, x):
        assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)

    def test_log_gamma(self):
        assert log_gamma(50.5) == pytest.approx(math.lgamma(50.5), rel=1e-13)


class TestBeta:
    def test_examples(self):
        assert beta_fn(1, 1) == pytest.approx(1.0, rel=1e-14)
        assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)
        assert beta_fn(1.5, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-13)

    def test_trig_definition(self):
        for x, y in [(0.5, 0.5), (1.5, 1.0), (0.3, 2.2)]:
            assert beta_trig_integral(x, y) == pytest.approx(beta_fn(x, y), rel=1e-9)

    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
    def test_symmetry(self, x, y):
        assert beta_fn(x, y) == pytest.approx(beta_fn(y, x), rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            beta_fn(-1.0, 1.0)


class TestBessel:
    def test_values_at_zero(self):
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(0, 0.0) == 1.0

    def test_first_zero_of_j1(self):
        z = optimize.brentq(lambda x: bessel_j(1, x), 3.0, 4.5, xtol=1e-14)
        assert z == pytest.approx(3.8317060, abs=1e-6)
        assert abs(bessel_j(1, 3.8317060)) < 1e-6

    def test_against_series(self):
        # J0(x) = sum (-1)^k (x/2)^{2k} / (k!)^2
        x = 2.5
        series = sum((-1) ** k * (x / 2) ** (2 * k) / math.factorial(k) ** 2 for k in range(40))
        assert bessel_j(0, x) == pytest.approx(series, abs=1e-12)

    def test_unsupported_order(self):
        with pytest.raises(DomainError):
            bessel_j(2, 1.0)


def test_sphere_area():
    assert sphere_area(0) == 2.0
    assert sphere_area(1) == pytest.approx(2 * math.pi)
    assert sphere_area(2) == pytest.approx(4 * math.pi)
    for k in range(1, 6):
        assert sphere_area(k) == pytest.approx((k + 1) * ball_volume(k + 1), rel=1e-13)


class TestRadialPowerIntegral:
    def test_examples(self):
        assert radial_power_integral(1, 0, 3) == pytest.approx(2.0, rel=1e-12)
        assert radial_power_integral(2, 0, 4) == pytest.approx(math.pi, rel=1e-12)
        assert radial_power_integral(1, 2, 5) == pytest.approx(2.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("k,b,a", [(1, 0, 3), (2, 0, 4), (1, 2, 5), (2, 0.5, 3.7), (3, 1.0, 6.0), (2, -1.2, 2.5)])
    def test_closed_matches_quadrature(self, k, b, a):
        assert radial_power_integral(k, b, a) == pytest.approx(radial_power_integral_quad(k, b, a), rel=1e-8)

    def test_constraints(self):
        with pytest.raises(DomainError):
            radial_power_integral(2, -3.0, 4.0)
        with pytest.raises(DomainError):
            radial_power_integral(1, 0.0, 1.0)


class TestCns:
    def test_positive(self):
        for n in (1, 2, 3):
            for s in (0.05, 0.25, 0.5, 0.75, 0.95):
                assert cns_constant(n, s) > 0

    def test_closed_matches_quadrature(self):
        for n in (1, 2, 3):
            for s in (0.1, 0.25, 0.5, 0.75):
                assert cns_constant(n, s) == pytest.approx(cns_constant(n, s, "quadrature"), rel=1e-8)

    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("s", [0.1, 0.25, 0.4])
    def test_gaussian_plancherel(self, n, s):
        real, fourier = gagliardo_gaussian_check(n, s)
        assert real == pytest.approx(fourier, rel=5e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            cns_constant(2, 1.0)


class TestGammaLimitConstant:
    def test_critical_raw(self):
        assert gamma_limit_constant(2, 0.5, False) == pytest.approx(2.0, rel=1e-12)
        assert slab_constant(2, "quadrature") == pytest.approx(2.0, rel=1e-10)

    def test_critical_normalized(self):
        assert gamma_limit_constant(2, 0.5, True) == pytest.approx(1.0 / math.pi, rel=1e-12)
        assert poisson_normalization(2, "quadrature") == pytest.approx(1.0 / (2 * math.pi), rel=1e-10)

    def test_super_critical_matches_halfspace_oracle(self):
        # the first absolute half-moment of the marginal kernel, by kernel quadrature
        from fracheat.asymptotics import halfspace_moment_quadrature

        oracle = halfspace_moment_quadrature(0.75)
        assert gamma_limit_constant(2, 0.75) == pytest.approx(oracle, rel=1e-6)

    def test_printed_main_candidate_is_half_the_oracle(self):
        # Gamma(1/3)/(2 pi) = 0.426367 is exactly half of the computed rate
        cand = printed_gamma_candidates(2, 0.75)
        assert cand["main"] == pytest.approx(0.426366, abs=1e-6)
        assert gamma_limit_constant(2, 0.75) / cand["main"] == pytest.approx(2.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_limit_constant(2, 0.4)
        with pytest.raises(DomainError):
            gamma_limit_constant(1, 0.75)

    def test_pole_near_half(self):
        assert gamma_fn(1.0 - 1.0 / (2.0 * 0.5005)) > 1e3


@pytest.mark.parametrize("n,s", [(1, 0.25), (2, 0.25), (2, 0.5), (2, 0.75), (3, 0.6)])
def test_constants_table(n, s):
    table = ConstantsTable.build(n, s)
    for entry in table.entries().values():
        assert math.isfinite(entry.value) and entry.value > 0
        assert entry.rel_diff <= 5e-3
    d = table.to_dict()
    assert d["n"] == n and "c_ns" in d
