import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracheat import ConfigurationError, DomainError
from fracheat.perimeter import frac_perimeter_direct, frac_perimeter_spectral
from fracheat.specialfn import cns_constant
from fracheat.shapes import Disk, rasterize, square
from fracheat.spectral import (
    IndicatorField,
    ScalarField,
    TorusGrid,
    evolve_semigroup,
    evolve_spectrum,
    forward_transform,
    gaussian_field,
    hs_norm_squared,
    inverse_transform,
    l2_norm_squared,
    sobolev_seminorm,
)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        TorusGrid(2, 1.0, 100)
    with pytest.raises(ConfigurationError):
        TorusGrid(4, 1.0, 8)


def test_indicator_rejects_non_binary():
    g = TorusGrid(1, 1.0, 8)
    with pytest.raises(DomainError):
        IndicatorField(g, np.full(8, 0.5))


class TestTransform:
    def test_constant_field(self):
        grid = TorusGrid(2, 3.0, 16)
        c = 1.7
        uh = forward_transform(ScalarField(grid, np.full(grid.shape, c)))
        assert uh.values[0, 0] == pytest.approx(c * 9.0 / (2 * math.pi), rel=1e-13)
        rest = np.abs(uh.values).ravel()[1:]
        assert rest.max() <= 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
    def test_round_trip_and_plancherel(self, seed, n):
        rng = np.random.default_rng(seed)
        grid = TorusGrid(n, rng.uniform(0.5, 10.0), 16)
        u = ScalarField(grid, rng.standard_normal(grid.shape))
        back = inverse_transform(forward_transform(u))
        np.testing.assert_allclose(back.values, u.values, atol=1e-12)
        real = float(np.sum(u.values**2) * grid.cell_volume)
        assert l2_norm_squared(u) == pytest.approx(real, rel=1e-12)

    def test_gaussian_transform(self):
        # a well-resolved Gaussian is its own transform
        grid = TorusGrid(2, 20.0, 128)
        uh = forward_transform(gaussian_field(grid))
        expected = np.exp(-0.5 * grid.xi_norm**2)
        assert np.max(np.abs(uh.values - expected)) <= 1e-10


class TestSemigroup:
    def test_identity_at_zero(self):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 64))
        np.testing.assert_array_equal(evolve_semigroup(u, 0.0, 0.3).values, u.values)

    def test_negative_time(self):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 64))
        with pytest.raises(DomainError):
            evolve_semigroup(u, -0.1, 0.3)

    def test_semigroup_law(self):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 128))
        a = evolve_semigroup(evolve_semigroup(u, 0.03, 0.6), 0.05, 0.6)
        b = evolve_semigroup(u, 0.08, 0.6)
        assert np.max(np.abs(a.values - b.values)) <= 1e-12

    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75, 1.0])
    def test_mass_and_range(self, s):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 128))
        v = evolve_semigroup(u, 0.05, s)
        assert v.integral() == pytest.approx(u.integral(), rel=1e-12)
        # positivity of the kernel up to Gibbs noise of the sampled indicator
        assert v.values.min() >= -0.1 and v.values.max() <= 1.1

    @pytest.mark.parametrize("s", [0.25, 0.4])
    def test_monotone_norms(self, s):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 128))
        uh = forward_transform(u)
        ts = np.linspace(0.0, 0.2, 21)
        l2 = [l2_norm_squared(evolve_spectrum(uh, t, s)) for t in ts]
        hs = [sobolev_seminorm(evolve_spectrum(uh, t, s), s) for t in ts]
        assert np.all(np.diff(l2) <= 1e-10)
        assert np.all(np.diff(hs) <= 1e-10)

    def test_symmetry_preserved(self):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 128))
        v = evolve_semigroup(u, 0.1, 0.4).values
        for w in (v.T, v[::-1, :], v[:, ::-1]):
            assert np.max(np.abs(w - v)) <= 1e-12


class TestSeminorm:
    def test_zero(self):
        grid = TorusGrid(2, 4.0, 32)
        assert sobolev_seminorm(ScalarField(grid, np.zeros(grid.shape)), 0.3) == 0.0

    def test_half_equals_spectral_perimeter(self):
        u = rasterize(Disk(1.0), TorusGrid(2, 8.0, 256))
        assert 0.5 * sobolev_seminorm(u, 0.25) == pytest.approx(frac_perimeter_spectral(u, 0.25), rel=1e-12)

    def test_half_close_to_direct_perimeter(self):
        # the mode sum stops at the Nyquist box; beyond it |chi_hat|^2 follows
        # P / (pi rho^3) on average, integrated here over an equal-area disk
        s, N, L = 0.25, 1024, 8.0
        u = rasterize(Disk(1.0), TorusGrid(2, L, N))
        rho_c = 2.0 / math.sqrt(math.pi) * math.pi * N / L
        tail = 2.0 * rho_c ** (2 * s - 1) / (1 - 2 * s) / cns_constant(2, s)
        direct = frac_perimeter_direct(Disk(1.0), s)
        assert 0.5 * sobolev_seminorm(u, s) + tail == pytest.approx(direct, rel=1e-2)
        # without the tail the gap closes slowly, like N^{2s-1}
        gaps = [direct - 0.5 * sobolev_seminorm(rasterize(Disk(1.0), TorusGrid(2, L, m)), s) for m in (256, 1024)]
        assert 0 < gaps[1] < gaps[0]

    def test_dilation(self):
        s, lam = 0.25, 2.0
        grid = TorusGrid(2, 16.0, 1024)
        a = sobolev_seminorm(rasterize(square(2.0), grid), s)
        b = sobolev_seminorm(rasterize(square(2.0 * lam), grid), s)
        assert b / a == pytest.approx(lam ** (2 - 2 * s), rel=1e-2)

    def test_hs_of_gaussian(self):
        # int |xi|^{2s} e^{-|xi|^2} d xi = pi Gamma(1 + s) in the plane
        smooth = TorusGrid(2, 20.0, 128)
        assert hs_norm_squared(gaussian_field(smooth), 1.0) == pytest.approx(math.pi, rel=1e-12)
        # the |xi|^{2s} cusp at the origin limits the mode sum to O(dxi^{2+2s})
        fine = TorusGrid(2, 80.0, 512)
        assert hs_norm_squared(gaussian_field(fine), 0.3) == pytest.approx(math.pi * math.gamma(1.3), rel=1e-3)
