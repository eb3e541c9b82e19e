"""Cell-average discretization, piecewise-linear interpolation, and error norms."""

import numpy as np
import pytest

from fnlslab.discretize import (
    ContinuumFunction,
    continuum_l2_error,
    continuum_sobolev_norm,
    discretize_dh,
    gaussian,
    interpolate_ph,
)
from fnlslab.lattice import make_grid, sobolev_norm


def fit_slope(hs, errs):
    return np.polyfit(np.log(hs), np.log(errs), 1)[0]


class TestDiscretizeDh:
    def test_constant_is_exact(self):
        g = make_grid(h=0.5, n=8)
        u = ContinuumFunction(lambda x1, x2: np.full_like(x1, 3.0 - 2.0j, dtype=complex))
        f = discretize_dh(u, g)
        assert np.allclose(f.values, 3.0 - 2.0j, rtol=1e-14)

    def test_linear_shift(self):
        # cell average of x1 over x + [0,h)^2 is x1 + h/2, exactly at order >= 2
        g = make_grid(h=0.25, n=8)
        u = ContinuumFunction(lambda x1, x2: x1.astype(complex))
        f = discretize_dh(u, g, quad_order=2)
        x1, _ = g.site_axes()
        assert np.max(np.abs(f.values - (x1 + g.h / 2.0))) < 1e-14

    def test_gaussian_self_refinement(self):
        g = make_grid(h=2.0 ** -3, n=32)
        u = gaussian()
        f4 = discretize_dh(u, g, quad_order=4)
        f8 = discretize_dh(u, g, quad_order=8)
        assert np.max(np.abs(f4.values - f8.values)) < 1e-10

    def test_rejects_low_order(self):
        g = make_grid(h=0.5, n=8)
        with pytest.raises(ValueError):
            discretize_dh(gaussian(), g, quad_order=1)


class TestInterpolatePh:
    def test_constant(self):
        g = make_grid(h=0.5, n=8)
        u = ContinuumFunction(lambda x1, x2: np.full_like(x1, 1.5, dtype=complex))
        a = interpolate_ph(discretize_dh(u, g))
        pts = np.linspace(-g.L / 2, g.L / 2 - g.h, 17)
        assert np.allclose(a(pts, pts[::-1]), 1.5)

    def test_reproduces_linear_on_interior(self):
        g = make_grid(h=0.5, n=16)
        x1, _ = g.site_axes()
        f = discretize_dh(ContinuumFunction(lambda a, b: a.astype(complex)), g)
        # sampled field of x1 + h/2; interior cells reproduce the linear exactly
        interp = interpolate_ph(f)
        rng = np.random.default_rng(3)
        p1 = rng.uniform(-g.L / 2 + g.h, g.L / 2 - 2 * g.h, size=200)
        p2 = rng.uniform(-g.L / 2 + g.h, g.L / 2 - 2 * g.h, size=200)
        assert np.max(np.abs(interp(p1, p2) - (p1 + g.h / 2.0))) < 1e-13

    def test_matches_field_at_sites_exactly(self):
        g = make_grid(h=0.5, n=16)
        f = discretize_dh(gaussian(momentum=(1.0, -2.0)), g)
        interp = interpolate_ph(f)
        x1, x2 = g.site_axes()
        assert np.max(np.abs(interp(x1, x2) - f.values)) == 0.0

    def test_composition_first_order_for_smooth_data(self):
        u = gaussian()
        hs = [2.0 ** -k for k in range(3, 8)]
        errs = []
        box = 8.0
        for h in hs:
            g = make_grid(h=h, n=int(round(box / h)))
            errs.append(continuum_l2_error(interpolate_ph(discretize_dh(u, g)), u))
        slope = fit_slope(hs, errs)
        assert 0.9 <= slope <= 1.15
        assert np.all(np.diff(errs) < 0)


class TestContinuumL2Error:
    def test_zero_function(self):
        g = make_grid(h=0.5, n=8)
        zero = ContinuumFunction(lambda x1, x2: np.zeros_like(x1, dtype=complex))
        a = interpolate_ph(discretize_dh(zero, g))
        assert continuum_l2_error(a, zero) == 0.0

    def test_against_monte_carlo(self):
        g = make_grid(h=2.0 ** -5, n=2 ** 5 * 8)
        u = gaussian()
        a = interpolate_ph(discretize_dh(u, g))
        quad = continuum_l2_error(a, u)
        rng = np.random.default_rng(20240614)
        m = 10 ** 6
        p1 = rng.uniform(-g.L / 2, g.L / 2, size=m)
        p2 = rng.uniform(-g.L / 2, g.L / 2, size=m)
        sq = np.abs(a(p1, p2) - u(p1, p2)) ** 2
        mc = g.L ** 2 * np.mean(sq)
        sigma = g.L ** 2 * np.std(sq) / np.sqrt(m)
        assert abs(quad ** 2 - mc) <= 3.0 * sigma


class TestLemmaScalingProperties:
    def test_discretization_bounded_in_sobolev(self):
        # ||d_h u||_{H^beta_h} / ||u||_{H^beta} stays flat as h shrinks
        u = gaussian()
        box = 8.0
        for beta in (0.5, 1.0):
            ref = continuum_sobolev_norm(u, box, beta, n=1024)
            hs = [2.0 ** -k for k in range(3, 8)]
            ratios = []
            for h in hs:
                g = make_grid(h=h, n=int(round(box / h)))
                ratios.append(sobolev_norm(discretize_dh(u, g), beta) / ref)
            trend = fit_slope(hs, ratios)
            assert abs(trend) <= 0.05
            assert max(ratios) < 4.0

    def test_interpolation_bounded_in_sobolev(self):
        u = gaussian()
        box = 8.0
        beta = 1.0
        hs = [2.0 ** -k for k in range(3, 7)]
        ratios = []
        for h in hs:
            g = make_grid(h=h, n=int(round(box / h)))
            f = discretize_dh(u, g)
            interp = interpolate_ph(f)
            cont = continuum_sobolev_norm(interp, box, beta, n=1024)
            ratios.append(cont / sobolev_norm(f, beta))
        assert abs(fit_slope(hs, ratios)) <= 0.05

    def test_composition_rate_half_for_jump_data(self):
        # indicator of the unit disc: the classical h^(1/2) witness
        u = ContinuumFunction(
            lambda x1, x2: (x1 ** 2 + x2 ** 2 <= 1.0).astype(complex), smoothness=0.5
        )
        box = 8.0
        hs = [2.0 ** -k for k in range(3, 8)]
        errs = []
        for h in hs:
            g = make_grid(h=h, n=int(round(box / h)))
            errs.append(
                continuum_l2_error(interpolate_ph(discretize_dh(u, g)), u, quad_order=6)
            )
        slope = fit_slope(hs, errs)
        assert slope >= 0.4
        assert np.all(np.diff(errs) < 0)
