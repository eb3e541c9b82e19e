"""Lattice grids, the h^d-weighted DFT, norms, and multiplier operators."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fnlslab.lattice import (
    LatticeField,
    SpectralField,
    SymbolKind,
    SymbolSpec,
    apply_multiplier,
    forward_dft,
    inverse_dft,
    l2_inner,
    long_range_coeff,
    lp_norm,
    make_grid,
    sobolev_norm,
    symbol_on_grid,
    symbol_value,
)

from conftest import random_field


def direct_dft(f):
    """O(n^4) transform straight from the definition; the FFT oracle."""
    g = f.grid
    x1, x2 = g.site_axes()
    xi = g.freqs_1d()
    out = np.empty((g.n, g.n), dtype=complex)
    for i, a in enumerate(xi):
        for j, b in enumerate(xi):
            out[i, j] = g.h ** 2 * np.sum(f.values * np.exp(-1j * (a * x1 + b * x2)))
    return out


class TestGrid:
    def test_small_grid_enumeration(self):
        g = make_grid(h=0.5, n=4)
        assert g.L == 2.0
        assert np.allclose(g.sites_1d(), [-1.0, -0.5, 0.0, 0.5])

    def test_max_dual_frequency(self):
        g = make_grid(h=1.0, n=8)
        xi = g.freqs_1d()
        assert np.max(np.abs(xi)) <= np.pi / g.h
        # largest positive frequency is pi*(1 - 2/n)/h
        assert np.isclose(xi.max(), np.pi * (1 - 2 / g.n) / g.h)

    def test_dyadic_grid(self):
        g = make_grid(h=2.0 ** -6, n=2 ** 12)
        assert g.L == 64.0

    @pytest.mark.parametrize("h,n", [(0.5, 5), (0.5, 3), (0.0, 8), (-1.0, 8)])
    def test_rejects_bad_parameters(self, h, n):
        with pytest.raises(ValueError):
            make_grid(h=h, n=n)


class TestDFT:
    def test_delta_transforms_flat(self):
        g = make_grid(h=0.5, n=8)
        vals = np.zeros((8, 8))
        vals[4, 4] = 1.0  # site x = 0
        fhat = forward_dft(LatticeField(grid=g, values=vals))
        assert np.allclose(fhat.coeffs, g.h ** 2)

    def test_constant_transforms_to_dc(self):
        g = make_grid(h=0.5, n=8)
        fhat = forward_dft(LatticeField(grid=g, values=np.ones((8, 8))))
        expected = np.zeros((8, 8), dtype=complex)
        expected[4, 4] = g.L ** 2
        assert np.allclose(fhat.coeffs, expected, atol=1e-12)

    def test_matches_direct_summation(self, grid16, rng):
        f = random_field(grid16, rng)
        fhat = forward_dft(f)
        ref = direct_dft(f)
        assert np.max(np.abs(fhat.coeffs - ref)) <= 1e-12 * np.max(np.abs(ref))

    @pytest.mark.parametrize("n", [16, 256, 1024])
    def test_round_trip(self, n, rng):
        g = make_grid(h=0.25, n=n)
        f = random_field(g, rng)
        back = inverse_dft(forward_dft(f))
        err = np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values))
        assert err <= 1e-12


class TestNorms:
    def test_constant_l2(self):
        g = make_grid(h=0.5, n=16)
        f = LatticeField(grid=g, values=np.ones((16, 16)))
        assert np.isclose(lp_norm(f, 2), g.L)

    def test_delta_l1(self):
        g = make_grid(h=0.5, n=16)
        vals = np.zeros((16, 16))
        vals[8, 8] = 1.0
        f = LatticeField(grid=g, values=vals)
        assert np.isclose(lp_norm(f, 1), g.h ** 2)

    def test_linf(self, grid16, rng):
        f = random_field(grid16, rng)
        assert lp_norm(f, math.inf) == np.max(np.abs(f.values))

    def test_rejects_p_below_one(self, grid16, rng):
        with pytest.raises(ValueError):
            lp_norm(random_field(grid16, rng), 0.5)

    def test_parseval(self, grid16, rng):
        f = random_field(grid16, rng)
        lhs = lp_norm(f, 2) ** 2
        fhat = forward_dft(f)
        rhs = np.sum(np.abs(fhat.coeffs) ** 2) / grid16.L ** 2
        assert np.isclose(lhs, rhs, rtol=1e-12)

    def test_sobolev_s0_is_l2(self, grid16, rng):
        f = random_field(grid16, rng)
        assert np.isclose(sobolev_norm(f, 0.0), lp_norm(f, 2), rtol=1e-12)

    def test_sobolev_single_mode(self):
        g = make_grid(h=0.5, n=16)
        xi0 = np.array([g.freqs_1d()[10], g.freqs_1d()[12]])
        x1, x2 = g.site_axes()
        f = LatticeField(grid=g, values=np.exp(1j * (xi0[0] * x1 + xi0[1] * x2)))
        for s in (0.5, 1.0, -1.0, 2.0):
            expected = g.L * (1.0 + xi0 @ xi0) ** (s / 2.0)
            assert np.isclose(sobolev_norm(f, s), expected, rtol=1e-10)

    def test_sobolev_s1_identity(self, grid16, rng):
        # ||<grad>f||^2 = ||f||^2 + |||grad|f||^2 with the |xi| multiplier
        f = random_field(grid16, rng)
        fhat = forward_dft(f)
        xi1, xi2 = grid16.freq_axes()
        mod = np.sqrt(xi1 ** 2 + xi2 ** 2)
        grad = inverse_dft(SpectralField(grid=grid16, coeffs=mod * fhat.coeffs))
        combined = math.sqrt(lp_norm(f, 2) ** 2 + lp_norm(grad, 2) ** 2)
        assert np.isclose(sobolev_norm(f, 1.0), combined, rtol=1e-10)


class TestSymbols:
    def test_discrete_fractional_at_zero(self):
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5)
        assert symbol_value(spec, [0.0, 0.0], h=0.5) == 0.0

    def test_corner_frequency_value(self):
        for alpha, h in [(1.5, 0.5), (1.0, 0.25), (2.0, 1.0)]:
            spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=alpha)
            corner = symbol_value(spec, [np.pi / h, np.pi / h], h=h)
            assert corner == (8.0 / h ** 2) ** (alpha / 2.0)

    def test_sup_over_dual_grid_is_corner(self):
        g = make_grid(h=0.5, n=32)
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5)
        sym = symbol_on_grid(spec, g)
        assert sym.max() == (8.0 / g.h ** 2) ** (spec.alpha / 2.0)

    def test_symbol_converges_to_continuum(self):
        # fixed xi=(1,1), alpha=1.5: sigma_h -> |xi|^alpha = 2^0.75 at rate O(h^2)
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5)
        target = 2.0 ** 0.75
        errs = []
        hs = [2.0 ** -k for k in range(2, 7)]
        for h in hs:
            errs.append(abs(symbol_value(spec, [1.0, 1.0], h=h) - target))
        rates = np.diff(np.log(errs)) / np.diff(np.log(hs))
        assert np.all(rates > 1.9) and np.all(rates < 2.1)
        assert errs[-1] < 1e-4

    def test_symbol_even_and_nonnegative(self, rng):
        h = 0.5
        specs = [
            SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5),
            SymbolSpec(SymbolKind.CONTINUUM_FRACTIONAL, alpha=1.5),
            SymbolSpec(SymbolKind.LONG_RANGE, alpha=1.5, q=2.0, truncation_radius=8 * h),
            SymbolSpec(SymbolKind.LONG_RANGE, alpha=1.2, q=1.0, truncation_radius=8 * h),
        ]
        xi = rng.uniform(-np.pi / h, np.pi / h, size=(64, 2))
        for spec in specs:
            plus = symbol_value(spec, xi, h=h)
            minus = symbol_value(spec, -xi, h=h)
            assert np.all(plus >= 0)
            assert np.max(np.abs(plus - minus)) <= 1e-12 * max(1.0, np.max(plus))


class TestLongRangeCoeff:
    def test_alpha_one_closed_form(self):
        assert np.isclose(long_range_coeff(1.0), 1.0 / (2.0 * np.pi), rtol=1e-14)

    def test_alpha_small_limit(self):
        assert long_range_coeff(1e-4) < 1e-4

    def test_alpha_three_halves_against_gamma_oracle(self):
        # evaluated with 30-digit mpmath arithmetic
        assert abs(long_range_coeff(1.5) - 0.17116712969055234) < 1e-10

    @pytest.mark.parametrize("alpha", [0.0, 2.0, 2.5, -1.0])
    def test_rejects_out_of_range(self, alpha):
        with pytest.raises(ValueError):
            long_range_coeff(alpha)


def five_point_stencil(f):
    """Direct -Delta_h with periodic wrap (the alpha=2 oracle)."""
    v = f.values
    h = f.grid.h
    lap = (
        np.roll(v, 1, axis=0)
        + np.roll(v, -1, axis=0)
        + np.roll(v, 1, axis=1)
        + np.roll(v, -1, axis=1)
        - 4.0 * v
    ) / h ** 2
    return -lap


def brute_force_long_range(spec, f):
    """Direct double lattice sum of the long-range coupling with periodic wrap."""
    g = f.grid
    kmax = int(math.floor(spec.truncation_radius / g.h))
    out = np.zeros_like(f.values)
    coeff = long_range_coeff(spec.alpha) if spec.q == 2.0 else 1.0
    for di in range(-kmax, kmax + 1):
        for dj in range(-kmax, kmax + 1):
            if di == 0 and dj == 0:
                continue
            z = g.h * np.array([di, dj], dtype=float)
            if math.isinf(spec.q):
                nz = max(abs(z[0]), abs(z[1]))
            else:
                nz = (abs(z[0]) ** spec.q + abs(z[1]) ** spec.q) ** (1.0 / spec.q)
            if nz > spec.truncation_radius:
                continue
            shifted = np.roll(np.roll(f.values, -di, axis=0), -dj, axis=1)
            out += (f.values - shifted) / nz ** (2.0 + spec.alpha)
    return coeff * g.h ** 2 * out


class TestApplyMultiplier:
    def test_alpha2_matches_stencil(self, grid16, rng):
        f = random_field(grid16, rng)
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=2.0)
        got = apply_multiplier(spec, f).values
        ref = five_point_stencil(f)
        assert np.max(np.abs(got - ref)) <= 1e-10 * np.max(np.abs(ref))

    def test_long_range_matches_brute_force(self, grid16, rng):
        f = random_field(grid16, rng)
        spec = SymbolSpec(
            SymbolKind.LONG_RANGE, alpha=1.5, q=2.0, truncation_radius=8 * grid16.h
        )
        got = apply_multiplier(spec, f).values
        ref = brute_force_long_range(spec, f)
        assert np.max(np.abs(got - ref)) <= 1e-6 * np.max(np.abs(ref))

    def test_constant_maps_to_zero(self, grid16):
        const = LatticeField(grid=grid16, values=np.full((16, 16), 2.0 + 1.0j))
        for spec in (
            SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.3),
            SymbolSpec(SymbolKind.CONTINUUM_FRACTIONAL, alpha=1.3),
            SymbolSpec(SymbolKind.LONG_RANGE, alpha=1.3, truncation_radius=8 * grid16.h),
        ):
            out = apply_multiplier(spec, const).values
            assert np.max(np.abs(out)) <= 1e-10

    def test_rejects_coarse_truncation(self, grid16, rng):
        spec = SymbolSpec(
            SymbolKind.LONG_RANGE, alpha=1.5, truncation_radius=4 * grid16.h
        )
        with pytest.raises(ValueError):
            apply_multiplier(spec, random_field(grid16, rng))

    def test_nonnegative_quadratic_form(self, grid16, rng):
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5)
        for _ in range(4):
            f = random_field(grid16, rng)
            quad = l2_inner(apply_multiplier(spec, f), f).real
            assert quad >= -1e-10 * lp_norm(f, 2) ** 2

    def test_self_adjoint(self, grid16, rng):
        spec = SymbolSpec(SymbolKind.DISCRETE_FRACTIONAL, alpha=1.5)
        f = random_field(grid16, rng)
        g = random_field(grid16, rng)
        lhs = l2_inner(apply_multiplier(spec, f), g)
        rhs = l2_inner(f, apply_multiplier(spec, g))
        assert abs(lhs - rhs) <= 1e-10 * lp_norm(f, 2) * lp_norm(g, 2)


class TestAnisotropy:
    def test_only_q2_is_direction_independent(self):
        # small-h limit of m_h^q(xi)/|xi|^alpha at |xi| = 1 along (1,0) vs (1,1)/sqrt(2)
        alpha, h, R = 1.5, 2.0 ** -4, 24.0
        dirs = [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2.0)]
        ratios = {}
        for q in (1.0, 2.0, math.inf):
            spec = SymbolSpec(SymbolKind.LONG_RANGE, alpha=alpha, q=q, truncation_radius=R)
            vals = [symbol_value(spec, d, h=h) for d in dirs]
            ratios[q] = vals[0] / vals[1]
        assert abs(ratios[1.0] - 1.0) > 0.01
        assert abs(ratios[math.inf] - 1.0) > 0.01
        # disc truncation is isotropic, so q=2 differences are well below tail size
        assert abs(ratios[2.0] - 1.0) < 0.5 * R ** -alpha


@settings(max_examples=25, deadline=None)
@given(
    p=st.floats(min_value=1.0, max_value=8.0),
    scale=st.floats(min_value=0.1, max_value=10.0),
)
def test_lp_norm_homogeneous(p, scale):
    g = make_grid(h=0.5, n=8)
    rng = np.random.default_rng(7)
    vals = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    f = LatticeField(grid=g, values=vals)
    fs = LatticeField(grid=g, values=scale * vals)
    assert np.isclose(lp_norm(fs, p), scale * lp_norm(f, p), rtol=1e-12)
