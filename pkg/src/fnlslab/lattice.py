"""Periodic lattice grids and discrete Fourier calculus.

The spatial domain is a periodic truncation of the square lattice with mesh
size h: sites x in h*{-n/2, ..., n/2-1}^2, box side L = n*h.  Dual
frequencies live on the grid (2*pi/L)*{-n/2, ..., n/2-1}^2, a discretization
of the torus [-pi/h, pi/h]^2.

The transform convention carries the h^d weight,

    fhat(xi) = h^2 * sum_x f(x) exp(-i x.xi),
    f(x)     = (2 pi)^{-2} * (2 pi / L)^2 * sum_xi fhat(xi) exp(i x.xi),

so that lattice-operator symbols can be written down literally.  Parseval
then reads ||f||_{L2_h}^2 = L^{-2} sum_xi |fhat(xi)|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.fft
from scipy.special import gamma


class SymbolKind(str, Enum):
    DISCRETE_FRACTIONAL = "discrete_fractional"
    CONTINUUM_FRACTIONAL = "continuum_fractional"
    LONG_RANGE = "long_range"


@dataclass(frozen=True)
class Grid:
    """Periodic n-by-n patch of the mesh-h lattice, box side L = n*h."""

    h: float
    n: int

    @property
    def L(self) -> float:
        return self.n * self.h

    def sites_1d(self) -> np.ndarray:
        return self.h * np.arange(-self.n // 2, self.n // 2)

    def site_axes(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.sites_1d()
        return np.meshgrid(x, x, indexing="ij")

    def freqs_1d(self) -> np.ndarray:
        return (2.0 * np.pi / self.L) * np.arange(-self.n // 2, self.n // 2)

    def freq_axes(self) -> tuple[np.ndarray, np.ndarray]:
        xi = self.freqs_1d()
        return np.meshgrid(xi, xi, indexing="ij")


def make_grid(h: float, n: int) -> Grid:
    """Build a grid; n must be even and >= 4, h positive (and <= 1 in use)."""
    if n % 2 != 0 or n < 4:
        raise ValueError(f"n must be even and >= 4, got n={n}")
    if not h > 0:
        raise ValueError(f"mesh size must be positive, got h={h}")
    return Grid(h=float(h), n=int(n))


@dataclass
class LatticeField:
    """Complex-valued function on a Grid, values[i, j] at x = h*(i - n/2, j - n/2)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        n = self.grid.n
        if self.values.shape != (n, n):
            raise ValueError(f"values shape {self.values.shape} != ({n}, {n})")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")


@dataclass
class SpectralField:
    """Fourier coefficients on the dual grid, h^d-weighted convention."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        n = self.grid.n
        if self.coeffs.shape != (n, n):
            raise ValueError(f"coeffs shape {self.coeffs.shape} != ({n}, {n})")


@dataclass(frozen=True)
class SymbolSpec:
    """Which Fourier multiplier acts, plus its parameters.

    kind=discrete_fractional: sigma_h(xi) = ((4/h^2) sum_i sin^2(h xi_i / 2))^(alpha/2)
    kind=continuum_fractional: |xi|^alpha
    kind=long_range: m_h^q(xi) = h^2 sum_{0 < |z|_q <= R} (1 - cos xi.z) / |z|_q^(2+alpha),
        multiplied by the normalizing coefficient c_{2,alpha} when q = 2.
    """

    kind: SymbolKind
    alpha: float
    q: float = 2.0
    truncation_radius: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if self.kind == SymbolKind.LONG_RANGE:
            if not 1.0 <= self.q:
                raise ValueError(f"q must be in [1, inf], got {self.q}")
            if self.truncation_radius is None:
                raise ValueError("long_range symbol needs a truncation radius")
            if self.q == 2.0 and not self.alpha < 2.0:
                raise ValueError("long_range q=2 requires alpha < 2 (coefficient pole)")

    def tail_bound(self) -> float:
        """Crude relative bound R^(-alpha) for the discarded kernel tail."""
        if self.kind != SymbolKind.LONG_RANGE:
            return 0.0
        return float(self.truncation_radius ** (-self.alpha))


def forward_dft(f: LatticeField) -> SpectralField:
    """h^2-weighted DFT onto the symmetric dual grid."""
    coeffs = scipy.fft.fftshift(scipy.fft.fft2(scipy.fft.ifftshift(f.values)))
    coeffs *= f.grid.h ** 2
    return SpectralField(grid=f.grid, coeffs=coeffs)


def inverse_dft(fhat: SpectralField) -> LatticeField:
    values = scipy.fft.fftshift(scipy.fft.ifft2(scipy.fft.ifftshift(fhat.coeffs)))
    values /= fhat.grid.h ** 2
    return LatticeField(grid=fhat.grid, values=values)


def lp_norm(f: LatticeField, p: float) -> float:
    """h^(2/p) (sum |f|^p)^(1/p); max |f| for p = inf."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    return float(f.grid.h ** (2.0 / p) * (a ** p).sum() ** (1.0 / p))


def l2_inner(f: LatticeField, g: LatticeField) -> complex:
    """h^2-weighted inner product <f, g> = h^2 sum f conj(g)."""
    return complex(f.grid.h ** 2 * np.vdot(g.values, f.values))


def sobolev_norm(f: LatticeField, s: float) -> float:
    """L2_h norm of <grad_h>^s f, computed spectrally with <xi> = (1+|xi|^2)^(1/2)."""
    fhat = forward_dft(f)
    xi1, xi2 = f.grid.freq_axes()
    weight = (1.0 + xi1 ** 2 + xi2 ** 2) ** s
    total = float((weight * np.abs(fhat.coeffs) ** 2).sum())
    return math.sqrt(total) / f.grid.L


def long_range_coeff(alpha: float) -> float:
    """Normalization c_{2,alpha} = 4^(alpha/2) Gamma((2+alpha)/2) / (pi |Gamma(-alpha/2)|)."""
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (0, 2), got {alpha}")
    return float(
        4.0 ** (alpha / 2.0)
        * gamma((2.0 + alpha) / 2.0)
        / (np.pi * abs(gamma(-alpha / 2.0)))
    )


def _lattice_ball(h: float, radius: float, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero lattice points z in h*Z^2 with |z|_q <= radius, and their q-norms."""
    kmax = int(math.floor(radius / h))
    ints = np.arange(-kmax, kmax + 1)
    z1, z2 = np.meshgrid(h * ints, h * ints, indexing="ij")
    if math.isinf(q):
        norms = np.maximum(np.abs(z1), np.abs(z2))
    else:
        norms = (np.abs(z1) ** q + np.abs(z2) ** q) ** (1.0 / q)
    mask = (norms > 0) & (norms <= radius)
    zs = np.stack([z1[mask], z2[mask]], axis=-1)
    return zs, norms[mask]


def _long_range_symbol(spec: SymbolSpec, xi: np.ndarray, h: float) -> np.ndarray:
    R = spec.truncation_radius
    if R < 8.0 * h:
        raise ValueError(
            f"truncation radius {R} too coarse: need R >= 8h = {8.0 * h}"
        )
    zs, norms = _lattice_ball(h, R, spec.q)
    weights = norms ** (-(2.0 + spec.alpha))
    flat = xi.reshape(-1, 2)
    out = np.empty(flat.shape[0])
    # chunked so xi-grids and the z ball never materialize a huge outer product
    step = max(1, 2 ** 22 // max(1, zs.shape[0]))
    for start in range(0, flat.shape[0], step):
        block = flat[start : start + step]
        phases = block @ zs.T
        out[start : start + step] = (1.0 - np.cos(phases)) @ weights
    out *= h ** 2
    if spec.q == 2.0:
        out *= long_range_coeff(spec.alpha)
    return out.reshape(xi.shape[:-1])


def symbol_value(spec: SymbolSpec, xi, h: float):
    """Evaluate the multiplier at frequency xi (shape (..., 2))."""
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 1
    if spec.kind == SymbolKind.DISCRETE_FRACTIONAL:
        s = (4.0 / h ** 2) * (
            np.sin(h * xi[..., 0] / 2.0) ** 2 + np.sin(h * xi[..., 1] / 2.0) ** 2
        )
        out = s ** (spec.alpha / 2.0)
    elif spec.kind == SymbolKind.CONTINUUM_FRACTIONAL:
        out = (xi[..., 0] ** 2 + xi[..., 1] ** 2) ** (spec.alpha / 2.0)
    else:
        out = _long_range_symbol(spec, xi, h)
    return float(out) if scalar else out


def symbol_on_grid(spec: SymbolSpec, grid: Grid) -> np.ndarray:
    """Multiplier sampled on the dual grid, in symmetric frequency order."""
    xi1, xi2 = grid.freq_axes()
    xi = np.stack([xi1, xi2], axis=-1)
    return symbol_value(spec, xi, grid.h)


def apply_multiplier(spec: SymbolSpec, f: LatticeField) -> LatticeField:
    """F_h^{-1} (symbol * F_h f); self-adjoint, nonnegative quadratic form."""
    sym = symbol_on_grid(spec, f.grid)
    fhat = forward_dft(f)
    return inverse_dft(SpectralField(grid=f.grid, coeffs=sym * fhat.coeffs))
