"""Maps between continuum functions and lattice fields.

d_h takes cell averages over x + [0, h)^2 (tensor Gauss quadrature); p_h is
the piecewise-linear interpolant built from forward differences,

    p_h f(x) = f(x') + D_h^+ f(x') . (x - x'),   x in x' + [0, h)^2.

Forward differences wrap periodically at the box edge, consistent with the
periodic-box truncation used everywhere else in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft

from .lattice import Grid, LatticeField

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class ContinuumFunction:
    """A function on R^2 given by a vectorized evaluator (x1, x2) -> values.

    smoothness is a reporting tag (claimed Sobolev regularity), not enforced.
    """

    evaluator: Evaluator
    smoothness: float | None = None

    def __call__(self, x1, x2):
        return self.evaluator(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))


def gaussian(
    amplitude: complex = 1.0,
    width: float = 1.0,
    momentum: tuple[float, float] = (0.0, 0.0),
) -> ContinuumFunction:
    """Complex Gaussian A exp(-|x|^2 / width^2 + i k.x)."""
    k1, k2 = momentum

    def evaluator(x1, x2):
        return amplitude * np.exp(
            -(x1 ** 2 + x2 ** 2) / width ** 2 + 1j * (k1 * x1 + k2 * x2)
        )

    return ContinuumFunction(evaluator=evaluator, smoothness=np.inf)


def _gauss_nodes(h: float, quad_order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(quad_order)
    return h * (nodes + 1.0) / 2.0, weights / 2.0  # offsets in [0, h), weights sum to 1


def discretize_dh(u: ContinuumFunction, g: Grid, quad_order: int = 4) -> LatticeField:
    """Cell averages h^{-2} int_{x+[0,h)^2} u, by tensor Gauss of given order."""
    if quad_order < 2:
        raise ValueError(f"quad_order must be >= 2, got {quad_order}")
    offs, w = _gauss_nodes(g.h, quad_order)
    x1, x2 = g.site_axes()
    acc = np.zeros((g.n, g.n), dtype=np.complex128)
    for i, oi in enumerate(offs):
        for j, oj in enumerate(offs):
            acc += (w[i] * w[j]) * u(x1 + oi, x2 + oj)
    return LatticeField(grid=g, values=acc)


@dataclass
class PiecewiseLinearInterpolant:
    """p_h f: exact at lattice sites, linear in each coordinate within a cell."""

    base: LatticeField
    d1: np.ndarray = field(init=False)
    d2: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        v = self.base.values
        h = self.base.grid.h
        self.d1 = (np.roll(v, -1, axis=0) - v) / h
        self.d2 = (np.roll(v, -1, axis=1) - v) / h

    def __call__(self, x1, x2) -> np.ndarray:
        g = self.base.grid
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        i = np.floor((x1 + g.L / 2.0) / g.h).astype(int)
        j = np.floor((x2 + g.L / 2.0) / g.h).astype(int)
        dx = x1 - (i * g.h - g.L / 2.0)
        dy = x2 - (j * g.h - g.L / 2.0)
        i %= g.n
        j %= g.n
        return self.base.values[i, j] + self.d1[i, j] * dx + self.d2[i, j] * dy


def interpolate_ph(f: LatticeField) -> PiecewiseLinearInterpolant:
    return PiecewiseLinearInterpolant(base=f)


def continuum_l2_error(
    a: PiecewiseLinearInterpolant,
    u: ContinuumFunction | Evaluator,
    quad_order: int = 4,
) -> float:
    """||a - u||_{L^2(box)} by per-cell tensor Gauss quadrature.

    Exact for the piecewise-linear part whenever quad_order >= 2.
    """
    g = a.base.grid
    offs, w = _gauss_nodes(g.h, quad_order)
    x1, x2 = g.site_axes()
    total = 0.0
    for i, oi in enumerate(offs):
        for j, oj in enumerate(offs):
            p1, p2 = x1 + oi, x2 + oj
            diff = a(p1, p2) - u(p1, p2)
            total += (w[i] * w[j]) * float(np.sum(np.abs(diff) ** 2))
    return float(np.sqrt(total * g.h ** 2))


def continuum_sobolev_norm(
    u: ContinuumFunction | Evaluator, box: float, s: float, n: int = 512
) -> float:
    """H^s norm of u, computed spectrally on a fine periodic reference grid.

    Valid for functions that decay well inside the box (periodization error
    is then negligible); used to normalize lattice/continuum comparisons.
    """
    h = box / n
    x = h * np.arange(-n // 2, n // 2)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    vals = u(x1, x2)
    coeffs = scipy.fft.fftshift(scipy.fft.fft2(scipy.fft.ifftshift(vals))) * h ** 2
    xi = (2.0 * np.pi / box) * np.arange(-n // 2, n // 2)
    xi1, xi2 = np.meshgrid(xi, xi, indexing="ij")
    weight = (1.0 + xi1 ** 2 + xi2 ** 2) ** s
    return float(np.sqrt(np.sum(weight * np.abs(coeffs) ** 2)) / box)
