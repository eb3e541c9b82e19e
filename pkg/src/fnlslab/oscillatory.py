"""Oscillatory integrals driven by the lattice dispersion relation.

Central object: for a velocity v and a smooth compactly supported cutoff
zeta, the integral

    J(tau) = int_{R^2} exp(i tau (v.xi - w(xi))) zeta(xi) dxi,
    w(xi)  = (sin^2(xi_1/2) + sin^2(xi_2/2))^(alpha/2),

whose large-tau decay rate is set by the critical points of the phase inside
supp(zeta): tau^{-1} at nondegenerate points, tau^{-5/6} where the Hessian of
w drops rank, tau^{-3/4} at the four worst points (+-pi/2, +-pi/2).

Quadrature is plain tensor trapezoid at an oscillation-resolving step (at
least ten points per period of the fastest phase direction), refined once by
step halving for an error estimate.  That is spectrally accurate here since
the integrand is smooth and compactly supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


# ---------------------------------------------------------------------------
# dispersion relation


def dispersion_w(xi1, xi2, alpha: float):
    """w(xi) = (sin^2(xi1/2) + sin^2(xi2/2))^(alpha/2)."""
    s = np.sin(np.asarray(xi1) / 2.0) ** 2 + np.sin(np.asarray(xi2) / 2.0) ** 2
    return s ** (alpha / 2.0)


def group_velocity(xi, alpha: float) -> np.ndarray:
    """grad w(xi) = (alpha/4) w^(1 - 2/alpha) (sin xi1, sin xi2); 0 at xi = 0."""
    xi = np.asarray(xi, dtype=float)
    w = dispersion_w(xi[..., 0], xi[..., 1], alpha)
    out = np.zeros_like(xi)
    mask = w > 0
    pref = np.zeros_like(np.asarray(w))
    pref[mask] = (alpha / 4.0) * np.asarray(w)[mask] ** ((alpha - 2.0) / alpha)
    out[..., 0] = pref * np.sin(xi[..., 0])
    out[..., 1] = pref * np.sin(xi[..., 1])
    return out


def light_cone_radius(alpha: float, n: int = 512) -> float:
    """sup over the torus of |grad w|; the image of grad w is the light cone."""
    t = np.linspace(-np.pi, np.pi, n, endpoint=False)
    x1, x2 = np.meshgrid(t, t, indexing="ij")
    g = group_velocity(np.stack([x1, x2], axis=-1), alpha)
    return float(np.sqrt(g[..., 0] ** 2 + g[..., 1] ** 2).max())


# ---------------------------------------------------------------------------
# smooth cutoffs


def _smooth_step(s):
    """C^infty monotone step: 0 for s <= 0, 1 for s >= 1."""
    s = np.asarray(s, dtype=float)
    g1 = np.zeros_like(s)
    g2 = np.zeros_like(s)
    pos = s > 0
    neg = (1.0 - s) > 0
    g1[pos] = np.exp(-1.0 / s[pos])
    g2[neg] = np.exp(-1.0 / (1.0 - s[neg]))
    return g1 / (g1 + g2)


@dataclass(frozen=True)
class BumpSpec:
    """Dyadic scale N <= 1 and the radial profile of the base cutoff psi.

    psi is even, identically 1 on [-inner, inner], supported in
    (-outer, outer); eta(xi) = psi(|xi|) - psi(2|xi|) is then supported in
    the annulus inner/2 <= |xi| <= outer.
    """

    N: float = 1.0
    inner: float = math.pi
    outer: float = 2.0 * math.pi

    def __post_init__(self) -> None:
        k = math.log2(self.N)
        if self.N > 1.0 or abs(k - round(k)) > 1e-12:
            raise ValueError(f"N must be a dyadic 2^-k <= 1, got {self.N}")
        if not 0.0 < self.inner < self.outer:
            raise ValueError("need 0 < inner < outer")


def psi_profile(r, spec: BumpSpec = BumpSpec()):
    """Radial cutoff: 1 on [0, inner], smooth decay to 0 at outer."""
    r = np.abs(np.asarray(r, dtype=float))
    return _smooth_step((spec.outer - r) / (spec.outer - spec.inner))


def eta(xi, spec: BumpSpec = BumpSpec()):
    """Annular bump psi(|xi|) - psi(2 |xi|), values in [0, 1]."""
    xi = np.asarray(xi, dtype=float)
    r = np.sqrt(xi[..., 0] ** 2 + xi[..., 1] ** 2)
    return psi_profile(r, spec) - psi_profile(2.0 * r, spec)


class AnnularBump:
    """zeta(xi) = eta(xi / N), supported in pi N / 2 <= |xi| <= 2 pi N."""

    def __init__(self, N: float = 1.0, spec: BumpSpec | None = None):
        self.spec = spec if spec is not None else BumpSpec(N=N)
        self.N = self.spec.N

    def __call__(self, x1, x2):
        r = np.sqrt(np.asarray(x1) ** 2 + np.asarray(x2) ** 2) / self.N
        return psi_profile(r, self.spec) - psi_profile(2.0 * r, self.spec)

    def support_box(self) -> tuple[float, float, float, float]:
        R = self.spec.outer * self.N
        return (-R, R, -R, R)


class RadialBump:
    """Localized cutoff: 1 inside r_inner of the center, 0 outside r_outer."""

    def __init__(self, center, r_inner: float, r_outer: float):
        if not 0.0 < r_inner < r_outer:
            raise ValueError("need 0 < r_inner < r_outer")
        self.center = np.asarray(center, dtype=float)
        self.r_inner = float(r_inner)
        self.r_outer = float(r_outer)

    def __call__(self, x1, x2):
        rho = np.sqrt(
            (np.asarray(x1) - self.center[0]) ** 2
            + (np.asarray(x2) - self.center[1]) ** 2
        )
        return _smooth_step((self.r_outer - rho) / (self.r_outer - self.r_inner))

    def support_box(self) -> tuple[float, float, float, float]:
        c, R = self.center, self.r_outer
        return (c[0] - R, c[0] + R, c[1] - R, c[1] + R)


# ---------------------------------------------------------------------------
# quadrature


class ResolutionBudgetError(RuntimeError):
    """The requested tau needs a finer grid than the evaluation budget allows."""


@dataclass(frozen=True)
class PhaseSpec:
    """Phase Phi_v(xi) = v.xi - w(xi) for the travelling-frame integral."""

    alpha: float
    v: tuple[float, float]

    def __post_init__(self) -> None:
        if not 1.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (1, 2], got {self.alpha}")

    def phase(self, x1, x2):
        return self.v[0] * np.asarray(x1) + self.v[1] * np.asarray(x2) - dispersion_w(
            x1, x2, self.alpha
        )

    def grad_norm(self, x1, x2):
        g = group_velocity(
            np.stack(np.broadcast_arrays(x1, x2), axis=-1), self.alpha
        )
        return np.sqrt((self.v[0] - g[..., 0]) ** 2 + (self.v[1] - g[..., 1]) ** 2)


def _trapezoid_sum(phase_fn, amp_fn, tau, box, n1, n2, chunk=256):
    x1min, x1max, x2min, x2max = box
    x1 = np.linspace(x1min, x1max, n1)
    x2 = np.linspace(x2min, x2max, n2)
    w1 = np.ones(n1)
    w1[0] = w1[-1] = 0.5
    w2 = np.ones(n2)
    w2[0] = w2[-1] = 0.5
    acc = 0.0 + 0.0j
    for start in range(0, n1, chunk):
        a1 = x1[start : start + chunk][:, None]
        a2 = x2[None, :]
        amp = amp_fn(a1, a2) * (w1[start : start + chunk][:, None] * w2[None, :])
        acc += np.sum(amp * np.exp(1j * tau * phase_fn(a1, a2)))
    d1 = (x1max - x1min) / (n1 - 1)
    d2 = (x2max - x2min) / (n2 - 1)
    return acc * d1 * d2


def _oscillatory_quad(phase_fn, amp_fn, tau, box, gmax, tol, max_points):
    x1min, x1max, x2min, x2max = box
    extent = max(x1max - x1min, x2max - x2min)
    step = extent / 64.0
    if abs(tau) * gmax > 0:
        step = min(step, 2.0 * np.pi / (10.0 * abs(tau) * gmax))
    n1 = int(math.ceil((x1max - x1min) / step)) + 1
    n2 = int(math.ceil((x2max - x2min) / step)) + 1
    if max(n1, n2) > max_points:
        raise ResolutionBudgetError(
            f"tau={tau} needs a {n1}x{n2} grid at step {step:.3e}; "
            f"budget is {max_points} points per axis"
        )
    value = _trapezoid_sum(phase_fn, amp_fn, tau, box, n1, n2)
    while True:
        n1f = min(2 * n1 - 1, max_points)
        n2f = min(2 * n2 - 1, max_points)
        if n1f <= n1 and n2f <= n2:
            raise ResolutionBudgetError(
                f"quadrature for tau={tau} did not reach tol={tol} within the "
                f"{max_points}-point budget"
            )
        refined = _trapezoid_sum(phase_fn, amp_fn, tau, box, n1f, n2f)
        err = abs(refined - value)
        if err <= tol:
            return refined, err
        n1, n2, value = n1f, n2f, refined


def eval_J(
    phase: PhaseSpec,
    zeta,
    tau: float,
    tol: float = 1e-6,
    domain: tuple[float, float, float, float] | None = None,
    max_points: int = 8192,
) -> complex:
    """Quadrature of J(tau) = int exp(i tau Phi_v) zeta dxi to absolute tol.

    domain overrides the cutoff's own support box (used to restrict annular
    cutoffs to the fundamental torus domain).  Negative tau is allowed.
    """
    box = zeta.support_box() if domain is None else domain
    # probe the phase gradient where the cutoff is active
    p1 = np.linspace(box[0], box[1], 96)
    p2 = np.linspace(box[2], box[3], 96)
    g1, g2 = np.meshgrid(p1, p2, indexing="ij")
    mask = zeta(g1, g2) > 0
    if not np.any(mask):
        return 0.0 + 0.0j
    gmax = 1.1 * float(phase.grad_norm(g1, g2)[mask].max())
    value, _ = _oscillatory_quad(
        phase.phase, zeta, tau, box, gmax, tol, max_points
    )
    return complex(value)


def zeta_mass(zeta, tol: float = 1e-9) -> float:
    """int zeta, the trivial bound for |J|."""
    box = zeta.support_box()
    val, _ = _oscillatory_quad(lambda a, b: 0.0 * a, zeta, 0.0, box, 0.0, tol, 8192)
    return float(val.real)


# ---------------------------------------------------------------------------
# lattice kernel


_TORUS = (-np.pi, np.pi, -np.pi, np.pi)


def kernel_K(
    x,
    t: float,
    N: float,
    h: float,
    alpha: float,
    tol: float = 1e-6,
    max_points: int = 8192,
) -> complex:
    """Frequency-localized lattice propagator kernel at lattice point x, time t.

    Uses the rescaled representation: with tau = 2^alpha t / h^alpha and
    v = x / (h tau), K = (2 pi h)^{-2} J_{Phi_v, eta(./N)}(tau) over the torus.
    """
    x = np.asarray(x, dtype=float)
    bump = AnnularBump(N)
    box = (
        max(bump.support_box()[0], _TORUS[0]),
        min(bump.support_box()[1], _TORUS[1]),
        max(bump.support_box()[2], _TORUS[2]),
        min(bump.support_box()[3], _TORUS[3]),
    )
    tau = 2.0 ** alpha * t / h ** alpha
    if tau == 0.0:
        val, _ = _oscillatory_quad(
            lambda a, b: 0.0 * a, bump, 0.0, box, 0.0, tol, max_points
        )
        return complex(val) / (2.0 * np.pi * h) ** 2
    v = (float(x[0] / (h * tau)), float(x[1] / (h * tau)))
    J = eval_J(
        PhaseSpec(alpha=alpha, v=v), bump, tau, tol=tol, domain=box,
        max_points=max_points,
    )
    return J / (2.0 * np.pi * h) ** 2


def kernel_K_direct(
    x,
    t: float,
    N: float,
    h: float,
    alpha: float,
    tol: float = 1e-6,
    max_points: int = 8192,
) -> complex:
    """Unrescaled two-path check: (2 pi)^{-2} integral over the dual torus."""
    x = np.asarray(x, dtype=float)
    bump = AnnularBump(N)

    def amp(a, b):
        return bump(h * a, h * b)

    def phase(a, b):
        s = (4.0 / h ** 2) * (np.sin(h * a / 2.0) ** 2 + np.sin(h * b / 2.0) ** 2)
        return x[0] * a + x[1] * b - t * s ** (alpha / 2.0)

    box = (-np.pi / h, np.pi / h, -np.pi / h, np.pi / h)
    p = np.linspace(box[0], box[1], 128)
    g1, g2 = np.meshgrid(p, p, indexing="ij")
    mask = amp(g1, g2) > 0
    if not np.any(mask):
        return 0.0 + 0.0j
    eps = 1e-6
    gx = (phase(g1 + eps, g2) - phase(g1 - eps, g2)) / (2 * eps)
    gy = (phase(g1, g2 + eps) - phase(g1, g2 - eps)) / (2 * eps)
    gmax = 1.2 * float(np.sqrt(gx ** 2 + gy ** 2)[mask].max())
    val, _ = _oscillatory_quad(phase, amp, 1.0, box, gmax, tol, max_points)
    return complex(val) / (2.0 * np.pi) ** 2


# ---------------------------------------------------------------------------
# decay fits


@dataclass(frozen=True)
class DecayFit:
    """Power-law fit |J| ~ constant * tau^(-exponent) over a tau window."""

    exponent: float
    constant: float
    residual: float
    window: tuple[float, float]
    n_samples: int


def fit_decay(samples, window: tuple[float, float] | None = None) -> DecayFit:
    """Log-log least squares on (tau, magnitude) samples.

    Requires at least 6 in-window samples spanning at least one decade and
    strictly positive magnitudes.
    """
    taus = np.asarray([s[0] for s in samples], dtype=float)
    mags = np.asarray([s[1] for s in samples], dtype=float)
    if window is not None:
        keep = (taus >= window[0]) & (taus <= window[1])
        taus, mags = taus[keep], mags[keep]
    if taus.size < 6:
        raise ValueError(f"need >= 6 in-window samples, got {taus.size}")
    if taus.max() / taus.min() < 10.0:
        raise ValueError("samples must span at least one decade in tau")
    if np.any(mags <= 0.0):
        raise ValueError("magnitudes must be positive (degenerate fit)")
    lt, lm = np.log(taus), np.log(mags)
    slope, intercept = np.polyfit(lt, lm, 1)
    resid = float(np.sqrt(np.mean((lm - (slope * lt + intercept)) ** 2)))
    return DecayFit(
        exponent=float(-slope),
        constant=float(np.exp(intercept)),
        residual=resid,
        window=(float(taus.min()), float(taus.max())),
        n_samples=int(taus.size),
    )


def pinned_prefactor(samples, sigma0: float) -> float:
    """Geometric mean of |J| tau^sigma0: the measured constant at pinned rate."""
    taus = np.asarray([s[0] for s in samples], dtype=float)
    mags = np.asarray([s[1] for s in samples], dtype=float)
    if np.any(mags <= 0.0):
        raise ValueError("magnitudes must be positive")
    return float(np.exp(np.mean(np.log(mags) + sigma0 * np.log(taus))))


# ---------------------------------------------------------------------------
# frequency-band bookkeeping


def r_alpha(alpha: float) -> float:
    """Distance from the origin to the degenerate set: arccos((2-alpha)/alpha)."""
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"alpha must be in (1, 2], got {alpha}")
    return math.acos((2.0 - alpha) / alpha)


def n_alpha(alpha: float) -> float:
    """Largest dyadic N with 2 pi N strictly below r_alpha."""
    r = r_alpha(alpha)
    k = math.floor(math.log2(r / (2.0 * math.pi)))
    while 2.0 * math.pi * 2.0 ** k >= r:
        k -= 1
    while 2.0 * math.pi * 2.0 ** (k + 1) < r:
        k += 1
    return 2.0 ** k


def band_classify(N: float, alpha: float) -> str:
    """Which decay band the dyadic scale N falls in for this alpha.

    S3: the annulus meets the four worst points; S2: it meets the rest of the
    degenerate curve; S1: only nondegenerate critical points.
    """
    k = math.log2(N)
    if N > 1.0 or abs(k - round(k)) > 1e-12:
        raise ValueError(f"N must be a dyadic 2^-k <= 1, got {N}")
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (1, 2), got {alpha}")
    if N in (1.0, 0.5):
        return "S3"
    r = r_alpha(alpha)
    if r / (2.0 * math.pi) <= N <= (2.0 * math.sqrt(2.0) / math.pi) * r:
        return "S2"
    return "S1"


BAND_EXPONENT = {"S3": 0.75, "S2": 5.0 / 6.0, "S1": 1.0}


def suggest_tau_window(
    d0_magnitude: float, cutoff_mass: float, sigma0: float, span: float = 16.0,
    headroom: float = 4.0,
) -> tuple[float, float]:
    """Window where the leading asymptotics dominate the trivial bound.

    Start where |d0| tau^(-sigma0) <= cutoff_mass / headroom, i.e. well past
    the crossover with the trivial bound |J| <= int zeta.
    """
    tau_min = (headroom * d0_magnitude / cutoff_mass) ** (1.0 / sigma0)
    tau_min = max(tau_min, 10.0)
    return (tau_min, span * tau_min)


# ---------------------------------------------------------------------------
# constant scans across alpha


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    N: float
    band: str
    xi: tuple[float, float]
    v: tuple[float, float]
    sigma_expected: float
    sigma_fit: float
    constant_fit: float
    constant_pinned: float
    residual: float
    tau_window: tuple[float, float]


def cusp_interloper_distance(alpha: float) -> float:
    """Distance from (pi/2, pi/2) to the second diagonal point sharing its velocity.

    On the diagonal xi_1 = xi_2 = s the stationarity condition for the cusp
    velocity reads sin(s) (2 sin^2(s/2))^((alpha-2)/2) = 1; the second root
    merges with the cusp as alpha -> 2, so isolating cutoffs must shrink.
    """

    def f(s):
        return math.sin(s) * (2.0 * math.sin(s / 2.0) ** 2) ** ((alpha - 2.0) / 2.0)

    lo, hi = 0.2, math.pi / 2.0 - 1e-9
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if f(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return (math.pi / 2.0 - 0.5 * (lo + hi)) * math.sqrt(2.0)


# empirical per-band window headroom: where the fitted exponent stabilizes
_BAND_HEADROOM = {"S3": 6.0, "S2": 16.0, "S1": 24.0}


def _scan_point(alpha: float, band: str):
    """Representative critical point and isolating cutoff radii per band."""
    from . import manifold

    if band == "S3":
        xi = (math.pi / 2.0, math.pi / 2.0)
        r_out = min(0.8, 0.9 * cusp_interloper_distance(alpha))
        return xi, (0.625 * r_out, r_out)
    if band == "S2":
        a_m = math.sqrt((2.0 - alpha) / alpha)
        b = manifold.curve_B(a_m, alpha)
        xi = (math.acos(a_m), math.acos(b))
        return xi, (0.16, 0.30)
    # S1: the symmetric interior maximum of w, far from the degenerate set
    return (math.pi, math.pi), (0.5, 0.9)


def constant_scan(
    alphas,
    band: str,
    tau_window: tuple[float, float] | None = None,
    n_tau: int = 11,
    tol: float = 2e-6,
    span: float = 12.0,
    max_points: int = 12288,
) -> list[ScanRow]:
    """Fit |J| decay at the band's stationary velocity for each alpha.

    The cutoff is a localized bump isolating the representative point (in
    particular excluding, for the cusp band, the merging diagonal companion
    point).  The measured prefactor is reported both free (constant_fit) and
    at the band's pinned exponent (constant_pinned); windows are placed past
    the crossover with the trivial bound unless given explicitly.
    """
    from . import manifold

    rows = []
    for alpha in alphas:
        xi, (r_in, r_out) = _scan_point(alpha, band)
        point = manifold.classify_point(np.array(xi), alpha)
        v = group_velocity(np.array(xi), alpha)
        zeta = RadialBump(xi, r_in, r_out)
        sigma0 = BAND_EXPONENT[band]
        window = tau_window
        if window is None:
            d0 = abs(manifold.leading_d0(point, zeta_value=1.0))
            window = suggest_tau_window(
                d0, zeta_mass(zeta), sigma0,
                span=span, headroom=_BAND_HEADROOM[band],
            )
        taus = np.geomspace(window[0], window[1], n_tau)
        phase = PhaseSpec(alpha=alpha, v=(float(v[0]), float(v[1])))
        samples = [
            (t, abs(eval_J(phase, zeta, t, tol=tol, max_points=max_points)))
            for t in taus
        ]
        fit = fit_decay(samples)
        rows.append(
            ScanRow(
                alpha=float(alpha),
                N=1.0 if band == "S3" else (0.25 if band == "S2" else 0.125),
                band=band,
                xi=(float(xi[0]), float(xi[1])),
                v=(float(v[0]), float(v[1])),
                sigma_expected=sigma0,
                sigma_fit=fit.exponent,
                constant_fit=fit.constant,
                constant_pinned=pinned_prefactor(samples, sigma0),
                residual=fit.residual,
                tau_window=(float(window[0]), float(window[1])),
            )
        )
    return rows


def v_grid_max(
    alpha: float, zeta, tau: float, vmax: float, n: int = 16, tol: float = 1e-5
) -> tuple[float, tuple[float, float]]:
    """Coarse sup-over-velocities sweep: max |J| on an n x n grid in [-vmax, vmax]^2."""
    best, best_v = -1.0, (0.0, 0.0)
    for v1 in np.linspace(-vmax, vmax, n):
        for v2 in np.linspace(-vmax, vmax, n):
            mag = abs(eval_J(PhaseSpec(alpha, (v1, v2)), zeta, tau, tol=tol))
            if mag > best:
                best, best_v = mag, (float(v1), float(v2))
    return best, best_v


# ---------------------------------------------------------------------------
# polar-coordinate stationary-phase diagnostics (small-N regime)


def polar_g(rho: float, phi, N: float):
    """g(rho, phi) from the angular critical-point equation."""
    phi = np.asarray(phi, dtype=float)
    num = 1.0 - (N * rho * np.sin(phi) / 2.0) ** 2
    den = 1.0 - (N * rho * np.cos(phi) / 2.0) ** 2
    return np.sqrt(num / den)


def polar_phase(rho: float, phi, theta: float, N: float):
    """Angular phase (2/(rho N)) (cos(theta) asin(N rho cos(phi)/2) + ...)."""
    phi = np.asarray(phi, dtype=float)
    return (2.0 / (rho * N)) * (
        math.cos(theta) * np.arcsin(N * rho * np.cos(phi) / 2.0)
        + math.sin(theta) * np.arcsin(N * rho * np.sin(phi) / 2.0)
    )


def polar_phase_dphi(rho: float, phi, theta: float, N: float):
    phi = np.asarray(phi, dtype=float)
    return -math.cos(theta) * np.sin(phi) / np.sqrt(
        1.0 - (N * rho * np.cos(phi) / 2.0) ** 2
    ) + math.sin(theta) * np.cos(phi) / np.sqrt(
        1.0 - (N * rho * np.sin(phi) / 2.0) ** 2
    )


def polar_phase_dphi2(rho: float, phi, theta: float, N: float):
    phi = np.asarray(phi, dtype=float)
    return -(1.0 - (N * rho / 2.0) ** 2) * (
        math.cos(theta) * np.cos(phi)
        / (1.0 - (N * rho * np.cos(phi) / 2.0) ** 2) ** 1.5
        + math.sin(theta) * np.sin(phi)
        / (1.0 - (N * rho * np.sin(phi) / 2.0) ** 2) ** 1.5
    )


def polar_critical_phi(theta: float, rho: float, N: float, tol: float = 1e-13) -> float:
    """Solve g(rho, phi) tan(phi) = tan(theta) for phi in [0, pi/2] by bisection.

    theta must lie in [0, pi/2]; the conjugate root sits at phi + pi.
    """
    if not 0.0 <= theta <= math.pi / 2.0:
        raise ValueError("theta must be in [0, pi/2]")
    if theta == 0.0:
        return 0.0
    if abs(theta - math.pi / 2.0) < 1e-15:
        return math.pi / 2.0
    target = math.tan(theta)

    def f(phi):
        return float(polar_g(rho, phi, N)) * math.tan(phi) - target

    lo, hi = 0.0, math.pi / 2.0 - 1e-12
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
