"""The degenerate critical manifold of the lattice dispersion relation.

In the variables a = cos(xi_1), b = cos(xi_2) the determinant of the Hessian
of w factors as det D^2 w = h_tilde * h with

    h(a, b, alpha) = alpha a b (a + b) - 4 a b + (2 - alpha)(a + b),

so the rank-one set E_alpha is the zero curve of a quadratic in b.  Its two
branches are parametrized by curve_BP (the component through (0, 0)) and
curve_B (the component near (1, 1)).  Points of E_alpha are folds (third
transverse derivative nonzero) except the four cusps at (+-pi/2, +-pi/2),
where only the fourth survives; the classification fixes the oscillatory
index and the leading coefficient of the decay asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .oscillatory import RadialBump, dispersion_w, eval_J, fit_decay, group_velocity

CUSPS = [
    (math.pi / 2.0, math.pi / 2.0),
    (math.pi / 2.0, -math.pi / 2.0),
    (-math.pi / 2.0, math.pi / 2.0),
    (-math.pi / 2.0, -math.pi / 2.0),
]


# ---------------------------------------------------------------------------
# the polynomial h and the branch curves


def h_poly(a: float, b: float, alpha: float):
    """h(a, b, alpha) = alpha a b (a+b) - 4 a b + (2-alpha)(a+b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return alpha * a * b * (a + b) - 4.0 * a * b + (2.0 - alpha) * (a + b)


def h_poly_grad(a, b, alpha: float):
    """(d/da, d/db) of h."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = alpha * b * (2.0 * a + b) - 4.0 * b + (2.0 - alpha)
    db = alpha * a * (a + 2.0 * b) - 4.0 * a + (2.0 - alpha)
    return da, db


def _b_quadratic_root(a: float, alpha: float, sign: float) -> float:
    # h viewed as quadratic in b: alpha*a*b^2 + (alpha a^2 - 4a + 2-alpha) b + (2-alpha) a
    qa = alpha * a
    qb = alpha * a * a - 4.0 * a + (2.0 - alpha)
    disc = qb * qb - 4.0 * qa * (2.0 - alpha) * a
    if disc < 0.0:
        if disc > -1e-12:
            disc = 0.0
        else:
            raise RuntimeError(f"negative discriminant {disc} at a={a} (internal)")
    b = (-qb + sign * math.sqrt(disc)) / (2.0 * qa)
    # two Newton steps wash out the cancellation in the quadratic formula
    for _ in range(2):
        _, db = h_poly_grad(a, b, alpha)
        if db != 0.0:
            b -= float(h_poly(a, b, alpha)) / float(db)
    return float(b)


def curve_BP(a: float, alpha: float) -> float:
    """Branch through (0, 0), parametrized over a in [-1, 0)."""
    if not -1.0 <= a < 0.0:
        raise ValueError(f"curve_BP domain is [-1, 0), got a={a}")
    return _b_quadratic_root(a, alpha, sign=+1.0)


def curve_B(a: float, alpha: float) -> float:
    """Branch near (1, 1), parametrized over a in [(2-alpha)/alpha, 1]."""
    lo = (2.0 - alpha) / alpha
    if not lo - 1e-12 <= a <= 1.0 + 1e-12:
        raise ValueError(f"curve_B domain is [{lo}, 1], got a={a}")
    return _b_quadratic_root(min(max(a, lo), 1.0), alpha, sign=-1.0)


@dataclass(frozen=True)
class CurveSample:
    alpha: float
    branch: str  # "gamma1" (through the origin in (a,b)) or "gamma2"
    a: float
    b: float
    residual: float


def sample_curve(alpha: float, branch: str, n: int = 64) -> list[CurveSample]:
    """Chebyshev-spaced samples of one branch; residuals stay below 1e-10."""
    if branch == "gamma1":
        lo, hi, fn = -1.0, -1e-6, curve_BP
    elif branch == "gamma2":
        lo, hi, fn = (2.0 - alpha) / alpha, 1.0, curve_B
    else:
        raise ValueError(f"branch must be gamma1 or gamma2, got {branch}")
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    out = []
    for j in range(n):
        a = mid + half * math.cos((2 * j + 1) * math.pi / (2 * n))
        b = fn(a, alpha)
        out.append(
            CurveSample(
                alpha=alpha,
                branch=branch,
                a=a,
                b=b,
                residual=abs(float(h_poly(a, b, alpha))),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Hessian data


def hessian_w(xi, alpha: float) -> np.ndarray:
    """Closed-form D^2 w(xi); rejects xi = 0 where the determinant blows up."""
    xi = np.asarray(xi, dtype=float)
    w = float(dispersion_w(xi[0], xi[1], alpha))
    if w == 0.0:
        raise ValueError("Hessian is singular at xi = 0")
    a, b = math.cos(xi[0]), math.cos(xi[1])
    m11 = alpha * a * a + 2.0 * (b - 2.0) * a + 2.0 - alpha
    m22 = alpha * b * b + 2.0 * (a - 2.0) * b + 2.0 - alpha
    m12 = (2.0 - alpha) * math.sin(xi[0]) * math.sin(xi[1])
    pref = -alpha / (16.0 * w ** (4.0 / alpha - 1.0))
    return pref * np.array([[m11, m12], [m12, m22]])


def h_tilde(xi, alpha: float) -> float:
    """Nonvanishing cofactor in det D^2 w = h_tilde * h."""
    xi = np.asarray(xi, dtype=float)
    w = float(dispersion_w(xi[0], xi[1], alpha))
    if w == 0.0:
        raise ValueError("h_tilde undefined at xi = 0")
    return (
        alpha ** 2
        / (128.0 * w ** (8.0 / alpha - 2.0))
        * (math.cos(xi[0]) + math.cos(xi[1]) - 2.0)
    )


def h_at_xi(xi, alpha: float) -> float:
    xi = np.asarray(xi, dtype=float)
    return float(h_poly(math.cos(xi[0]), math.cos(xi[1]), alpha))


def degenerate_direction(xi, alpha: float, residual_tol: float = 1e-8) -> np.ndarray:
    """Unit null direction of D^2 w on the manifold, deterministic sign.

    Uses whichever of the two closed-form kernel columns has the larger norm,
    then fixes the sign by a positive second component (positive first on a
    tie).
    """
    xi = np.asarray(xi, dtype=float)
    if abs(h_at_xi(xi, alpha)) > residual_tol:
        raise ValueError("xi is not on the degenerate manifold")
    a, b = math.cos(xi[0]), math.cos(xi[1])
    m11 = alpha * a * a + 2.0 * (b - 2.0) * a + 2.0 - alpha
    m22 = alpha * b * b + 2.0 * (a - 2.0) * b + 2.0 - alpha
    m12 = (2.0 - alpha) * math.sin(xi[0]) * math.sin(xi[1])
    v1 = np.array([-m12, m11])
    v2 = np.array([m22, -m12])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise RuntimeError("both kernel columns vanish (cannot happen off 0)")
    k2 = v / norm
    if k2[1] < -1e-15 or (abs(k2[1]) <= 1e-15 and k2[0] < 0.0):
        k2 = -k2
    return k2


def fd_directional_derivative(xi, alpha: float, k, order: int, step: float) -> float:
    """Central finite differences of s -> w(xi + s k), one Richardson level."""
    xi = np.asarray(xi, dtype=float)
    k = np.asarray(k, dtype=float)

    def f(s):
        p = xi + s * k
        return float(dispersion_w(p[0], p[1], alpha))

    def stencil(s):
        if order == 2:
            return (f(-s) - 2.0 * f(0.0) + f(s)) / s ** 2
        if order == 3:
            return (-f(-2 * s) + 2.0 * f(-s) - 2.0 * f(s) + f(2 * s)) / (2.0 * s ** 3)
        if order == 4:
            return (
                f(-2 * s) - 4.0 * f(-s) + 6.0 * f(0.0) - 4.0 * f(s) + f(2 * s)
            ) / s ** 4
        raise ValueError(f"unsupported order {order}")

    coarse, fine = stencil(step), stencil(step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def directional_derivative_3(
    xi,
    alpha: float,
    method: str = "formula",
    k2: np.ndarray | None = None,
    step: float | None = None,
) -> float:
    """Third derivative of w along the degenerate direction.

    formula: h_tilde * (k2.grad h) / Tr D^2 w, valid on the manifold away
    from the cusps; fd: Richardson-extrapolated central differences (valid
    anywhere, used as the oracle and at the cusps).
    """
    xi = np.asarray(xi, dtype=float)
    if k2 is None:
        k2 = degenerate_direction(xi, alpha)
    if method == "fd":
        if step is None:
            near_cusp = min(
                np.hypot(xi[0] - c[0], xi[1] - c[1]) for c in CUSPS
            ) < 0.1
            step = 5e-3 if near_cusp else 1e-2
        return fd_directional_derivative(xi, alpha, k2, order=3, step=step)
    tr = float(np.trace(hessian_w(xi, alpha)))
    if abs(tr) < 1e-12:
        raise ValueError("trace of D^2 w vanishes; formula path undefined")
    da, db = h_poly_grad(math.cos(xi[0]), math.cos(xi[1]), alpha)
    grad_h = np.array(
        [-math.sin(xi[0]) * float(da), -math.sin(xi[1]) * float(db)]
    )
    return h_tilde(xi, alpha) * float(k2 @ grad_h) / tr


# ---------------------------------------------------------------------------
# classification and normal forms


@dataclass(frozen=True)
class NormalForm:
    """Principal part of the phase in superadapted coordinates.

    K3 cusp: A x^2 + B x y^2; K2 fold: a2 x^2 + a3 y^3; K1 carries no
    coefficients.  height is the Newton distance; sigma0 = 1 / height.
    """

    klass: str
    coeffs: tuple[float, ...]
    sigma0: float
    height: float


@dataclass(frozen=True)
class CriticalPoint:
    xi: tuple[float, float]
    alpha: float
    ab: tuple[float, float]
    klass: str  # "K1", "K2fold", "K3cusp"
    hessian: np.ndarray
    k2: np.ndarray | None
    d3: float | None
    normal_form: NormalForm
    sigma0: float
    d0: complex

    @property
    def velocity(self) -> np.ndarray:
        return group_velocity(np.asarray(self.xi), self.alpha)


def _normal_form_for(
    klass: str, xi, alpha: float, k2, d3
) -> NormalForm:
    if klass == "K3cusp":
        A = alpha * (2.0 - alpha) / 16.0
        B = alpha / (8.0 * math.sqrt(2.0))
        return NormalForm(klass=klass, coeffs=(A, B), sigma0=0.75, height=4.0 / 3.0)
    if klass == "K2fold":
        tr = float(np.trace(hessian_w(xi, alpha)))
        return NormalForm(
            klass=klass,
            coeffs=(-tr / 2.0, -d3 / 6.0),
            sigma0=5.0 / 6.0,
            height=6.0 / 5.0,
        )
    return NormalForm(klass=klass, coeffs=(), sigma0=1.0, height=1.0)


def normal_form(point: CriticalPoint) -> NormalForm:
    return point.normal_form


def _gauss_beta(x: float, y: float) -> float:
    return float(gamma(x) * gamma(y) / gamma(x + y))


def leading_d0(point: CriticalPoint, zeta_value: float = 1.0) -> complex:
    """Leading coefficient of J ~ d0 tau^(-sigma0) for an isolating cutoff.

    K1: the stationary-phase coefficient 2 pi zeta e^{i pi s / 4} /
    sqrt|det D^2 w| with s the signature of the phase Hessian.  K3: assembled
    from the sublevel-set coefficients of the principal part A x^2 + B x y^2.
    K2 fold: same sublevel route applied to a2 x^2 + a3 y^3 with
    a2 = |Tr D^2 w| / 2 and a3 = |dy^3 w| / 6, which carries the functional
    form zeta |h_tilde dy h|^{-1/3} |Tr D^2 w|^{-1/6} with its universal
    constant filled in.  All three branches are pinned against direct
    quadrature of the oscillatory integrals in the test suite.
    """
    alpha = point.alpha
    xi = np.asarray(point.xi)
    if point.klass == "K1":
        det = float(np.linalg.det(point.hessian))
        if abs(det) < 1e-14:
            raise ValueError("K1 leading coefficient needs a nonsingular Hessian")
        sig = int(np.sum(np.sign(np.linalg.eigvalsh(-point.hessian))))
        return (
            2.0
            * np.pi
            * zeta_value
            * np.exp(1j * np.pi * sig / 4.0)
            / math.sqrt(abs(det))
        )
    if point.klass == "K3cusp":
        A, B = point.normal_form.coeffs
        scale = A ** -0.25 * B ** -0.5
        c0 = (4.0 / 3.0) * _gauss_beta(0.25, 0.5) * scale * zeta_value
        C0 = (2.0 / 3.0) * _gauss_beta(0.25, 0.25) * scale * zeta_value
        sigma0 = 0.75
        return gamma(1.0 + sigma0) * (
            np.exp(1j * np.pi * sigma0 / 2.0) * c0
            + np.exp(-1j * np.pi * sigma0 / 2.0) * C0
        )
    # K2 fold: principal part a2 x^2 + a3 y^3 (magnitudes; |d0| is sign-blind)
    a2 = abs(float(np.trace(point.hessian))) / 2.0
    a3 = abs(point.d3) / 6.0
    scale = a2 ** -0.5 * a3 ** (-1.0 / 3.0)
    sigma0 = 5.0 / 6.0
    c0 = 0.4 * (_gauss_beta(0.5, 1.0 / 3.0) + _gauss_beta(1.0 / 6.0, 1.0 / 3.0))
    C0 = 0.4 * _gauss_beta(0.5, 1.0 / 6.0)
    return (
        zeta_value
        * scale
        * gamma(1.0 + sigma0)
        * (
            np.exp(1j * np.pi * sigma0 / 2.0) * c0
            + np.exp(-1j * np.pi * sigma0 / 2.0) * C0
        )
    )


def fold_scale_proxy(point: CriticalPoint, zeta_value: float = 1.0) -> float:
    """Scaling part of the fold coefficient: zeta |h_tilde dy h|^{-1/3} |Tr|^{-1/6}.

    Proportional to |leading_d0| with the universal constant stripped; the
    quantity regressed in the wave-limit law.
    """
    if point.klass != "K2fold":
        raise ValueError("fold proxy is defined for K2 folds")
    xi = np.asarray(point.xi)
    tr = float(np.trace(point.hessian))
    da, db = h_poly_grad(point.ab[0], point.ab[1], point.alpha)
    grad_h = np.array([-math.sin(xi[0]) * float(da), -math.sin(xi[1]) * float(db)])
    dyh = float(point.k2 @ grad_h)
    return float(
        zeta_value
        * abs(h_tilde(xi, point.alpha) * dyh) ** (-1.0 / 3.0)
        * abs(tr) ** (-1.0 / 6.0)
    )


def classify_point(xi, alpha: float, residual_tol: float = 1e-8) -> CriticalPoint:
    """Assemble the full critical-point record at xi for this alpha."""
    xi = np.asarray(xi, dtype=float)
    a, b = math.cos(xi[0]), math.cos(xi[1])
    hess = hessian_w(xi, alpha)
    at_cusp = any(
        abs(xi[0] - c[0]) <= 1e-8 and abs(xi[1] - c[1]) <= 1e-8 for c in CUSPS
    )
    if at_cusp:
        klass = "K3cusp"
    elif abs(h_poly(a, b, alpha)) <= residual_tol:
        klass = "K2fold"
    else:
        klass = "K1"
    k2 = None
    d3 = None
    if klass != "K1":
        k2 = degenerate_direction(xi, alpha, residual_tol=max(residual_tol, 1e-8))
        if klass == "K2fold":
            d3 = directional_derivative_3(xi, alpha, method="formula", k2=k2)
        else:
            d3 = 0.0
    nf = _normal_form_for(klass, xi, alpha, k2, d3)
    point = CriticalPoint(
        xi=(float(xi[0]), float(xi[1])),
        alpha=float(alpha),
        ab=(a, b),
        klass=klass,
        hessian=hess,
        k2=k2,
        d3=d3,
        normal_form=nf,
        sigma0=nf.sigma0,
        d0=0.0 + 0.0j,
    )
    d0 = leading_d0(point, zeta_value=1.0)
    return CriticalPoint(
        xi=point.xi,
        alpha=point.alpha,
        ab=point.ab,
        klass=klass,
        hessian=hess,
        k2=k2,
        d3=d3,
        normal_form=nf,
        sigma0=nf.sigma0,
        d0=d0,
    )


def fold_point(alpha: float, a: float | None = None) -> CriticalPoint:
    """A fold on the branch away from the origin; defaults to the curve minimum."""
    if a is None:
        a = math.sqrt((2.0 - alpha) / alpha)
    b = curve_B(a, alpha)
    return classify_point(np.array([math.acos(a), math.acos(b)]), alpha)


# ---------------------------------------------------------------------------
# asymptotics verification


@dataclass(frozen=True)
class AsymptoticsReport:
    taus: tuple[float, ...]
    scaled: tuple[float, ...]  # |J(tau)| tau^sigma0
    sigma_fit: float
    ratio_to_d0: float
    cauchy: tuple[float, ...]  # successive differences of the scaled sequence


def _default_radii(point: CriticalPoint) -> tuple[float, float]:
    if point.klass == "K3cusp":
        from .oscillatory import cusp_interloper_distance

        r_out = min(0.8, 0.9 * cusp_interloper_distance(point.alpha))
        return (0.625 * r_out, r_out)
    if point.klass == "K2fold":
        return (0.16, 0.30)
    return (0.5, 0.9)


def verify_asymptotics(
    point: CriticalPoint,
    taus,
    zeta: RadialBump | None = None,
    tol: float = 1e-6,
) -> AsymptoticsReport:
    """Track |J| tau^sigma0 along a tau ladder against the predicted d0.

    The cutoff must isolate the point (it is the unique critical point of the
    phase inside the support); the default radii are tuned per class.
    """
    from .oscillatory import PhaseSpec

    if zeta is None:
        r_in, r_out = _default_radii(point)
        zeta = RadialBump(point.xi, r_in, r_out)
    v = point.velocity
    phase = PhaseSpec(alpha=point.alpha, v=(float(v[0]), float(v[1])))
    taus = [float(t) for t in taus]
    mags = [abs(eval_J(phase, zeta, t, tol=tol)) for t in taus]
    scaled = [m * t ** point.sigma0 for m, t in zip(mags, taus)]
    d0 = abs(leading_d0(point, zeta_value=1.0))
    fit = fit_decay(list(zip(taus, mags)))
    return AsymptoticsReport(
        taus=tuple(taus),
        scaled=tuple(scaled),
        sigma_fit=fit.exponent,
        ratio_to_d0=scaled[-1] / d0,
        cauchy=tuple(np.diff(scaled)),
    )
