"""Closed-form spectral densities for the diagonal-correlation ensemble.

For eta = c*I the eigenvalue domain is the shifted ellipse

    (x - c(1+kappa))^2 / (kappa (1+c^2)^2) + y^2 / (kappa (1-c^2)^2) = 1

and inside it the density depends on |z| only:

    rho(z) = 1 / (pi kappa alpha sqrt(alpha^2 (1-kappa)^2 + 4 |z|^2)),

with alpha = 1 - c^2, plus a point mass (1 - 1/kappa) at z = 0 when kappa > 1.
The Green's function switches to its holomorphic branch outside the ellipse,
so its d/dz* derivative vanishes there (two-dimensional Gauss law).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

__all__ = [
    "DensityModel",
    "ellipse_center",
    "ellipse_semi_axes",
    "inside_ellipse",
    "loop_solve_diagonal",
    "density_diagonal",
    "radial_density",
    "marginal_density",
    "mp_density",
]

DEFAULT_QUAD_POINTS = 2048
QUAD_REL_TOL = 1e-6
QUAD_MAX_DOUBLINGS = 9


@dataclass
class DensityModel:
    """Parameters of the diagonal-correlation density."""

    c: float
    kappa: float

    def __post_init__(self):
        if not abs(self.c) < 1.0:
            raise DomainError(f"|c| must be < 1, got c={self.c}")
        if not self.kappa > 0.0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")

    @property
    def alpha(self) -> float:
        return 1.0 - self.c * self.c

    @property
    def point_mass_at_zero(self) -> float:
        return max(0.0, 1.0 - 1.0 / self.kappa)


def ellipse_center(c: float, kappa: float) -> float:
    return c * (1.0 + kappa)


def ellipse_semi_axes(c: float, kappa: float) -> tuple[float, float]:
    root = math.sqrt(kappa)
    return root * (1.0 + c * c), root * (1.0 - c * c)


def inside_ellipse(z, c: float, kappa: float):
    """Exact boundary inequality of the eigenvalue domain (True on the boundary)."""
    z = np.asarray(z, dtype=complex)
    x0 = ellipse_center(c, kappa)
    a, b = ellipse_semi_axes(c, kappa)
    val = ((z.real - x0) / a) ** 2 + (z.imag / b) ** 2
    out = val <= 1.0
    return bool(out) if np.isscalar(out) or out.ndim == 0 else out


def _holomorphic_green(z: complex, c: float, kappa: float) -> complex:
    """Green's function branch that is analytic outside the ellipse and ~1/z at infinity.

    Solves the decoupled self-consistency pair u = z/(z - c v), v = z/(z - kappa c u)
    (u = w g11, v = w g22); the branch cut of the resulting quadratic lies on the
    real segment [c(1-sqrt(kappa))^2, c(1+sqrt(kappa))^2], which is strictly
    inside the ellipse, so taking sqrt(z - hi)*sqrt(z - lo) keeps the outside
    branch single-valued.
    """
    if c == 0.0:
        return 1.0 / z
    root = math.sqrt(kappa)
    z_a = c * (1.0 - root) ** 2
    z_b = c * (1.0 + root) ** 2
    lo, hi = min(z_a, z_b), max(z_a, z_b)
    sigma = np.sqrt(complex(z - hi)) * np.sqrt(complex(z - lo))
    u = ((z - c * (1.0 - kappa)) - sigma) / (2.0 * kappa * c)
    v = z * (u - 1.0) / (c * u)
    return (1.0 + (u - 1.0) / 2.0 + (v - 1.0) / (2.0 * kappa)) / z


def loop_solve_diagonal(z: complex, c: float, kappa: float) -> tuple[float, float, complex]:
    """Loop-equation solution at z for eta = c*I: (mu1, mu2, g).

    mu1 + 1 = (-alpha(1-kappa) + sqrt(alpha^2 (1-kappa)^2 + 4|z|^2)) / (2 kappa),
    mu2 = -c^2 (1-kappa) + kappa mu1, and g is the Green's function: the
    nonholomorphic solution inside the ellipse, the holomorphic branch outside.
    """
    if not abs(c) < 1.0:
        raise DomainError(f"|c| must be < 1, got c={c}")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    z = complex(z)
    if z == 0:
        raise DomainError("z = 0 is excluded (point mass handled separately)")
    alpha = 1.0 - c * c
    disc = math.sqrt((alpha * (1.0 - kappa)) ** 2 + 4.0 * abs(z) ** 2)
    mu1 = (-alpha * (1.0 - kappa) + disc) / (2.0 * kappa) - 1.0
    mu2 = -c * c * (1.0 - kappa) + kappa * mu1
    if inside_ellipse(z, c, kappa):
        g = (alpha * (kappa - 1.0) + disc) / (2.0 * alpha * kappa * z) - c / (kappa * alpha)
    else:
        g = _holomorphic_green(z, c, kappa)
    return mu1, mu2, g


def density_diagonal(z, model: DensityModel):
    """Continuous part of the spectral density; zero outside the ellipse.

    The point mass at z = 0 for kappa > 1 is reported separately via
    model.point_mass_at_zero. Broadcasts over arrays of z.
    """
    z = np.asarray(z, dtype=complex)
    alpha = model.alpha
    kappa = model.kappa
    dens = 1.0 / (np.pi * kappa * alpha * np.sqrt((alpha * (1.0 - kappa)) ** 2 + 4.0 * np.abs(z) ** 2))
    mask = inside_ellipse(z, model.c, kappa)
    out = np.where(mask, dens, 0.0)
    return float(out) if out.ndim == 0 else out


def _inside_arc_measure(r: float, model: DensityModel, probe_points: int) -> float:
    """Total angular measure of {theta : r e^(i theta) inside the ellipse}.

    A circle meets an ellipse in at most four points, so transitions located on
    a probe grid and refined by bisection give the measure essentially exactly.
    """
    thetas = np.linspace(0.0, 2.0 * np.pi, max(probe_points, 512), endpoint=False)
    inside = inside_ellipse(r * np.exp(1j * thetas), model.c, model.kappa)
    if inside.all():
        return 2.0 * np.pi
    if not inside.any():
        return 0.0
    flips = np.flatnonzero(inside != np.roll(inside, -1))  # transition after index k
    step = thetas[1] - thetas[0]
    crossings = []
    for k in flips:
        lo, hi = thetas[k], thetas[k] + step
        lo_in = bool(inside[k])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if bool(inside_ellipse(r * np.exp(1j * mid), model.c, model.kappa)) == lo_in:
                lo = mid
            else:
                hi = mid
        crossings.append(0.5 * (lo + hi))
    crossings.sort()
    measure = 0.0
    for k in range(len(crossings)):
        a = crossings[k]
        b = crossings[(k + 1) % len(crossings)]
        width = (b - a) % (2.0 * np.pi)
        mid = (a + 0.5 * width) % (2.0 * np.pi)
        if inside_ellipse(r * np.exp(1j * mid), model.c, model.kappa):
            measure += width
    return measure


def radial_density(r: float, model: DensityModel, quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """rho_R(r) = r * integral over theta of the planar density on the circle |z| = r.

    The integrand is the constant density_diagonal(r) on the inside arcs, so
    the angular integral reduces to r * rho(r) * (inside arc measure); the
    quad_points argument sets the transition-probe resolution.
    """
    if r < 0:
        raise DomainError(f"radius must be nonnegative, got {r}")
    if r == 0.0:
        return 0.0
    measure = _inside_arc_measure(r, model, quad_points)
    if measure == 0.0:
        return 0.0
    rho = 1.0 / (
        np.pi * model.kappa * model.alpha
        * math.sqrt((model.alpha * (1.0 - model.kappa)) ** 2 + 4.0 * r * r)
    )
    return r * rho * measure


def _simpson(f, lo: float, hi: float, n: int) -> float:
    if hi <= lo:
        return 0.0
    if n % 2 == 1:
        n += 1
    x = np.linspace(lo, hi, n + 1)
    y = f(x)
    h = (hi - lo) / n
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def _simpson_adaptive(f, lo: float, hi: float, n0: int) -> float:
    prev = _simpson(f, lo, hi, n0)
    n = n0
    for _ in range(QUAD_MAX_DOUBLINGS):
        n *= 2
        cur = _simpson(f, lo, hi, n)
        if abs(cur - prev) < QUAD_REL_TOL * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def marginal_density(axis: str, t: float, model: DensityModel,
                     quad_points: int = DEFAULT_QUAD_POINTS) -> float:
    """Marginal of the planar density along x or y at coordinate t.

    Integrates across the ellipse chord by composite Simpson, doubling the node
    count until successive values agree to 1e-6.
    """
    axis = axis.lower()
    if axis not in ("x", "y"):
        raise DomainError(f"axis must be 'x' or 'y', got {axis!r}")
    if not math.isfinite(t):
        raise DomainError("coordinate must be finite")
    x0 = ellipse_center(model.c, model.kappa)
    a, b = ellipse_semi_axes(model.c, model.kappa)
    if axis == "x":
        if abs(t - x0) >= a:
            return 0.0
        half = b * math.sqrt(1.0 - ((t - x0) / a) ** 2)

        def integrand(y):
            return density_diagonal(t + 1j * y, model)

        return 2.0 * _simpson_adaptive(integrand, 0.0, half, quad_points)
    if abs(t) >= b:
        return 0.0
    half = a * math.sqrt(1.0 - (t / b) ** 2)

    def integrand(x):
        return density_diagonal(x + 1j * t, model)

    return _simpson_adaptive(integrand, x0 - half, x0 + half, quad_points)


def mp_density(x: float, kappa: float):
    """Marchenko-Pastur density sqrt((x+ - x)(x - x-)) / (2 pi kappa x) on [x-, x+].

    x+- = (1 +- sqrt(kappa))^2. For kappa > 1 an atom of weight 1 - 1/kappa sits
    at zero; only the continuous part is returned. Broadcasts over arrays.
    """
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    root = math.sqrt(kappa)
    x_lo = (1.0 - root) ** 2
    x_hi = (1.0 + root) ** 2
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.sqrt(np.clip((x_hi - x) * (x - x_lo), 0.0, None)) / (2.0 * np.pi * kappa * x)
    out = np.where((x > x_lo) & (x < x_hi) & (x > 0.0), val, 0.0)
    return float(out) if out.ndim == 0 else out
