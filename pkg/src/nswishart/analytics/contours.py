"""Boundary contours of the complex-eigenvalue domain.

Every method shares the same skeleton: find the auxiliary curve where

    f(Psi) = (1/N) tr [ (Psi - eta)(Psi* - eta^t) ]^{-1}  =  1/kappa

on rays from the spectral centroid of eta (outermost bisection root), then map
each point to the eigenvalue plane by

    z = Psi (1 - kappa) + kappa Psi^2 <(Psi - eta)^{-1}>.

What differs is how f and the resolvent trace are evaluated: an eigenvalue
expansion for normal eta, the arcsine continuum limit for tridiagonal eta, and
the matrix resolvent (O(N) tridiagonal recurrence or dense Schur form) for the
general, possibly nonnormal case. A marching-squares level-set extraction is
the fallback when a ray shows more than one bracket (non-star-shaped region).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..correlation import EtaMatrix, _largest_singular_value
from ..errors import (
    BranchError,
    ContourError,
    DomainError,
    InvalidCorrelation,
    RootNotBracketed,
    SingularResolvent,
)

__all__ = [
    "ContourCurve",
    "ellipse_contour",
    "spectrum_contour",
    "tridiag_contour",
    "general_contour",
    "hausdorff_distance",
    "tridiag_eq36_residual",
    "validate_eq36",
]

DEFAULT_POINTS = 256
RAY_R_MAX = 8.0
RAY_SCAN = 256
BISECT_TOL = 1e-10
_CHUNK = 4096


@dataclass
class ContourCurve:
    """Closed, ordered polyline in the eigenvalue plane with its Psi preimage."""

    points: np.ndarray            # complex z values; last point connects to first
    method: str                   # ellipse | spectrum_expansion | tridiag_continuum | level_set
    kappa: float
    thetas: np.ndarray
    psis: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)

    def as_xy(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points.real, self.points.imag

    def signed_area(self) -> float:
        z = self.points
        w = np.roll(z, -1)
        return float(0.5 * np.sum(z.real * w.imag - w.real * z.imag))

    def conjugation_asymmetry(self) -> float:
        """max |z(theta) - conj(z(-theta))| over the matched index pairs."""
        n = len(self.points)
        mirrored = np.conj(self.points[(-np.arange(n)) % n])
        return float(np.abs(self.points - mirrored).max())

    def is_simple(self) -> bool:
        return _polyline_is_simple(self.points)

    def require_valid(self) -> None:
        if len(self.points) < 3:
            raise ContourError(f"contour has only {len(self.points)} points")
        if not np.all(np.isfinite(self.points)):
            raise ContourError("contour has non-finite points")
        if not self.is_simple():
            raise ContourError("contour is self-intersecting; refusing to connect points")

    def inflate(self, factor: float) -> "ContourCurve":
        """Scale the polygon about its vertex centroid (containment margins)."""
        center = self.points.mean()
        pts = center + factor * (self.points - center)
        meta = dict(self.meta)
        meta["inflated_by"] = factor
        return ContourCurve(pts, self.method, self.kappa, self.thetas.copy(),
                            self.psis.copy(), meta)


def _polyline_is_simple(z: np.ndarray) -> bool:
    """True when no two non-adjacent closed-polyline segments intersect."""
    n = len(z)
    p = np.stack([z.real, z.imag], axis=1)
    q = np.roll(p, -1, axis=0)
    d = q - p

    def cross(o, a, b):
        return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - \
               (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])

    i = np.arange(n)
    ii, jj = np.meshgrid(i, i, indexing="ij")
    mask = jj > ii + 0   # each unordered pair once
    adjacent = (jj == ii) | (jj == (ii + 1) % n) | ((jj + 1) % n == ii)
    mask &= ~adjacent
    if not mask.any():
        return True
    a, b = p[ii[mask]], q[ii[mask]]
    c, dpt = p[jj[mask]], q[jj[mask]]
    d1 = cross(a, b, c)
    d2 = cross(a, b, dpt)
    d3 = cross(c, dpt, a)
    d4 = cross(c, dpt, b)
    inter = ((d1 * d2) < 0) & ((d3 * d4) < 0)
    return not bool(inter.any())


# ---------------------------------------------------------------------------
# shared ray engine


def _solve_rays(f_batch, centroid: float, level: float, n_points: int,
                r_max: float = RAY_R_MAX, n_scan: int = RAY_SCAN,
                tol: float = BISECT_TOL):
    """Outermost root of f = level on each ray from the centroid.

    Returns (thetas, radii, nonmonotone) where nonmonotone reports rays with
    more than one bracket (the cue to fall back to a level-set extraction).
    """
    thetas = 2.0 * np.pi * np.arange(n_points) / n_points
    dirs = np.exp(1j * thetas)
    rs = np.linspace(r_max, r_max / n_scan, n_scan)  # descending, excludes r = 0
    grid = centroid + rs[:, None] * dirs[None, :]
    fv = f_batch(grid.ravel()).reshape(n_scan, n_points)
    inside = fv >= level
    if inside[0].any():
        bad = int(np.flatnonzero(inside[0])[0])
        raise RootNotBracketed(
            f"f >= 1/kappa at r = {r_max} on ray theta = {thetas[bad]:.6f}; "
            "contour extends beyond the search radius",
            angle=float(thetas[bad]),
        )
    crossed = inside.any(axis=0)
    if not crossed.all():
        bad = int(np.flatnonzero(~crossed)[0])
        raise RootNotBracketed(
            f"no sign change of f - 1/kappa on ray theta = {thetas[bad]:.6f}",
            angle=float(thetas[bad]),
        )
    first = inside.argmax(axis=0)   # first True from the outside = outermost crossing
    transitions = (inside[1:] != inside[:-1]).sum(axis=0)
    nonmonotone = bool((transitions > 1).any())

    hi = rs[first - 1]   # f < level (outside)
    lo = rs[first]       # f >= level (inside)
    max_iter = int(math.ceil(math.log2(max((hi - lo).max(), tol) / tol))) + 2
    for _ in range(max_iter):
        mid = 0.5 * (hi + lo)
        is_in = f_batch(centroid + mid * dirs) >= level
        lo = np.where(is_in, mid, lo)
        hi = np.where(is_in, hi, mid)
        if (hi - lo).max() < tol:
            break
    return thetas, 0.5 * (hi + lo), nonmonotone


def _chunked(f):
    def wrapped(psi):
        psi = np.asarray(psi, dtype=complex)
        if psi.size <= _CHUNK:
            return f(psi)
        out = np.empty(psi.size)
        for k in range(0, psi.size, _CHUNK):
            out[k:k + _CHUNK] = f(psi[k:k + _CHUNK])
        return out
    return wrapped


def _map_to_z(psi, kappa, m_batch):
    return psi * (1.0 - kappa) + kappa * psi * psi * m_batch(psi)


def _finish(psis, thetas, kappa, m_batch, method, meta, check=True) -> ContourCurve:
    z = _map_to_z(psis, kappa, m_batch)
    curve = ContourCurve(np.asarray(z, dtype=complex), method, float(kappa),
                         np.asarray(thetas, dtype=float), np.asarray(psis, dtype=complex),
                         meta)
    if check:
        curve.require_valid()
    return curve


# ---------------------------------------------------------------------------
# ellipse (diagonal eta)


def ellipse_contour(c: float, kappa: float, n_points: int = DEFAULT_POINTS) -> ContourCurve:
    """Shifted ellipse bounding the eigenvalue domain for eta = c*I.

    Traced uniformly in the eccentric angle; Psi = c + sqrt(kappa) e^{i theta}
    is the corresponding auxiliary circle.
    """
    if not abs(c) < 1.0:
        raise DomainError(f"|c| must be < 1, got {c}")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    if n_points < 16:
        raise DomainError(f"n_points must be >= 16, got {n_points}")
    thetas = 2.0 * np.pi * np.arange(n_points) / n_points
    root = math.sqrt(kappa)
    psis = c + root * np.exp(1j * thetas)
    x0 = c * (1.0 + kappa)
    z = x0 + root * (1.0 + c * c) * np.cos(thetas) + 1j * root * (1.0 - c * c) * np.sin(thetas)
    return ContourCurve(z, "ellipse", float(kappa), thetas, psis, {"c": c})


# ---------------------------------------------------------------------------
# eigenvalue expansion (normal eta)


def spectrum_contour(lambdas, kappa: float, n_points: int = DEFAULT_POINTS) -> ContourCurve:
    """Contour from the eigenvalue expansion (1/N) sum |Psi - lambda_j|^-2 = 1/kappa.

    Valid for normal eta, whose contour depends on the spectrum alone; the
    caller is responsible for the normality check.
    """
    lam = np.asarray(lambdas, dtype=complex).ravel()
    if lam.size == 0:
        raise DomainError("need at least one eigenvalue")
    if np.abs(lam).max() >= 1.0:
        raise InvalidCorrelation(f"eigenvalue modulus {np.abs(lam).max():.6g} >= 1")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    centroid = float(lam.mean().real)

    @_chunked
    def f_batch(psi):
        with np.errstate(divide="ignore"):
            return (1.0 / np.square(np.abs(psi[:, None] - lam[None, :]))).mean(axis=1)

    def m_batch(psi):
        psi = np.asarray(psi, dtype=complex)
        return (1.0 / (psi[:, None] - lam[None, :])).mean(axis=1)

    meta = {"n_eigenvalues": int(lam.size), "centroid": centroid}
    thetas, radii, nonmono = _solve_rays(f_batch, centroid, 1.0 / kappa, n_points)
    if nonmono:
        return _level_set_curve(f_batch, m_batch, centroid, kappa, n_points,
                                float(np.abs(lam - centroid).max()), meta | {"fallback_from": "spectrum_expansion"})
    psis = centroid + radii * np.exp(1j * thetas)
    return _finish(psis, thetas, kappa, m_batch, "spectrum_expansion", meta)


# ---------------------------------------------------------------------------
# tridiagonal continuum


def _sqrt_stieltjes(a: np.ndarray, c0: float) -> np.ndarray:
    """Branch of sqrt(a^2 - 4 c0^2) cut on [-2c0, 2c0] and asymptotic to +a."""
    a = np.asarray(a, dtype=complex)
    return np.sqrt(a - 2.0 * c0) * np.sqrt(a + 2.0 * c0)


def _arcsine_f(a: np.ndarray, c0: float) -> np.ndarray:
    """(1/pi) integral over phi of |a - 2 c0 cos(phi)|^-2 (continuum limit of f).

    Equals -Im F(a) / Im a with F(a) = 1 / sqrt_stieltjes(a^2 - 4 c0^2);
    on the real axis the analytic limit a / S^3 applies, and on the spectral
    cut itself the value is infinite.
    """
    a = np.asarray(a, dtype=complex)
    s = _sqrt_stieltjes(a, c0)
    out = np.empty(a.shape)
    near_axis = np.abs(a.imag) < 1e-9 * (np.abs(a.real) + 2.0 * c0 + 1.0)
    reg = ~near_axis
    with np.errstate(divide="ignore", invalid="ignore"):
        f_reg = -(1.0 / s).imag / a.imag
    out[reg] = f_reg[reg]
    a_ax = a[near_axis]
    s_ax = s[near_axis]
    with np.errstate(divide="ignore", invalid="ignore"):
        lim = np.real(a_ax / s_ax**3)
    lim[np.abs(a_ax.real) <= 2.0 * c0] = np.inf
    out[near_axis] = lim
    return out


def tridiag_contour(c: float, c0: float, kappa: float, variant: str = "symmetric",
                    n_points: int = DEFAULT_POINTS) -> ContourCurve:
    """Continuum contour for tridiagonal eta with sub/super-diagonal magnitude c0.

    variant "symmetric" covers equal off-diagonals (real spectrum on
    [c - 2c0, c + 2c0]); "anticommuting" covers opposite-sign off-diagonals
    (spectrum c + i [-2c0, 2c0]), which is the symmetric solution rotated by
    pi/2 about c in the Psi plane.
    """
    variant = variant.lower()
    if variant not in ("symmetric", "anticommuting"):
        raise DomainError(f"unknown variant {variant!r}")
    if c0 < 0:
        raise DomainError(f"c0 must be nonnegative, got {c0}")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    if variant == "symmetric":
        if abs(c) + 2.0 * c0 > 1.0:
            raise InvalidCorrelation(
                f"|c| + 2 c0 = {abs(c) + 2 * c0:.6g} > 1: spectrum leaves the admissible disc"
            )
    else:
        if math.hypot(c, 2.0 * c0) >= 1.0:
            raise InvalidCorrelation(
                f"sqrt(c^2 + 4 c0^2) = {math.hypot(c, 2 * c0):.6g} >= 1: inadmissible eta"
            )

    if variant == "symmetric":
        def to_arg(psi):
            return np.asarray(psi, dtype=complex) - c

        def m_batch(psi):
            return 1.0 / _sqrt_stieltjes(to_arg(psi), c0)
    else:
        def to_arg(psi):
            return -1j * (np.asarray(psi, dtype=complex) - c)

        def m_batch(psi):
            return -1j / _sqrt_stieltjes(to_arg(psi), c0)

    @_chunked
    def f_batch(psi):
        return _arcsine_f(to_arg(psi), c0)

    meta = {"c": c, "c0": c0, "variant": variant}
    thetas, radii, nonmono = _solve_rays(f_batch, c, 1.0 / kappa, n_points)
    if nonmono:
        return _level_set_curve(f_batch, m_batch, c, kappa, n_points, 2.0 * c0,
                                meta | {"fallback_from": "tridiag_continuum"})
    psis = c + radii * np.exp(1j * thetas)
    return _finish(psis, thetas, kappa, m_batch, "tridiag_continuum", meta)


def tridiag_eq36_residual(psi, c: float, c0: float, kappa: float):
    """Residual of the closed-form polar boundary equation at Psi (symmetric variant).

    Uses the principal branch s e^{i nu} = sqrt(r^2 e^{2 i theta} - 4 c0^2) with
    Psi - c = r e^{i theta}. Returns (residual, branch_ok); points where the
    principal branch disagrees with the resolvent branch are flagged instead of
    force-checked.
    """
    a = np.asarray(psi, dtype=complex) - c
    r = np.abs(a)
    theta = np.angle(a)
    w = a * a - 4.0 * c0 * c0
    sv = np.sqrt(w)
    s = np.abs(sv)
    nu = np.angle(sv)
    denom = 8.0 * c0**2 * r**2 * np.cos(2.0 * theta) - (
        16.0 * c0**4 + r**4 - s**2 * (4.0 * c0**2 - r**2)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = 1.0 / kappa + 2.0 * r * s * np.cos(theta - nu) / denom
    branch_ok = np.abs(_sqrt_stieltjes(a, c0) - sv) <= 1e-9 * (s + 1.0)
    return residual, branch_ok


def validate_eq36(curve: ContourCurve, tol: float = 1e-6) -> int:
    """Back-substitute a symmetric tridiagonal contour into the closed-form
    boundary equation; raises BranchError when a branch-consistent point fails.

    Returns the number of points actually checked (branch mismatches are
    skipped by design)."""
    meta = curve.meta
    if curve.method != "tridiag_continuum" or meta.get("variant") != "symmetric":
        raise DomainError("closed-form check applies to symmetric tridiagonal contours")
    residual, ok = tridiag_eq36_residual(curve.psis, meta["c"], meta["c0"], curve.kappa)
    checked = int(ok.sum())
    if checked == 0:
        raise BranchError("no branch-consistent points to check")
    worst = float(np.abs(residual[ok]).max())
    if worst > tol:
        raise BranchError(f"closed-form residual {worst:.3e} exceeds {tol} on a "
                          "branch-consistent point")
    return checked


# ---------------------------------------------------------------------------
# general (possibly nonnormal) eta via the matrix resolvent


def _bandwidths(m: np.ndarray) -> tuple[int, int]:
    nz = np.argwhere(m != 0.0)
    if nz.size == 0:
        return 0, 0
    diff = nz[:, 0] - nz[:, 1]
    return int(max(diff.max(), 0)), int(max((-diff).max(), 0))


def _tridiag_stats(diag, sub, sup, psi):
    """Frobenius norm squared and trace of (psi I - eta)^{-1} for tridiagonal eta.

    O(N) per psi point: continued-fraction pivots delta/eps give the inverse
    diagonal, and the off-diagonal columns are geometric in the pivot ratios,
    so their squared sums satisfy first-order recurrences. Vectorized over psi.
    """
    psi = np.asarray(psi, dtype=complex)
    n = len(diag)
    m = len(psi)
    if n == 1:
        dinv = 1.0 / (psi - diag[0])
        return np.abs(dinv) ** 2, dinv
    offd = sub * sup                    # products of R's off-diagonals, signs cancel
    sup2 = np.abs(sup) ** 2
    sub2 = np.abs(sub) ** 2

    eps = np.empty((n, m), dtype=complex)
    eps[n - 1] = psi - diag[n - 1]
    for i in range(n - 2, -1, -1):
        eps[i] = (psi - diag[i]) - offd[i] / eps[i + 1]
    lower = np.empty((n, m))
    lower[n - 1] = 1.0
    for i in range(n - 2, -1, -1):
        lower[i] = 1.0 + (sub2[i] / np.abs(eps[i + 1]) ** 2) * lower[i + 1]

    frob2 = np.zeros(m)
    trace = np.zeros(m, dtype=complex)
    delta_prev = None
    upper_prev = None
    for i in range(n):
        di = psi - diag[i]
        if i == 0:
            delta = di.copy()
            upper = np.ones(m)
        else:
            delta = di - offd[i - 1] / delta_prev
            upper = 1.0 + (sup2[i - 1] / np.abs(delta_prev) ** 2) * upper_prev
        dinv = 1.0 / (delta + eps[i] - di)
        frob2 += np.abs(dinv) ** 2 * (upper + lower[i] - 1.0)
        trace += dinv
        delta_prev = delta
        upper_prev = upper
    return frob2, trace


def _make_tridiag_resolvent(eta_data: np.ndarray):
    n = eta_data.shape[0]
    diag = np.ascontiguousarray(np.diagonal(eta_data)).astype(complex)
    sub = np.ascontiguousarray(np.diagonal(eta_data, -1)).astype(complex) if n > 1 else np.zeros(0, complex)
    sup = np.ascontiguousarray(np.diagonal(eta_data, 1)).astype(complex) if n > 1 else np.zeros(0, complex)

    def stats(psi):
        psi = np.asarray(psi, dtype=complex)
        frob2, trace = _tridiag_stats(diag, sub, sup, psi)
        bad = ~np.isfinite(frob2)
        if bad.any():
            f2, tr2 = _tridiag_stats(diag, sub, sup, psi[bad] + 1e-12 * (1.0 + 1.0j))
            frob2[bad] = f2
            trace[bad] = tr2
            if not np.all(np.isfinite(frob2)):
                raise SingularResolvent("resolvent pivot breakdown persists after perturbation")
        return frob2 / n, trace / n
    return stats


def _make_dense_resolvent(eta_data: np.ndarray):
    from scipy.linalg import get_lapack_funcs, schur

    n = eta_data.shape[0]
    t_mat, _ = schur(eta_data, output="complex")
    trtri, = get_lapack_funcs(("trtri",), (t_mat,))
    diag = np.diagonal(t_mat).copy()

    def one(psi: complex):
        r = psi * np.eye(n, dtype=complex) - t_mat
        for attempt in range(2):
            inv, info = trtri(r, lower=0)
            if info == 0:
                return float((np.abs(inv) ** 2).sum()) / n
            r = (psi + 1e-12 * (1.0 + 1.0j)) * np.eye(n, dtype=complex) - t_mat
        raise SingularResolvent(f"Psi = {psi} collides with an eigenvalue of eta")

    def stats(psi):
        psi = np.asarray(psi, dtype=complex)
        frob = np.array([one(p) for p in psi])
        trace = (1.0 / (psi[:, None] - diag[None, :])).mean(axis=1)
        return frob, trace
    return stats


def general_contour(eta: EtaMatrix | np.ndarray, kappa: float,
                    resolution: int = DEFAULT_POINTS) -> ContourCurve:
    """Contour from the matrix form of the boundary equation; eta may be nonnormal.

    f(Psi) = (1/N) tr [ (Psi - eta)(Psi* - eta^t) ]^{-1} is evaluated through an
    O(N) recurrence when eta is tridiagonal and through the complex Schur form
    otherwise; rays fall back to marching squares (grid resolution x resolution)
    when any ray is non-monotone.
    """
    data = eta.data if isinstance(eta, EtaMatrix) else np.asarray(eta, dtype=float)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise DomainError(f"eta must be square, got shape {data.shape}")
    sigma = eta.sigma_max if isinstance(eta, EtaMatrix) else _largest_singular_value(data)
    if sigma >= 1.0:
        raise InvalidCorrelation(f"sigma_max(eta) = {sigma:.6g} >= 1")
    if not kappa > 0.0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    n = data.shape[0]
    centroid = float(np.trace(data).real) / n
    lo_bw, hi_bw = _bandwidths(data)
    stats = _make_tridiag_resolvent(data) if lo_bw <= 1 and hi_bw <= 1 else _make_dense_resolvent(data)

    @_chunked
    def f_batch(psi):
        return stats(psi)[0]

    def m_batch(psi):
        return stats(np.asarray(psi, dtype=complex))[1]

    meta = {
        "n": n,
        "sigma_max": sigma,
        "solver": "tridiagonal" if lo_bw <= 1 and hi_bw <= 1 else "dense",
        "extraction": "rays",
    }
    thetas, radii, nonmono = _solve_rays(f_batch, centroid, 1.0 / kappa, resolution)
    if nonmono:
        return _level_set_curve(f_batch, m_batch, centroid, kappa, resolution, sigma,
                                meta | {"fallback_from": "general"})
    psis = centroid + radii * np.exp(1j * thetas)
    return _finish(psis, thetas, kappa, m_batch, "level_set", meta)


# ---------------------------------------------------------------------------
# marching-squares level set (fallback / direct)


_SEG_TABLE = {
    1: [("left", "bottom")],
    2: [("bottom", "right")],
    3: [("left", "right")],
    4: [("top", "right")],
    6: [("top", "bottom")],
    7: [("left", "top")],
    8: [("left", "top")],
    9: [("top", "bottom")],
    11: [("top", "right")],
    12: [("left", "right")],
    13: [("bottom", "right")],
    14: [("left", "bottom")],
}


def _level_set_curve(f_batch, m_batch, centroid: float, kappa: float, n_points: int,
                     spectral_radius: float, meta: dict) -> ContourCurve:
    """Marching-squares extraction of f = 1/kappa, mapped to the z plane.

    Grid spans 1.5x the (spectral radius + sqrt(kappa)) disc around the
    centroid; the largest closed loop is returned.
    """
    level = 1.0 / kappa
    res = max(n_points, 64)
    half = 1.5 * (spectral_radius + math.sqrt(kappa))
    xs = centroid + np.linspace(-half, half, res + 1)
    ys = np.linspace(-half, half, res + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    vals = f_batch((gx + 1j * gy).ravel()).reshape(gy.shape) - level
    vals = np.clip(vals, -1e12, 1e12)   # keep edge interpolation finite near poles
    vals[vals == 0.0] = 1e-300          # push exact zeros off the corner-sign boundary

    pos = vals > 0.0
    coords: dict[tuple, complex] = {}
    # horizontal edges: (iy, ix) -- (iy, ix+1); vertical: (iy, ix) -- (iy+1, ix)
    for iy in range(res + 1):
        cross = np.flatnonzero(pos[iy, :-1] != pos[iy, 1:])
        for ix in cross:
            t = vals[iy, ix] / (vals[iy, ix] - vals[iy, ix + 1])
            coords[("h", iy, ix)] = (xs[ix] + t * (xs[ix + 1] - xs[ix])) + 1j * ys[iy]
    for ix in range(res + 1):
        cross = np.flatnonzero(pos[:-1, ix] != pos[1:, ix])
        for iy in cross:
            t = vals[iy, ix] / (vals[iy, ix] - vals[iy + 1, ix])
            coords[("v", iy, ix)] = xs[ix] + 1j * (ys[iy] + t * (ys[iy + 1] - ys[iy]))

    adj: dict[tuple, list[tuple]] = {}

    def connect(e1, e2):
        adj.setdefault(e1, []).append(e2)
        adj.setdefault(e2, []).append(e1)

    edge_names = {
        "top": lambda iy, ix: ("h", iy + 1, ix),
        "bottom": lambda iy, ix: ("h", iy, ix),
        "left": lambda iy, ix: ("v", iy, ix),
        "right": lambda iy, ix: ("v", iy, ix + 1),
    }
    for iy in range(res):
        row_idx = (pos[iy + 1, :-1].astype(int) * 8 + pos[iy + 1, 1:].astype(int) * 4
                   + pos[iy, 1:].astype(int) * 2 + pos[iy, :-1].astype(int))
        active = np.flatnonzero((row_idx != 0) & (row_idx != 15))
        for ix in active:
            idx = int(row_idx[ix])
            if idx in (5, 10):
                center_pos = (vals[iy, ix] + vals[iy, ix + 1]
                              + vals[iy + 1, ix] + vals[iy + 1, ix + 1]) > 0.0
                if idx == 5:   # TL and BR set
                    pairs = [("left", "top"), ("bottom", "right")] if center_pos else \
                            [("left", "bottom"), ("top", "right")]
                else:          # TR and BL set
                    pairs = [("top", "right"), ("left", "bottom")] if center_pos else \
                            [("left", "top"), ("bottom", "right")]
            else:
                pairs = _SEG_TABLE[idx]
            for e1, e2 in pairs:
                connect(edge_names[e1](iy, ix), edge_names[e2](iy, ix))

    visited: set[tuple] = set()
    loops: list[list[tuple]] = []
    for start in adj:
        if start in visited:
            continue
        if len(adj[start]) != 2:
            raise ContourError("level set is not closed inside the sampling box")
        loop = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxt = [e for e in adj[cur] if e != prev]
            if not nxt:
                raise ContourError("level set walk hit a dead end")
            prev, cur = cur, nxt[0]
            if cur == start:
                break
            loop.append(cur)
            visited.add(cur)
        loops.append(loop)
    if not loops:
        raise ContourError("no level-set curve found in the sampling box")

    def loop_area(loop):
        z = np.array([coords[k] for k in loop])
        w = np.roll(z, -1)
        return 0.5 * np.sum(z.real * w.imag - w.real * z.imag)

    best = max(loops, key=lambda lp: abs(loop_area(lp)))
    psis = np.array([coords[k] for k in best])
    if loop_area(best) < 0:
        psis = psis[::-1]
    thetas = np.angle(psis - centroid) % (2.0 * np.pi)
    meta = dict(meta)
    meta["extraction"] = "marching_squares"
    meta["resolution"] = res
    meta["n_loops"] = len(loops)
    return _finish(psis, thetas, kappa, m_batch, "level_set", meta)


# ---------------------------------------------------------------------------
# distances


def _point_segment_distances(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Min distance from each point to the closed polyline through poly."""
    a = poly
    b = np.roll(poly, -1)
    ab = b - a
    denom = np.abs(ab) ** 2
    denom[denom == 0.0] = 1.0
    out = np.empty(len(pts))
    for k in range(0, len(pts), _CHUNK):
        blk = pts[k:k + _CHUNK]
        t = ((blk[:, None] - a[None, :]) * np.conj(ab[None, :])).real / denom[None, :]
        t = np.clip(t, 0.0, 1.0)
        proj = a[None, :] + t * ab[None, :]
        out[k:k + _CHUNK] = np.abs(blk[:, None] - proj).min(axis=1)
    return out


def hausdorff_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two closed contours (vertex to polyline)."""
    pa = a.points if isinstance(a, ContourCurve) else np.asarray(a, dtype=complex)
    pb = b.points if isinstance(b, ContourCurve) else np.asarray(b, dtype=complex)
    d_ab = _point_segment_distances(pa, pb).max()
    d_ba = _point_segment_distances(pb, pa).max()
    return float(max(d_ab, d_ba))
