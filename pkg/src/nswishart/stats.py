"""Empirical densities from ensembles and quantitative model comparisons."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytics.contours import ContourCurve, _point_segment_distances
from .errors import DegenerateContour, DomainError, EmptyInput

MODES = ("radial", "marginal_x", "marginal_y", "planar2d", "singular_squared")

ZERO_ATOM_TOL = 1e-8     # |lambda| below this is the rank-deficiency atom
RANGE_PAD = 0.02         # auto-fit ranges pad the data span by 2 percent
DEFAULT_BINS_1D = 50
DEFAULT_BINS_2D = 128
BOUNDARY_TOL = 1e-9      # distance to the contour that still counts as inside


@dataclass
class Histogram:
    """1-D histogram with unit-mass normalization.

    normalized integrates to exactly 1 over the bins; for ensembles with a
    rank-deficiency atom the zero eigenvalues are counted in the first bin and
    their fraction is additionally reported as atom_weight.
    """

    edges: np.ndarray
    counts: np.ndarray
    normalized: np.ndarray
    total_weight: float
    atom_weight: float = 0.0

    def __post_init__(self):
        if not np.all(np.diff(self.edges) > 0):
            raise DomainError("histogram edges must be strictly increasing")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def mass(self) -> float:
        return float((self.normalized * self.widths).sum())


@dataclass
class Histogram2D:
    """2-D histogram normalized to unit mass per area."""

    x_edges: np.ndarray
    y_edges: np.ndarray
    counts: np.ndarray
    normalized: np.ndarray
    total_weight: float
    atom_weight: float = 0.0

    def mass(self) -> float:
        areas = np.outer(np.diff(self.x_edges), np.diff(self.y_edges))
        return float((self.normalized * areas).sum())


def pool_eigenvalues(samples) -> np.ndarray:
    """All eigenvalues of a sample list (or a raw complex array) as one array."""
    if isinstance(samples, np.ndarray):
        return samples.ravel()
    vals = [np.asarray(s.eigenvalues.values) for s in samples]
    if not vals:
        raise EmptyInput("no samples supplied")
    return np.concatenate(vals)


def _auto_edges(values: np.ndarray, bins: int, nonnegative: bool) -> np.ndarray:
    lo = float(values.min())
    hi = float(values.max())
    span = hi - lo
    pad = RANGE_PAD * (span if span > 0 else max(abs(hi), 1.0))
    lo, hi = lo - pad, hi + pad
    if nonnegative:
        lo = max(lo, 0.0)
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, bins + 1)


def empirical_density(samples, mode: str, bins: int | None = None, value_range=None):
    """Pooled histogram of eigenvalue (or singular-value) data.

    mode: "radial" bins |lambda|, "marginal_x" Re, "marginal_y" Im,
    "planar2d" the plane, "singular_squared" the squared singular values.
    Zero-modulus eigenvalues (rank deficiency) land in the first bin and are
    reported as atom_weight.
    """
    mode = mode.lower()
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")
    if bins is None:
        bins = DEFAULT_BINS_2D if mode == "planar2d" else DEFAULT_BINS_1D
    if bins < 4:
        raise DomainError(f"bins must be >= 4, got {bins}")

    if mode == "singular_squared":
        if isinstance(samples, np.ndarray):
            data = samples.ravel() ** 2
        else:
            if not samples:
                raise EmptyInput("no samples supplied")
            data = np.concatenate([np.asarray(s.singular_values) for s in samples]) ** 2
        atom = float((data < ZERO_ATOM_TOL).mean())
        eigs = None
    else:
        eigs = pool_eigenvalues(samples)
        if eigs.size == 0:
            raise EmptyInput("samples contain no eigenvalues")
        atom = float((np.abs(eigs) < ZERO_ATOM_TOL).mean())

    if mode == "planar2d":
        x, y = eigs.real, eigs.imag
        x_edges = _auto_edges(x, bins, nonnegative=False)
        y_edges = _auto_edges(y, bins, nonnegative=False)
        counts, _, _ = np.histogram2d(x, y, bins=[x_edges, y_edges])
        total = float(counts.sum())
        if total == 0:
            raise EmptyInput("no data fell inside the 2-D range")
        areas = np.outer(np.diff(x_edges), np.diff(y_edges))
        return Histogram2D(x_edges, y_edges, counts.astype(int),
                           counts / (total * areas), total, atom)

    if mode == "radial":
        data = np.abs(eigs)
    elif mode == "marginal_x":
        data = eigs.real
    elif mode == "marginal_y":
        data = eigs.imag
    # singular_squared already set data above

    if value_range is not None:
        lo, hi = float(value_range[0]), float(value_range[1])
        edges = np.linspace(lo, hi, bins + 1)
    else:
        edges = _auto_edges(data, bins, nonnegative=mode in ("radial", "singular_squared"))
    clipped = np.clip(data, edges[0], np.nextafter(edges[-1], edges[0]))
    counts, _ = np.histogram(clipped, bins=edges)
    total = float(counts.sum())
    widths = np.diff(edges)
    return Histogram(edges, counts.astype(int), counts / (total * widths), total, atom)


def containment_fraction(samples, contour: ContourCurve) -> float:
    """Fraction of pooled eigenvalues inside the closed contour polygon.

    Winding-number test; points within 1e-9 of the boundary count as inside.
    """
    if len(contour.points) < 16:
        raise DegenerateContour(f"contour needs >= 16 points, got {len(contour.points)}")
    if abs(contour.signed_area()) < 1e-12:
        raise DegenerateContour("contour polygon area below 1e-12")
    pts = pool_eigenvalues(samples)
    if pts.size == 0:
        raise EmptyInput("no eigenvalues to test")
    inside = _winding_inside(pts, contour.points)
    outside_idx = np.flatnonzero(~inside)
    if outside_idx.size:
        d = _point_segment_distances(pts[outside_idx], contour.points)
        inside[outside_idx[d <= BOUNDARY_TOL]] = True
    return float(inside.mean())


def _winding_inside(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Nonzero-winding-number point-in-polygon test, vectorized and chunked."""
    x1, y1 = poly.real, poly.imag
    poly2 = np.roll(poly, -1)
    x2, y2 = poly2.real, poly2.imag
    out = np.empty(len(pts), dtype=bool)
    chunk = max(1, 4_000_000 // max(len(poly), 1))
    for k in range(0, len(pts), chunk):
        px = pts[k:k + chunk].real[:, None]
        py = pts[k:k + chunk].imag[:, None]
        upward = (y1[None, :] <= py) & (y2[None, :] > py)
        downward = (y1[None, :] > py) & (y2[None, :] <= py)
        cross = (x2 - x1)[None, :] * (py - y1[None, :]) - (px - x1[None, :]) * (y2 - y1)[None, :]
        wn = (upward & (cross > 0)).sum(axis=1) - (downward & (cross < 0)).sum(axis=1)
        out[k:k + chunk] = wn != 0
    return out


def l1_distance(h: Histogram, model, exclude_bins=()) -> float:
    """sum over bins of |normalized - model(midpoint)| * width.

    exclude_bins skips the given bin indices (e.g. finite-size artifacts near
    zero in the imaginary-part marginal).
    """
    mids = h.midpoints
    try:
        model_vals = np.asarray(model(mids), dtype=float)
        if model_vals.shape != mids.shape:
            raise TypeError
    except TypeError:
        model_vals = np.array([float(model(m)) for m in mids])
    diff = np.abs(h.normalized - model_vals) * h.widths
    if len(exclude_bins):
        keep = np.ones(len(diff), dtype=bool)
        keep[list(exclude_bins)] = False
        diff = diff[keep]
    return float(diff.sum())
