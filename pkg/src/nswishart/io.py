"""Deterministic CSV / JSON / SVG emission.

Floats are written with repr (shortest round-trip form), so identical inputs
produce byte-identical files on any platform; manifests carry no timestamps
for the same reason.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np


def _fmt(v) -> str:
    return repr(float(v))


def write_eigenvalues_csv(path, samples) -> None:
    lines = ["realization,index,re,im"]
    for s in samples:
        for j, lam in enumerate(s.eigenvalues.values):
            lines.append(f"{s.realization_index},{j},{_fmt(lam.real)},{_fmt(lam.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_singular_values_csv(path, samples) -> None:
    lines = ["realization,index,sigma"]
    for s in samples:
        for j, sig in enumerate(s.singular_values):
            lines.append(f"{s.realization_index},{j},{_fmt(sig)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_contour_csv(path, curve) -> None:
    lines = ["theta,psi_re,psi_im,z_re,z_im"]
    for theta, psi, z in zip(curve.thetas, curve.psis, curve.points):
        lines.append(f"{_fmt(theta)},{_fmt(psi.real)},{_fmt(psi.imag)},{_fmt(z.real)},{_fmt(z.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_density_csv(path, coords, values) -> None:
    lines = ["coord,value"]
    for c, v in zip(coords, values):
        lines.append(f"{_fmt(c)},{_fmt(v)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_histogram_csv(path, hist) -> None:
    lines = ["bin_lo,bin_hi,density"]
    for lo, hi, d in zip(hist.edges[:-1], hist.edges[1:], hist.normalized):
        lines.append(f"{_fmt(lo)},{_fmt(hi)},{_fmt(d)}")
    Path(path).write_text("\n".join(lines) + "\n")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def write_manifest(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def write_report_json(path, checks: list[dict]) -> None:
    """checks: list of {metric, value, threshold, pass} entries."""
    Path(path).write_text(json.dumps(checks, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# minimal SVG (scatter dots + contour polylines + axes); CSV is the contract


def write_svg(path, scatters=None, contours=None, size: int = 480, title: str = "") -> None:
    """scatters: list of (complex array, color); contours: list of (curve, color)."""
    scatters = scatters or []
    contours = contours or []
    xs, ys = [], []
    for pts, _ in scatters:
        xs.extend(np.asarray(pts).real)
        ys.extend(np.asarray(pts).imag)
    for curve, _ in contours:
        xs.extend(curve.points.real)
        ys.extend(curve.points.imag)
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    span = max(x_hi - x_lo, y_hi - y_lo, 1e-9)
    pad = 0.06 * span
    x_lo, x_hi = x_lo - pad, x_hi + pad
    y_lo, y_hi = y_lo - pad, y_hi + pad
    margin = 36

    def sx(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (size - 2 * margin)

    def sy(y):
        return size - margin - (y - y_lo) / (y_hi - y_lo) * (size - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{size / 2:.1f}" y="18" text-anchor="middle" '
                     f'font-size="13" font-family="sans-serif">{title}</text>')
    ax = [
        (sx(x_lo), sy(0.0), sx(x_hi), sy(0.0)),
        (sx(0.0), sy(y_lo), sx(0.0), sy(y_hi)),
    ]
    for x1, y1, x2, y2 in ax:
        parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                     f'stroke="#999" stroke-width="0.8"/>')
    for label, x, y, anchor in [
        (f"{x_lo:.3g}", sx(x_lo), sy(0.0) + 14, "start"),
        (f"{x_hi:.3g}", sx(x_hi), sy(0.0) + 14, "end"),
        (f"{y_lo:.3g}", sx(0.0) + 4, sy(y_lo), "start"),
        (f"{y_hi:.3g}", sx(0.0) + 4, sy(y_hi) + 10, "start"),
    ]:
        parts.append(f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}" '
                     f'font-size="10" font-family="sans-serif" fill="#666">{label}</text>')
    for pts, color in scatters:
        pts = np.asarray(pts)
        for p in pts:
            parts.append(f'<circle cx="{sx(p.real):.2f}" cy="{sy(p.imag):.2f}" r="1.2" '
                         f'fill="{color}" fill-opacity="0.6"/>')
    for curve, color in contours:
        coords = " ".join(f"{sx(p.real):.2f},{sy(p.imag):.2f}"
                          for p in np.append(curve.points, curve.points[0]))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="1.4"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
