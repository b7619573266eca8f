"""Analytic predictions: eigenvalue-domain contours and spectral densities."""

from .contours import (
    ContourCurve,
    ellipse_contour,
    general_contour,
    hausdorff_distance,
    spectrum_contour,
    tridiag_contour,
    tridiag_eq36_residual,
    validate_eq36,
)
from .density import (
    DensityModel,
    density_diagonal,
    ellipse_center,
    ellipse_semi_axes,
    inside_ellipse,
    loop_solve_diagonal,
    marginal_density,
    mp_density,
    radial_density,
)

__all__ = [
    "ContourCurve",
    "DensityModel",
    "density_diagonal",
    "ellipse_center",
    "ellipse_contour",
    "ellipse_semi_axes",
    "general_contour",
    "hausdorff_distance",
    "inside_ellipse",
    "loop_solve_diagonal",
    "marginal_density",
    "mp_density",
    "radial_density",
    "spectrum_contour",
    "tridiag_contour",
    "tridiag_eq36_residual",
    "validate_eq36",
]
