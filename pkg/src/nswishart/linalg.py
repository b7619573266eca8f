"""Dense linear-algebra kernels: PSD square root, nonsymmetric eigenvalues,
singular values and the 2x2-block Schur inverse.

Matrices are plain row-major float64 ``numpy.ndarray``s. The eigen/SVD kernels
are LAPACK-backed (balancing + Hessenberg + implicit QR, and divide-and-conquer
SVD); every result is passed through the runtime self-checks promised by the
module contract (conjugate closure, trace identities, Frobenius identity)
rather than trusted blindly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NoConvergence, NotPSD, SingularBlock

__all__ = [
    "ComplexSpectrum",
    "as_real_matrix",
    "symmetric_sqrt",
    "nonsym_eigenvalues",
    "singular_values",
    "schur_block_inverse",
]

MAX_EIG_DIM = 2048

# Tolerances fixed by the module contract.
PAIR_TOL = 1e-8          # conjugate-pair matching (absolute)
FLUSH_TOL = 1e-10        # |Im| below this is flushed to exactly real
TRACE_TOL = 1e-6         # |sum(lambda) - tr M|  <= TRACE_TOL * ||M||_F
TRACE_SQ_TOL = 1e-5      # |sum(lambda^2) - tr M^2| <= TRACE_SQ_TOL * ||M||_F^2
SQRT_TOL = 1e-8          # relative Frobenius error of S*S - M
SVD_SUM_TOL = 1e-8       # relative error of sum(s^2) - ||M||_F^2
COND_LIMIT = 1e12        # block inverse condition-estimate limit


@dataclass
class ComplexSpectrum:
    """All eigenvalues of a real square matrix plus a cheap backward-error score.

    ``values`` is closed under conjugation (within PAIR_TOL) and
    ``backward_error`` is the larger of the relative trace and trace-of-square
    residuals used as a runtime self-check.
    """

    values: np.ndarray
    backward_error: float

    def __len__(self) -> int:
        return len(self.values)


def as_real_matrix(a, square: bool = False) -> np.ndarray:
    """Validate and return a 2-D float64 array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionError("matrix has non-finite entries")
    return m


def symmetric_sqrt(m) -> np.ndarray:
    """Symmetric square root of a symmetric PSD matrix.

    Eigenvalues in [-1e-10*||M||_2, 0) are clipped to zero; anything more
    negative raises NotPSD.
    """
    m = as_real_matrix(m, square=True)
    scale = np.abs(m).max()
    if scale > 0 and np.abs(m - m.T).max() > 1e-12 * scale:
        raise DimensionError("matrix is not symmetric within 1e-12 * ||M||_max")
    try:
        evals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh essentially never fails
        raise NoConvergence(f"symmetric eigensolve failed: {exc}") from exc
    norm2 = np.abs(evals).max() if len(evals) else 0.0
    floor = -1e-10 * norm2
    if evals.min(initial=0.0) < floor:
        raise NotPSD(
            f"matrix has eigenvalue {evals.min():.3e} below the PSD floor {floor:.3e}"
        )
    root = vecs * np.sqrt(np.clip(evals, 0.0, None)) @ vecs.T
    root = 0.5 * (root + root.T)
    frob = np.linalg.norm(m)
    if frob > 0:
        err = np.linalg.norm(root @ root - m) / frob
        if err > SQRT_TOL:
            raise NoConvergence(f"square-root residual {err:.3e} exceeds {SQRT_TOL}")
    return root


def _enforce_conjugate_closure(values: np.ndarray) -> np.ndarray:
    """Flush tiny imaginary parts and verify the conjugate-pair structure.

    Greedy nearest-conjugate matching at absolute tolerance PAIR_TOL.
    """
    w = values.copy()
    w.imag[np.abs(w.imag) < FLUSH_TOL] = 0.0
    pos = np.flatnonzero(w.imag > 0)
    neg = np.flatnonzero(w.imag < 0)
    if len(pos) != len(neg):
        raise NoConvergence(
            f"spectrum not conjugation-closed: {len(pos)} upper vs {len(neg)} lower values"
        )
    if len(pos):
        remaining = w[neg].copy()
        alive = np.ones(len(neg), dtype=bool)
        for i in pos:
            d = np.abs(np.conj(w[i]) - remaining)
            d[~alive] = np.inf
            j = int(np.argmin(d))
            if d[j] > PAIR_TOL:
                raise NoConvergence(
                    f"eigenvalue {w[i]:.6g} has no conjugate partner within {PAIR_TOL}"
                )
            alive[j] = False
    return w


def nonsym_eigenvalues(m) -> ComplexSpectrum:
    """All eigenvalues of a real square matrix (dimension <= 2048).

    LAPACK dgeev under the hood: balancing, Hessenberg reduction, implicit
    double-shift QR. The trace and conjugacy identities are verified before
    the spectrum is returned.
    """
    m = as_real_matrix(m, square=True)
    n = m.shape[0]
    if n > MAX_EIG_DIM:
        raise DimensionError(f"dimension {n} exceeds the supported maximum {MAX_EIG_DIM}")
    if n == 0:
        return ComplexSpectrum(np.zeros(0, dtype=complex), 0.0)
    try:
        w = np.linalg.eigvals(m).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"QR iteration failed to converge: {exc}") from exc
    w = _enforce_conjugate_closure(w)
    frob = max(np.linalg.norm(m), np.finfo(float).tiny)
    tr_res = abs(w.sum() - np.trace(m)) / frob
    # tr(M^2) = sum_ij M_ij * M_ji, no matrix product needed
    tr_sq = float((m * m.T).sum())
    tr_sq_res = abs((w * w).sum() - tr_sq) / frob**2
    if tr_res > TRACE_TOL:
        raise NoConvergence(f"trace self-check failed: residual {tr_res:.3e}")
    if tr_sq_res > TRACE_SQ_TOL:
        raise NoConvergence(f"trace-square self-check failed: residual {tr_sq_res:.3e}")
    return ComplexSpectrum(w, float(max(tr_res, tr_sq_res)))


def singular_values(m) -> np.ndarray:
    """Singular values in descending order; sum(s^2) is checked against ||M||_F^2."""
    m = as_real_matrix(m)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"SVD failed to converge: {exc}") from exc
    frob_sq = float((m * m).sum())
    if frob_sq > 0:
        err = abs(float((s * s).sum()) - frob_sq) / frob_sq
        if err > SVD_SUM_TOL:
            raise NoConvergence(f"singular-value Frobenius identity off by {err:.3e}")
    return s


def _cond_estimate(m: np.ndarray) -> float:
    try:
        c = np.linalg.cond(m)
    except np.linalg.LinAlgError:
        return np.inf
    return float(c) if np.isfinite(c) else np.inf


def schur_block_inverse(a, b, c, d):
    """Blockwise inverse of M = [[a, b], [c, d]] via Schur complements.

    Returns (tl, tr, bl, br) with
        tl = S^-1,            tr = -S^-1 b d^-1,
        bl = -d^-1 c S^-1,    br = (d - c a^-1 b)^-1,
    where S = a - b d^-1 c. Raises SingularBlock if d or either Schur
    complement has condition estimate >= 1e12, and verifies M M^-1 = I
    to 1e-8 before returning.
    """
    a = as_real_matrix(a, square=True)
    d = as_real_matrix(d, square=True)
    b = as_real_matrix(b)
    c = as_real_matrix(c)
    na, nd = a.shape[0], d.shape[0]
    if b.shape != (na, nd) or c.shape != (nd, na):
        raise DimensionError(
            f"off-diagonal blocks must be {na}x{nd} and {nd}x{na}, got {b.shape} and {c.shape}"
        )
    if _cond_estimate(d) >= COND_LIMIT:
        raise SingularBlock("block d is numerically singular")
    d_inv_c = np.linalg.solve(d, c)
    s = a - b @ d_inv_c
    if _cond_estimate(s) >= COND_LIMIT:
        raise SingularBlock("Schur complement a - b d^-1 c is numerically singular")
    try:
        a_inv_b = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularBlock("block a is numerically singular") from exc
    s_d = d - c @ a_inv_b
    if _cond_estimate(s_d) >= COND_LIMIT:
        raise SingularBlock("Schur complement d - c a^-1 b is numerically singular")

    tl = np.linalg.inv(s)
    b_d_inv = np.linalg.solve(d.T, b.T).T
    tr = -tl @ b_d_inv
    bl = -d_inv_c @ tl
    br = np.linalg.inv(s_d)

    m = np.block([[a, b], [c, d]])
    m_inv = np.block([[tl, tr], [bl, br]])
    resid = np.abs(m @ m_inv - np.eye(na + nd)).max()
    if resid > 1e-8:
        raise SingularBlock(f"block inverse residual {resid:.3e} exceeds 1e-8")
    return tl, tr, bl, br
